#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "sparsebell/candidate.hpp"
#include "sparsebell/errors.hpp"

using namespace sparsebell;

namespace {

GeneralRational q(long p, long d = 1) { return {BigInt(p), BigInt(d)}; }

GeneralRational eval(const GeneralRational& C, const GeneralRational& A, const GeneralRational& l) {
  return candidate_eval(CandidateParams::make(C), {A, l});
}

}  // namespace

TEST(CandidateParams, Fields) {
  const auto p = CandidateParams::make(q(16, 5));
  EXPECT_EQ(p.floor_C, 3);
  EXPECT_EQ(p.frac_C, q(1, 5));
  EXPECT_EQ(p.decay, q(11, 16));
  EXPECT_EQ(GeneralRational(p.floor_C) + p.frac_C, p.C);
  EXPECT_EQ(CandidateParams::make(1).decay, q(0));
  EXPECT_THROW(CandidateParams::make(q(1, 2)), DomainError);
}

TEST(Candidate, SpotValues) {
  EXPECT_EQ(eval(2, 2, 3), q(1, 2));
  EXPECT_EQ(eval(q(16, 5), q(16, 5), 4), q(11, 15));
  EXPECT_EQ(eval(q(16, 5), q(8, 5), 5), q(121, 480));
  EXPECT_EQ(eval(7, 7, 8), q(6, 7));
  for (const auto& C : {q(1), q(3, 2), q(16, 5), q(7)}) EXPECT_EQ(eval(C, 1, -1), 1);
}

TEST(Candidate, SeamAtFloorC) {
  // lambda = floor(C) stays in the middle branch.
  EXPECT_EQ(eval(q(16, 5), q(3), 3), q(1));
  EXPECT_EQ(eval(q(16, 5), q(3, 2), 3), q(1, 2));
  EXPECT_EQ(eval(q(16, 5), q(3, 2), q(7, 2)), q(3, 2) / 3 * q(11, 16));
}

TEST(Candidate, DomainErrors) {
  EXPECT_THROW(eval(2, q(-1, 4), 1), DomainError);
  EXPECT_THROW(eval(2, q(9, 4), 1), DomainError);
  EXPECT_THROW(candidate_c1({q(3, 2), 1}), DomainError);
  EXPECT_THROW(candidate_c2({q(5, 2), 1}), DomainError);
  EXPECT_THROW(candidate_c32({q(17, 5), 1}), DomainError);
  EXPECT_THROW(eval(2, 1, q(1000000)), DomainError);
}

TEST(SpecialCases, C1) {
  EXPECT_EQ(candidate_c1({q(1, 2), 1}), q(1, 2));
  EXPECT_EQ(candidate_c1({1, 2}), 0);
  EXPECT_EQ(candidate_c1({0, 0}), 1);
}

TEST(SpecialCases, C2) {
  EXPECT_EQ(candidate_c2({q(3, 2), 1}), 1);
  EXPECT_EQ(candidate_c2({1, 2}), q(1, 2));
  EXPECT_EQ(candidate_c2({2, 4}), q(1, 4));
}

TEST(SpecialCases, C32) {
  EXPECT_EQ(candidate_c32({q(16, 5), 4}), q(11, 15));
  EXPECT_EQ(candidate_c32({q(3, 2), 2}), q(3, 4));
  EXPECT_EQ(candidate_c32({q(16, 5), 3}), 1);
}

TEST(Candidate, MatchesOracleAndProperties) {
  for (const auto& C : {q(1), q(3, 2), q(2), q(5, 2), q(16, 5), q(7)}) {
    const auto params = CandidateParams::make(C);
    const long top = to_long((C * 16).floor());
    for (long j = 0; j <= top; ++j) {
      const GeneralRational A = q(j, 16);
      GeneralRational previous = 2;
      for (long twice = -6; twice <= 2 * (params.floor_C + 6); ++twice) {
        const GeneralRational lambda = q(twice, 2);
        const GeneralRational v = candidate_eval(params, {A, lambda});
        ASSERT_EQ(oracle::to_q(v), oracle::candidate(oracle::to_q(C), oracle::to_q(A), oracle::to_q(lambda)));
        ASSERT_GE(v, 0);
        ASSERT_LE(v, 1);
        ASSERT_LE(v, previous);  // non-increasing in lambda
        ASSERT_EQ(v, candidate_eval(params, {A, GeneralRational(ceil_level(lambda))}));
        if (j > 0) {
          ASSERT_GE(v, candidate_eval(params, {q(j - 1, 16), lambda}));
        }
        previous = v;
      }
    }
  }
}

TEST(Surface, ShapeAndCsv) {
  const auto rows = candidate_surface(CandidateParams::make(2), 2, -1, 4);
  ASSERT_EQ(rows.size(), 9u * 6u);
  EXPECT_EQ(rows.front().A, 0);
  EXPECT_EQ(rows.front().lambda, -1);
  bool found = false;
  for (const auto& r : rows) {
    if (r.A == q(1, 2) && r.lambda == 1) {
      EXPECT_EQ(r.value, q(1, 2));
      found = true;
    }
  }
  EXPECT_TRUE(found);

  for (const auto& r : candidate_surface(CandidateParams::make(1), 3, 2, 2)) EXPECT_EQ(r.value, 0);

  std::ostringstream os;
  write_surface_csv(os, candidate_surface(CandidateParams::make(2), 0, 0, 1));
  EXPECT_EQ(os.str(), "A,lambda,value\n0/1,0,1/1\n0/1,1,0/1\n1/1,0,1/1\n1/1,1,1/1\n2/1,0,1/1\n2/1,1,1/1\n");
}
