#include "sparsebell/candidate.hpp"

#include <algorithm>
#include <ostream>

#include "sparsebell/errors.hpp"

namespace sparsebell {

namespace {

// Exact powers get expensive quickly; levels this far out are never needed.
constexpr long kMaxDecayExponent = 1 << 16;

void require_domain(const BellmanPoint& pt, const GeneralRational& C) {
  if (pt.A.sign() < 0 || pt.A > C) {
    throw DomainError("A = " + pt.A.to_string() + " lies outside [0, " + C.to_string() + "]");
  }
}

GeneralRational min_one(const GeneralRational& x) { return std::min(GeneralRational(1), x); }

GeneralRational decay_power(const GeneralRational& decay, long exponent) {
  if (exponent > kMaxDecayExponent) {
    throw DomainError("lambda too large for exact evaluation (exponent " +
                      std::to_string(exponent) + ")");
  }
  return decay.pow(static_cast<unsigned long>(exponent));
}

}  // namespace

CandidateParams CandidateParams::make(const GeneralRational& C) {
  if (C < GeneralRational(1)) throw DomainError("C must be >= 1, got " + C.to_string());
  CandidateParams p;
  p.C = C;
  p.floor_C = to_long(C.floor());
  p.frac_C = C.frac();
  p.decay = (C - 1) / C;
  return p;
}

long ceil_level(const GeneralRational& lambda) { return to_long(lambda.ceil()); }

GeneralRational candidate_eval(const CandidateParams& params, const BellmanPoint& pt) {
  require_domain(pt, params.C);
  if (pt.lambda.sign() <= 0) return 1;
  const long n = ceil_level(pt.lambda);
  if (pt.lambda <= GeneralRational(params.floor_C)) return min_one(pt.A / GeneralRational(n));
  // At C = 1 the decay is 0 and the exponent is >= 1, so this is exactly 0.
  if (params.decay.sign() == 0) return 0;
  return pt.A / GeneralRational(params.floor_C) * decay_power(params.decay, n - params.floor_C);
}

GeneralRational candidate_c1(const BellmanPoint& pt) {
  require_domain(pt, 1);
  if (pt.lambda.sign() <= 0) return 1;
  if (pt.lambda <= GeneralRational(1)) return pt.A;
  return 0;
}

GeneralRational candidate_c2(const BellmanPoint& pt) {
  require_domain(pt, 2);
  if (pt.lambda.sign() <= 0) return 1;
  if (pt.lambda <= GeneralRational(1)) return min_one(pt.A);
  const long n = ceil_level(pt.lambda);
  if (n - 1 > kMaxDecayExponent) throw DomainError("lambda too large for exact evaluation");
  return pt.A / GeneralRational(2).pow(static_cast<unsigned long>(n - 1));
}

GeneralRational candidate_c32(const BellmanPoint& pt) {
  const GeneralRational c(16, 5);
  require_domain(pt, c);
  if (pt.lambda.sign() <= 0) return 1;
  const long n = ceil_level(pt.lambda);
  if (n <= 3) return min_one(pt.A / GeneralRational(n));
  const GeneralRational first_step = GeneralRational(11, 5) / GeneralRational(3);
  const GeneralRational ratio = GeneralRational(11, 5) / c;
  return pt.A / c * first_step * decay_power(ratio, n - 4);
}

BellmanFunction candidate_function(const GeneralRational& C) {
  auto params = CandidateParams::make(C);
  return {"candidate", C,
          [params](const BellmanPoint& pt) { return candidate_eval(params, pt); }};
}

BellmanFunction c1_function() { return {"c1", 1, candidate_c1}; }
BellmanFunction c2_function() { return {"c2", 2, candidate_c2}; }
BellmanFunction c32_function() { return {"c32", GeneralRational(16, 5), candidate_c32}; }

std::vector<SurfaceRow> candidate_surface(const CandidateParams& params, unsigned grid_exp,
                                          long lambda_min, long lambda_max) {
  if (grid_exp > 24) throw ContractError("grid exponent too large");
  if (lambda_min > lambda_max) throw ContractError("empty lambda range");
  const BigInt scale = BigInt(1) << grid_exp;
  const long top = to_long((params.C * GeneralRational(scale, 1)).floor());
  std::vector<SurfaceRow> rows;
  rows.reserve(static_cast<std::size_t>((top + 1) * (lambda_max - lambda_min + 1)));
  for (long j = 0; j <= top; ++j) {
    const GeneralRational A(BigInt(j), scale);
    for (long l = lambda_min; l <= lambda_max; ++l) {
      rows.push_back({A, l, candidate_eval(params, {A, l})});
    }
  }
  return rows;
}

void write_surface_csv(std::ostream& os, std::span<const SurfaceRow> rows) {
  os << "A,lambda,value\n";
  for (const auto& row : rows) {
    os << row.A << ',' << row.lambda << ',' << row.value << '\n';
  }
}

}  // namespace sparsebell
