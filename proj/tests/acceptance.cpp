// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sparsebell/admissible.hpp"
#include "sparsebell/candidate.hpp"
#include "sparsebell/carleson_seq.hpp"
#include "sparsebell/extremal_dp.hpp"
#include "sparsebell/supersolution.hpp"

using namespace sparsebell;

namespace {

GeneralRational q(long p, long d = 1) { return {BigInt(p), BigInt(d)}; }

struct Outcome {
  bool ok = true;
  std::string detail;
};

/// Records the first failure; later checks still run so the detail is useful.
struct Check {
  Outcome out;
  std::size_t count = 0;

  void expect(bool cond, const std::function<std::string()>& what) {
    ++count;
    if (!cond && out.ok) {
      out.ok = false;
      out.detail = what();
    }
  }
  Outcome done(std::string summary) {
    if (out.ok) out.detail = std::move(summary);
    return out;
  }
};

std::string str(const GeneralRational& x) { return x.to_string(); }

std::vector<GeneralRational> lambda_set(const GeneralRational& C) {
  std::vector<GeneralRational> ls;
  for (long l = -2; l <= to_long(C.ceil()) + 6; ++l) ls.emplace_back(l);
  ls.push_back(q(1, 2));
  ls.push_back(q(7, 2));
  return ls;
}

std::vector<GeneralRational> a_grid(const GeneralRational& C, unsigned e) {
  std::vector<GeneralRational> as;
  const long top = to_long((C * GeneralRational(BigInt(1) << e, 1)).floor());
  for (long j = 0; j <= top; ++j) as.emplace_back(BigInt(j), BigInt(1) << e);
  return as;
}

/// The shared random corpus for criteria 7 and 8.
struct CorpusItem {
  GeneralRational C;
  CarlesonSeq seq;
};

std::vector<CorpusItem> corpus() {
  std::vector<CorpusItem> items;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const GeneralRational C = GeneralRational(1) + q(static_cast<long>(seed % 29), 4);
    items.push_back({C, random_carleson(static_cast<unsigned>(seed % 9), C, 1000 + seed)});
  }
  return items;
}

Outcome closed_forms() {
  Check c;
  struct Case {
    GeneralRational C;
    std::function<GeneralRational(const BellmanPoint&)> special;
  };
  const std::vector<Case> cases = {{1, candidate_c1}, {2, candidate_c2}, {q(16, 5), candidate_c32}};
  for (const auto& [C, special] : cases) {
    const auto params = CandidateParams::make(C);
    for (const auto& A : a_grid(C, 6)) {
      for (const auto& l : lambda_set(C)) {
        const GeneralRational v = candidate_eval(params, {A, l});
        const GeneralRational s = special({A, l});
        c.expect(v == s, [&] { return "C=" + str(C) + " at (" + str(A) + ", " + str(l) + "): " + str(v) + " vs " + str(s); });
        c.expect(oracle::to_q(v) == oracle::candidate(oracle::to_q(C), oracle::to_q(A), oracle::to_q(l)),
                 [&] { return "oracle disagrees at C=" + str(C) + " (" + str(A) + ", " + str(l) + ")"; });
      }
    }
  }
  const auto two = candidate_eval(CandidateParams::make(2), {2, 3});
  const auto three = candidate_eval(CandidateParams::make(q(16, 5)), {q(16, 5), 4});
  c.expect(two == q(1, 2), [&] { return "G_2(2,3) = " + str(two); });
  c.expect(three == q(11, 15), [&] { return "G_3.2(3.2,4) = " + str(three); });
  return c.done(std::to_string(c.count) + " exact comparisons; G_2(2,3) = 1/2, G_3.2(3.2,4) = 11/15");
}

Outcome supersolution() {
  Check c;
  LemmaCoverage total;
  std::ostringstream times;
  for (const auto& C : {q(1), q(3, 2), q(2), q(16, 5), q(7)}) {
    const auto start = std::chrono::steady_clock::now();
    const auto grid = CheckGrid::make(C, 8, -2, to_long(C.ceil()) + 6, {q(1, 2), q(7, 2)});
    const auto fn = candidate_function(C);
    const auto obstacle = check_obstacle(fn, grid);
    const auto concavity = check_midpoint_concavity(fn, grid);
    const auto jump = check_jump(fn, grid);
    const auto main = check_main_inequality(fn, grid);
    for (const auto* r : {&obstacle, &concavity, &jump, &main.main}) {
      c.expect(r->ok(), [&] { return std::string(to_string(r->kind)) + " fails for C=" + str(C); });
    }
    total += lemma_case_coverage(CandidateParams::make(C), grid);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(secs < 30.0, [&] { return "C=" + str(C) + " took " + std::to_string(secs) + " s"; });
    char buf[64];
    std::snprintf(buf, sizeof buf, " C=%s %.1fs", str(C).c_str(), secs);
    times << buf;
  }
  const auto ct = total.concavity_top();
  const auto jt = total.jump_top();
  std::ostringstream cov;
  cov << "concavity cases";
  for (const auto n : ct) cov << ' ' << n;
  cov << ", jump cases";
  for (const auto n : jt) cov << ' ' << n;
  c.expect(total.all_top_level_cases(), [&] { return "uncovered case: " + cov.str(); });
  return c.done(cov.str() + ";" + times.str());
}

Outcome counterexample() {
  Check c;
  const auto grid = CheckGrid::make(2, 6, -2, 8, {q(1, 2), q(7, 2)});
  const auto f = counterexample_function(2);
  c.expect(check_obstacle(f, grid).ok(), [] { return "obstacle check fails"; });
  c.expect(check_midpoint_concavity(f, grid).ok(), [] { return "concavity check fails"; });
  const auto jump = check_jump(f, grid);
  c.expect(!jump.ok(), [] { return "jump check passes"; });
  if (!jump.ok()) {
    const auto& v = jump.recorded.front();
    const bool pair = v.points == std::vector<BellmanPoint>{{0, 0}, {1, 1}};
    c.expect(pair && v.lhs == 0 && v.rhs == 1, [&] {
      return "first violation lhs " + str(v.lhs) + " rhs " + str(v.rhs);
    });
  }
  return c.done("jump witness (0, 0) -> (1, 1), lhs 0, rhs 1");
}

Outcome dp_sharpness() {
  Check c;
  const auto full = dp_max_levelset(2, 2, DyadicRational(2), 2);
  const auto g22 = candidate_eval(CandidateParams::make(2), {2, 2});
  c.expect(full.value == DyadicRational(1) && g22 == 1, [&] {
    return "F_2(2,2) = " + full.value.to_string() + ", G_2(2,2) = " + str(g22);
  });
  const auto w = validate(full.witness, 2);
  c.expect(w.is_C_carleson && w.average_at_root == DyadicRational(2), [] { return "F_2(2,2) witness invalid"; });

  const auto report = convergence_report(2, DyadicRational(2), 3, 10);
  std::ostringstream gaps;
  std::optional<GeneralRational> previous;
  unsigned covered = 0;
  for (const auto& e : report) {
    if (e.depth < 3) continue;
    ++covered;
    gaps << ' ' << e.gap;
    c.expect(e.candidate == q(1, 2), [&] { return "candidate " + str(e.candidate); });
    c.expect(e.gap.sign() >= 0, [&] { return "negative gap at D=" + std::to_string(e.depth); });
    if (previous) {
      c.expect(e.gap <= *previous, [&] { return "gap increases at D=" + std::to_string(e.depth); });
    }
    previous = e.gap;
  }
  c.expect(covered == 8, [&] { return "convergence report covers " + std::to_string(covered) + " depths"; });
  return c.done("F_2(2,2) = 1; gaps for D = 3..10:" + gaps.str());
}

Outcome brute_force() {
  Check c;
  std::size_t keys = 0;
  for (const auto& C : {q(1), q(2)}) {
    for (unsigned D = 0; D <= 3; ++D) {
      const auto brute = oracle::brute_force_dp(oracle::to_q(C), D, 4);
      const auto table = ExtremalTable::build(C, D, 4);
      for (const auto& [key, best] : brute) {
        const DyadicRational a(BigInt(static_cast<unsigned long>(key.first)), D);
        const auto r = dp_max_levelset(C, D, a, key.second);
        ++keys;
        c.expect(oracle::to_q(r.value) == best, [&, key = key] {
          return "C=" + str(C) + " D=" + std::to_string(D) + " a=" + a.to_string() + " m=" +
                 std::to_string(key.second);
        });
        c.expect(oracle::Tree::from(r.witness).level_set(key.second) == best, [&] { return "witness value"; });
      }
      // Every mass the table represents is reachable by some sequence.
      for (std::uint64_t j = 0; j <= table.mass_cap(D); ++j) {
        c.expect(brute.count({j, 0}) == 1, [&] { return "unreachable mass " + std::to_string(j); });
      }
    }
  }
  return c.done(std::to_string(keys) + " (a, m) keys agree with exhaustive enumeration");
}

Outcome constructor() {
  Check c;
  std::mt19937_64 rng(2024);
  struct Triple {
    GeneralRational a, C;
    unsigned depth;
  };
  std::vector<Triple> triples = {
      {q(13, 16), 1, 4}, {q(13, 16), 2, 6}, {q(11, 8), 2, 4}, {q(11, 8), 2, 3}, {2, 2, 2}, {3, 3, 3}, {7, 7, 8}};
  while (triples.size() < 500) {
    const GeneralRational C(BigInt(static_cast<long>(4 + rng() % 29)), BigInt(4));
    const unsigned e = static_cast<unsigned>(rng() % 5);
    const long top = to_long((C * GeneralRational(BigInt(1) << e, 1)).floor());
    const GeneralRational a(BigInt(static_cast<long>(rng() % static_cast<std::uint64_t>(top + 1))), BigInt(1) << e);
    const long roof = std::max(0L, to_long(a.floor()) - 1);
    triples.push_back({a, C, static_cast<unsigned>(roof + static_cast<long>(e) + static_cast<long>(rng() % 3))});
  }
  for (const auto& t : triples) {
    const auto seq = construct_admissible(t.a, t.C, t.depth);
    const auto tree = oracle::Tree::from(seq);
    const auto what = [&] { return "a=" + str(t.a) + " C=" + str(t.C) + " depth " + std::to_string(t.depth); };
    c.expect(tree.average(0, 0) == oracle::to_q(t.a), what);
    c.expect(tree.sup_all() <= oracle::to_q(t.C), what);
    c.expect(seq.carleson_average(NodeAddress::root()).to_rational() == t.a, what);
  }
  return c.done(std::to_string(triples.size()) + " triples, root average exact and C-Carleson");
}

bool nested(const std::vector<NodeAddress>& inner, const std::vector<NodeAddress>& outer) {
  for (const auto& j : inner) {
    bool inside = false;
    for (const auto& k : outer) {
      if (k.level < j.level && (j.index >> (j.level - k.level)) == k.index) inside = true;
    }
    if (!inside) return false;
  }
  return true;
}

Outcome structural(const std::vector<CorpusItem>& items) {
  Check c;
  for (std::size_t n = 0; n < items.size(); ++n) {
    const auto& seq = items[n].seq;
    const auto tree = oracle::Tree::from(seq);
    const auto what = [&] { return "sequence " + std::to_string(n); };
    const auto gens = sparse_generations(seq);
    for (long m = 1; m <= static_cast<long>(seq.depth()) + 2; ++m) {
      const DyadicRational v = level_set_measure(seq, m);
      c.expect(v == generation_measure(seq, static_cast<unsigned>(m - 1)), what);
      c.expect(oracle::to_q(v) == tree.level_set(m), what);
      for (const auto& frac : {q(1, 3), q(1, 2), q(15, 16)}) {
        c.expect(level_set_measure(seq, GeneralRational(m - 1) + frac) == v, what);
      }
    }
    c.expect(oracle::to_q(carleson_constant(seq).constant) == tree.sup_all(), what);
    for (std::size_t g = 1; g < gens.size(); ++g) {
      c.expect(nested(gens[g], gens[g - 1]), what);
      c.expect(generation_measure(seq, static_cast<unsigned>(g)) <=
                   generation_measure(seq, static_cast<unsigned>(g - 1)),
               what);
    }
  }
  return c.done(std::to_string(items.size()) + " sequences, " + std::to_string(c.count) + " identities");
}

Outcome sandwich(const std::vector<CorpusItem>& items) {
  Check c;
  std::size_t traced = 0;
  for (std::size_t n = 0; n < items.size(); ++n) {
    const auto& [C, seq] = items[n];
    const auto params = CandidateParams::make(C);
    const GeneralRational A = seq.carleson_average(NodeAddress::root()).to_rational();
    for (long l = -1; l <= 8; ++l) {
      const DyadicRational v = level_set_measure(seq, l);
      const GeneralRational g = candidate_eval(params, {A, l});
      c.expect(compare(v, g) <= 0, [&] {
        return "sequence " + std::to_string(n) + " lambda " + std::to_string(l) + ": V " + v.to_string() + " > G " + str(g);
      });
    }
    if (n % 5 == 0) {
      ++traced;
      const auto fn = candidate_function(C);
      for (long l = -1; l <= 8; ++l) {
        const auto t = induction_trace(fn, seq, l);
        bool every_level = t.holds;
        for (const auto& lvl : t.levels) every_level = every_level && lvl.holds && lvl.node_violations == 0;
        c.expect(every_level, [&] { return "induction fails for sequence " + std::to_string(n); });
      }
    }
  }
  return c.done(std::to_string(items.size()) + " sequences sandwiched, " + std::to_string(traced) + " traced");
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const auto items = corpus();
  const std::vector<Criterion> criteria = {
      {1, "closed-form agreement", 1, closed_forms},
      {2, "supersolution certificate", 150, supersolution},
      {3, "counterexample detection", 1, counterexample},
      {4, "DP sharpness probe", 120, dp_sharpness},
      {5, "brute-force oracle equivalence", 60, brute_force},
      {6, "constructor exactness", 10, constructor},
      {7, "structural identities", 30, [&] { return structural(items); }},
      {8, "least-supersolution sandwich", 60, [&] { return sandwich(items); }},
  };
  bool all = true;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > cr.budget_seconds) {
      o = {false, "over the " + std::to_string(static_cast<int>(cr.budget_seconds)) + " s budget"};
    }
    all = all && o.ok;
    std::printf("%s criterion %d (%s) [%.2fs]: %s\n", o.ok ? "PASS" : "FAIL", cr.number, cr.name, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
