#include "sparsebell/supersolution.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "sparsebell/errors.hpp"

namespace sparsebell {

namespace {

__extension__ typedef __int128 int128;

// Rows whose common-denominator numerators stay below this bound are compared
// with 128-bit integer arithmetic; everything else falls back to GMP.
constexpr std::int64_t kFastLimit = std::int64_t{1} << 62;

/// G(t / 2^exp, lambda) for t = 0..count-1, with an optional common-denominator
/// integer image of the whole row.
class ValueRow {
 public:
  ValueRow(const BellmanFunction& fn, const GeneralRational& lambda, std::uint64_t count,
           unsigned exp) {
    const BigInt scale = BigInt(1) << exp;
    values_.reserve(count);
    BigInt lcm = 1;
    for (std::uint64_t t = 0; t < count; ++t) {
      values_.push_back(fn({GeneralRational(BigInt(static_cast<unsigned long>(t)), scale), lambda}));
      const BigInt den = values_.back().denominator();
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
    }
    fast_ = lcm <= kFastLimit;
    if (!fast_) return;
    den_ = lcm.get_si();
    numerators_.reserve(count);
    for (const auto& v : values_) {
      const BigInt n = v.numerator() * (lcm / v.denominator());
      if (abs(n) > kFastLimit) {
        fast_ = false;
        numerators_.clear();
        return;
      }
      numerators_.push_back(n.get_si());
    }
  }

  [[nodiscard]] const GeneralRational& at(std::uint64_t t) const { return values_[t]; }
  [[nodiscard]] bool fast() const { return fast_; }
  [[nodiscard]] std::int64_t numerator(std::uint64_t t) const { return numerators_[t]; }
  [[nodiscard]] std::int64_t denominator() const { return den_; }

 private:
  std::vector<GeneralRational> values_;
  std::vector<std::int64_t> numerators_;
  std::int64_t den_ = 1;
  bool fast_ = false;
};

/// Sign of 2 * top[tm] - (bottom[t1] + bottom[t2]).
int twice_minus_sum(const ValueRow& top, std::uint64_t tm, const ValueRow& bottom, std::uint64_t t1,
                    std::uint64_t t2) {
  if (top.fast() && bottom.fast()) {
    const int128 lhs = static_cast<int128>(top.numerator(tm)) * 2 * bottom.denominator();
    const int128 rhs =
        (static_cast<int128>(bottom.numerator(t1)) + bottom.numerator(t2)) * top.denominator();
    return (lhs > rhs) - (lhs < rhs);
  }
  const mpq_class lhs = 2 * top.at(tm).get();
  const mpq_class rhs = bottom.at(t1).get() + bottom.at(t2).get();
  return cmp(lhs, rhs);
}

void count_violation(CheckReport& report, std::size_t cap, auto&& make_violation) {
  ++report.violations;
  if (report.recorded.size() < cap) report.recorded.push_back(make_violation());
}

struct Wanted {
  bool concavity = false;
  bool jump = false;
  bool main = false;
};

CheckReport report_of(ViolationKind kind) {
  CheckReport r;
  r.kind = kind;
  return r;
}

struct EngineReports {
  CheckReport concavity = report_of(ViolationKind::concavity);
  CheckReport jump = report_of(ViolationKind::jump);
  CheckReport main = report_of(ViolationKind::main);
};

std::uint64_t grid_top(const GeneralRational& C, unsigned exp) {
  const BigInt top = (C * GeneralRational(BigInt(1) << exp, BigInt(1))).floor();
  if (!top.fits_ulong_p()) throw ContractError("grid too large");
  return top.get_ui();
}

void require_grid_in_domain(const BellmanFunction& fn, const CheckGrid& grid) {
  if (grid.C > fn.C) {
    throw ContractError("grid extends to C = " + grid.C.to_string() + " but " + fn.name +
                        " is defined on [0, " + fn.C.to_string() + "] only");
  }
}

EngineReports run_engine(const BellmanFunction& fn, const CheckGrid& grid, Wanted wanted) {
  require_grid_in_domain(fn, grid);
  const unsigned fine_exp = grid.a_exp + 1;
  const std::uint64_t top_coarse = grid.a_count() - 1;  // largest j with j / 2^d <= C
  const std::uint64_t top_fine = grid_top(grid.C, fine_exp);
  const std::uint64_t one_coarse = std::uint64_t{1} << grid.a_exp;
  const std::uint64_t one_fine = std::uint64_t{1} << fine_exp;
  const BigInt fine_scale = BigInt(1) << fine_exp;
  const std::size_t cap = grid.max_recorded;

  std::map<GeneralRational, ValueRow> rows;
  auto row = [&](const GeneralRational& lambda) -> const ValueRow& {
    auto it = rows.find(lambda);
    if (it == rows.end()) it = rows.emplace(lambda, ValueRow(fn, lambda, top_fine + 1, fine_exp)).first;
    return it->second;
  };
  auto fine_a = [&](std::uint64_t t) {
    return GeneralRational(BigInt(static_cast<unsigned long>(t)), fine_scale);
  };

  EngineReports out;
  for (const GeneralRational& lambda : grid.lambdas) {
    rows.erase(rows.begin(), rows.lower_bound(lambda));
    const ValueRow& base = row(lambda);

    if (wanted.concavity || wanted.main) {
      for (std::uint64_t j1 = 0; j1 <= top_coarse; ++j1) {
        for (std::uint64_t j2 = j1; j2 <= top_coarse; ++j2) {
          if (wanted.concavity) ++out.concavity.checked;
          if (wanted.main) ++out.main.checked;
          if (twice_minus_sum(base, j1 + j2, base, 2 * j1, 2 * j2) >= 0) continue;
          auto make = [&](ViolationKind kind) {
            return Violation{kind,
                             {{grid.a_at(j1), lambda}, {grid.a_at(j2), lambda}, {fine_a(j1 + j2), lambda}},
                             base.at(j1 + j2),
                             (base.at(2 * j1) + base.at(2 * j2)) / GeneralRational(2)};
          };
          if (wanted.concavity) count_violation(out.concavity, cap, [&] { return make(ViolationKind::concavity); });
          if (wanted.main) count_violation(out.main, cap, [&] { return make(ViolationKind::main); });
        }
      }
    }

    if (!(wanted.jump || wanted.main)) continue;
    const GeneralRational lifted = lambda + GeneralRational(1);
    const ValueRow& up = row(lifted);

    if (wanted.jump && top_coarse >= one_coarse) {
      for (std::uint64_t j = 0; j + one_coarse <= top_coarse; ++j) {
        ++out.jump.checked;
        const std::uint64_t t = 2 * j;
        if (twice_minus_sum(up, t + one_fine, base, t, t) >= 0) continue;
        count_violation(out.jump, cap, [&] {
          return Violation{ViolationKind::jump,
                           {{grid.a_at(j), lambda}, {fine_a(t + one_fine), lifted}},
                           up.at(t + one_fine),
                           base.at(t)};
        });
      }
    }

    if (wanted.main && top_fine >= one_fine) {
      for (std::uint64_t j1 = 0; j1 <= top_coarse && j1 + j1 + one_fine <= top_fine; ++j1) {
        for (std::uint64_t j2 = j1; j2 <= top_coarse && j1 + j2 + one_fine <= top_fine; ++j2) {
          ++out.main.checked;
          const std::uint64_t tm = j1 + j2 + one_fine;
          if (twice_minus_sum(up, tm, base, 2 * j1, 2 * j2) >= 0) continue;
          count_violation(out.main, cap, [&] {
            return Violation{ViolationKind::main,
                             {{grid.a_at(j1), lambda}, {grid.a_at(j2), lambda}, {fine_a(tm), lifted}},
                             up.at(tm),
                             (base.at(2 * j1) + base.at(2 * j2)) / GeneralRational(2)};
          });
        }
      }
    }
  }
  return out;
}

}  // namespace

CheckGrid CheckGrid::make(const GeneralRational& C, unsigned a_exp, long lambda_min,
                          long lambda_max, std::vector<GeneralRational> extra) {
  if (C < GeneralRational(1)) throw ContractError("C must be >= 1");
  if (a_exp > 20) throw ContractError("grid exponent must be <= 20");
  if (lambda_min > lambda_max) throw ContractError("lambda_min exceeds lambda_max");
  CheckGrid grid;
  grid.C = C;
  grid.a_exp = a_exp;
  for (long l = lambda_min; l <= lambda_max; ++l) grid.lambdas.emplace_back(l);
  for (auto& l : extra) grid.lambdas.push_back(std::move(l));
  std::sort(grid.lambdas.begin(), grid.lambdas.end());
  grid.lambdas.erase(std::unique(grid.lambdas.begin(), grid.lambdas.end()), grid.lambdas.end());
  return grid;
}

std::uint64_t CheckGrid::a_count() const { return grid_top(C, a_exp) + 1; }

GeneralRational CheckGrid::a_at(std::uint64_t j) const {
  return {BigInt(static_cast<unsigned long>(j)), BigInt(1) << a_exp};
}

std::string CheckGrid::describe() const {
  std::ostringstream os;
  os << "A in {j/2^" << a_exp << "} on [0, " << C << "] (" << a_count() << " points); lambda in {";
  for (std::size_t i = 0; i < lambdas.size(); ++i) os << (i ? ", " : "") << lambdas[i];
  os << "}";
  return os.str();
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::obstacle: return "obstacle";
    case ViolationKind::concavity: return "concavity";
    case ViolationKind::jump: return "jump";
    case ViolationKind::main: return "main";
  }
  return "unknown";
}

BellmanFunction counterexample_function(const GeneralRational& C) {
  return {"counterexample", C, [C](const BellmanPoint& pt) {
            if (pt.A.sign() < 0 || pt.A > C) {
              throw DomainError("A = " + pt.A.to_string() + " outside [0, " + C.to_string() + "]");
            }
            return GeneralRational(pt.lambda.sign() <= 0 ? 1 : 0);
          }};
}

CheckReport check_obstacle(const BellmanFunction& fn, const CheckGrid& grid) {
  require_grid_in_domain(fn, grid);
  CheckReport report = report_of(ViolationKind::obstacle);
  const GeneralRational one(1);
  for (const auto& lambda : grid.lambdas) {
    if (lambda.sign() > 0) break;
    for (std::uint64_t j = 0; j < grid.a_count(); ++j) {
      ++report.checked;
      const BellmanPoint pt{grid.a_at(j), lambda};
      const GeneralRational v = fn(pt);
      if (v == one) continue;
      count_violation(report, grid.max_recorded, [&] {
        return v < one ? Violation{ViolationKind::obstacle, {pt}, v, one}
                       : Violation{ViolationKind::obstacle, {pt}, one, v};
      });
    }
  }
  return report;
}

CheckReport check_midpoint_concavity(const BellmanFunction& fn, const CheckGrid& grid) {
  return run_engine(fn, grid, {.concavity = true}).concavity;
}

CheckReport check_jump(const BellmanFunction& fn, const CheckGrid& grid) {
  return run_engine(fn, grid, {.jump = true}).jump;
}

MainInequalityReport check_main_inequality(const BellmanFunction& fn, const CheckGrid& grid) {
  auto reports = run_engine(fn, grid, {.concavity = true, .jump = true, .main = true});
  MainInequalityReport out;
  out.lemma_equivalence = reports.main.ok() == (reports.concavity.ok() && reports.jump.ok());
  out.main = std::move(reports.main);
  out.concavity = std::move(reports.concavity);
  out.jump = std::move(reports.jump);
  return out;
}

// ------------------------------------------------------------ coverage

std::array<std::uint64_t, 3> LemmaCoverage::concavity_top() const {
  return {concavity[0], concavity[1] + concavity[2] + concavity[3], concavity[4]};
}

std::array<std::uint64_t, 5> LemmaCoverage::jump_top() const {
  return {jump[0], jump[1] + jump[2], jump[3] + jump[4] + jump[5] + jump[6], jump[7], jump[8]};
}

bool LemmaCoverage::all_top_level_cases() const {
  const auto c = concavity_top();
  const auto j = jump_top();
  return std::all_of(c.begin(), c.end(), [](auto n) { return n > 0; }) &&
         std::all_of(j.begin(), j.end(), [](auto n) { return n > 0; });
}

LemmaCoverage& LemmaCoverage::operator+=(const LemmaCoverage& other) {
  for (std::size_t i = 0; i < concavity.size(); ++i) concavity[i] += other.concavity[i];
  for (std::size_t i = 0; i < jump.size(); ++i) jump[i] += other.jump[i];
  return *this;
}

LemmaCoverage lemma_case_coverage(const CandidateParams& params, const CheckGrid& grid) {
  LemmaCoverage cov;
  const std::uint64_t top = grid.a_count() - 1;
  const std::uint64_t one = std::uint64_t{1} << grid.a_exp;
  const GeneralRational floor_c(params.floor_C);

  for (const auto& lambda : grid.lambdas) {
    const GeneralRational lifted = lambda + GeneralRational(1);
    const bool obstacle = lambda.sign() <= 0;
    const bool middle = !obstacle && lambda <= floor_c;
    // min(1, A / n) is in its "1" branch iff j >= n * 2^d.
    const long n = middle ? ceil_level(lambda) : 0;
    const std::uint64_t saturate = static_cast<std::uint64_t>(n) * one;

    // Concavity cases over unordered pairs j1 <= j2.
    const std::uint64_t pairs = (top + 1) * (top + 2) / 2;
    if (obstacle) {
      cov.concavity[0] += pairs;
    } else if (!middle) {
      cov.concavity[4] += pairs;
    } else {
      const std::uint64_t below = std::min(saturate, top + 1);  // j < saturate
      const std::uint64_t above = top + 1 - below;
      cov.concavity[1] += above * (above + 1) / 2;
      cov.concavity[2] += above * below;
      cov.concavity[3] += below * (below + 1) / 2;
    }

    // Jump cases for A = j / 2^d <= C - 1.
    if (top < one) continue;
    const bool lifted_middle = lifted.sign() > 0 && lifted <= floor_c;
    const long n_up = lifted.sign() > 0 ? ceil_level(lifted) : 0;
    for (std::uint64_t j = 0; j + one <= top; ++j) {
      if (obstacle && !(lifted.sign() > 0)) {
        cov.jump[0] += 1;
      } else if (obstacle && lifted_middle) {
        const bool up_sat = j + one >= static_cast<std::uint64_t>(n_up) * one;
        cov.jump[up_sat ? 1 : 2] += 1;
      } else if (middle && lifted_middle) {
        const bool up_sat = j + one >= static_cast<std::uint64_t>(n_up) * one;
        const bool down_sat = j >= saturate;
        cov.jump[up_sat ? (down_sat ? 3 : 4) : (down_sat ? 5 : 6)] += 1;
      } else if (middle) {
        cov.jump[7] += 1;
      } else if (!obstacle) {
        cov.jump[8] += 1;
      }
    }
  }
  return cov;
}

// ------------------------------------------------------------ induction

InductionTrace induction_trace(const BellmanFunction& fn, const CarlesonSeq& seq,
                               const GeneralRational& lambda) {
  const unsigned n = seq.depth();
  if (n > 16) throw ContractError("induction_trace supports depth <= 16");

  InductionTrace trace;
  trace.level_set = level_set_measure(seq, lambda);

  // values[k][i]: G(A_J, l_J) for J = (k, i); level n + 1 is the terminal layer.
  std::vector<std::vector<GeneralRational>> values(n + 2);
  std::vector<unsigned> above(1, 0);  // selected strict ancestors of each node
  std::uint64_t stopped = 0;
  for (unsigned k = 0; k <= n + 1; ++k) {
    const std::uint64_t width = std::uint64_t{1} << k;
    values[k].reserve(width);
    std::vector<unsigned> next(k <= n ? 2 * width : 0);
    for (std::uint64_t i = 0; i < width; ++i) {
      const NodeAddress j{k, i};
      const GeneralRational lambda_j = lambda - GeneralRational(above[i]);
      const GeneralRational a_j =
          k <= n ? seq.carleson_average(j).to_rational() : GeneralRational(0);
      values[k].push_back(fn({a_j, lambda_j}));
      if (k == n + 1 && lambda_j.sign() <= 0) ++stopped;
      if (k <= n) {
        const unsigned below = above[i] + (seq.is_selected(j) ? 1u : 0u);
        next[2 * i] = below;
        next[2 * i + 1] = below;
      }
    }
    above = std::move(next);
  }

  trace.root_value = values[0][0];
  for (unsigned k = 0; k <= n + 1; ++k) {
    GeneralRational sum;
    for (const auto& v : values[k]) sum += v;
    TraceLevel level;
    level.level = k;
    level.mean_value = sum / GeneralRational(BigInt(1) << k, BigInt(1));
    if (k <= n) {
      for (std::uint64_t i = 0; i < values[k].size(); ++i) {
        const mpq_class children = values[k + 1][2 * i].get() + values[k + 1][2 * i + 1].get();
        if (cmp(2 * values[k][i].get(), children) < 0) ++level.node_violations;
      }
    }
    trace.levels.push_back(std::move(level));
  }
  for (unsigned k = 0; k + 1 < trace.levels.size(); ++k) {
    trace.levels[k].holds = trace.levels[k].mean_value >= trace.levels[k + 1].mean_value;
    if (!trace.levels[k].holds && !trace.first_failure) trace.first_failure = k;
  }

  trace.stopping_mass = DyadicRational(BigInt(static_cast<unsigned long>(stopped)), n + 1);
  trace.stopping_matches = trace.stopping_mass == trace.level_set;
  trace.final_bound_holds =
      compare(trace.level_set, trace.levels.back().mean_value) <= 0;
  trace.holds = !trace.first_failure && trace.final_bound_holds && trace.stopping_matches;
  return trace;
}

}  // namespace sparsebell
