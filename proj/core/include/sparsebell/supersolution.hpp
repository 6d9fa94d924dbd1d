#pragma once

// Exhaustive exact verification that a function G on [0, C] x R is a
// supersolution: the obstacle condition G = 1 for lambda <= 0, midpoint
// concavity in A, the jump inequality G(A+1, l+1) >= G(A, l), and the
// combined two-point main inequality. Also a Bellman-induction tracer that
// runs the main inequality down a concrete sequence.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparsebell/candidate.hpp"
#include "sparsebell/carleson_seq.hpp"
#include "sparsebell/rational.hpp"

namespace sparsebell {

/// A in {j / 2^a_exp} intersected with [0, C]; lambda from an explicit list.
struct CheckGrid {
  GeneralRational C;
  unsigned a_exp = 0;
  std::vector<GeneralRational> lambdas;  // ascending, unique
  std::size_t max_recorded = 64;         // violations kept per report

  /// Integers lambda_min..lambda_max plus `extra` (sorted and de-duplicated).
  static CheckGrid make(const GeneralRational& C, unsigned a_exp, long lambda_min, long lambda_max,
                        std::vector<GeneralRational> extra = {});

  /// Number of A values, floor(C * 2^a_exp) + 1.
  [[nodiscard]] std::uint64_t a_count() const;
  [[nodiscard]] GeneralRational a_at(std::uint64_t j) const;
  [[nodiscard]] std::string describe() const;
};

enum class ViolationKind { obstacle, concavity, jump, main };

std::string_view to_string(ViolationKind kind);

/// A strict exact failure: lhs < rhs where the inequality demands lhs >= rhs
/// (for the obstacle, lhs/rhs are G and 1 ordered so that lhs < rhs).
struct Violation {
  ViolationKind kind = ViolationKind::obstacle;
  std::vector<BellmanPoint> points;
  GeneralRational lhs;
  GeneralRational rhs;
};

struct CheckReport {
  ViolationKind kind = ViolationKind::obstacle;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::vector<Violation> recorded;  // the first grid.max_recorded violations

  [[nodiscard]] bool ok() const { return violations == 0; }
};

struct MainInequalityReport {
  CheckReport main;
  CheckReport concavity;
  CheckReport jump;
  /// main.ok() == (concavity.ok() && jump.ok()).
  bool lemma_equivalence = false;
};

/// f(A, l) = 1 for l <= 0 and 0 otherwise: below every supersolution but
/// itself failing the jump inequality at (0, 0) -> (1, 1).
BellmanFunction counterexample_function(const GeneralRational& C);

CheckReport check_obstacle(const BellmanFunction& fn, const CheckGrid& grid);

/// G((A1 + A2)/2, l) >= (G(A1, l) + G(A2, l)) / 2 for all grid pairs.
CheckReport check_midpoint_concavity(const BellmanFunction& fn, const CheckGrid& grid);

/// G(A + 1, l + 1) >= G(A, l) for grid A <= C - 1.
CheckReport check_jump(const BellmanFunction& fn, const CheckGrid& grid);

/// G((A1 + A2)/2 + g, l + g) >= (G(A1, l) + G(A2, l)) / 2 for g in {0, 1}
/// with the shifted average <= C; concavity and jump are checked alongside.
MainInequalityReport check_main_inequality(const BellmanFunction& fn, const CheckGrid& grid);

/// How often each case of the candidate's concavity and jump proofs occurs
/// on a grid. A min(1, x) sits in its "1" branch iff x >= 1.
struct LemmaCoverage {
  static constexpr std::array<std::string_view, 5> kConcavityCases = {"1", "2a", "2b", "2c", "3"};
  static constexpr std::array<std::string_view, 9> kJumpCases = {"1",  "2a", "2b", "3a", "3b",
                                                                 "3c", "3d", "4",  "5"};

  std::array<std::uint64_t, 5> concavity{};
  std::array<std::uint64_t, 9> jump{};

  /// Hits per top-level case: concavity {1, 2, 3}, jump {1, 2, 3, 4, 5}.
  [[nodiscard]] std::array<std::uint64_t, 3> concavity_top() const;
  [[nodiscard]] std::array<std::uint64_t, 5> jump_top() const;
  [[nodiscard]] bool all_top_level_cases() const;

  LemmaCoverage& operator+=(const LemmaCoverage& other);
};

LemmaCoverage lemma_case_coverage(const CandidateParams& params, const CheckGrid& grid);

struct TraceLevel {
  unsigned level = 0;
  GeneralRational mean_value;      // 2^-k sum over D_k of G(A_J, l_J)
  std::uint64_t node_violations = 0;  // J at this level with G(J) < mean over its children
  bool holds = true;               // mean_value >= next level's mean_value
};

/// Bellman induction on a finite sequence of depth N. Levels 0..N are the
/// tree itself; level N + 1 holds the (unselected) children of the leaves,
/// where A_J = 0 and l_J = l - h(J).
struct InductionTrace {
  GeneralRational root_value;
  std::vector<TraceLevel> levels;
  DyadicRational stopping_mass;  // 2^-(N+1) #{terminal J : l_J <= 0}
  DyadicRational level_set;      // V_l(alpha)
  bool stopping_matches = false;    // stopping_mass == level_set
  bool final_bound_holds = false;   // last mean_value >= level_set
  bool holds = false;
  std::optional<unsigned> first_failure;  // level k whose step to k+1 fails
};

InductionTrace induction_trace(const BellmanFunction& fn, const CarlesonSeq& seq,
                               const GeneralRational& lambda);

}  // namespace sparsebell
