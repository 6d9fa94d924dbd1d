#pragma once

// The closed-form Bellman candidate
//
//   G(A, l) = 1                                      l <= 0
//           = min(1, A / ceil(l))                    0 < l <= floor(C)
//           = (A / floor(C)) ((C-1)/C)^(ceil(l) - floor(C))   otherwise
//
// on the domain [0, C] x R, plus the hand-derived special cases C = 1, 2, 16/5
// that serve as independent oracles for it.

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sparsebell/rational.hpp"

namespace sparsebell {

struct CandidateParams {
  GeneralRational C;
  long floor_C = 1;
  GeneralRational frac_C;
  GeneralRational decay;  // (C - 1) / C

  /// Throws DomainError for C < 1.
  static CandidateParams make(const GeneralRational& C);
};

struct BellmanPoint {
  GeneralRational A;
  GeneralRational lambda;

  friend bool operator==(const BellmanPoint&, const BellmanPoint&) = default;
};

/// ceil(lambda) as a machine integer.
long ceil_level(const GeneralRational& lambda);

/// Exact value of the candidate. Throws DomainError outside [0, C] x R.
GeneralRational candidate_eval(const CandidateParams& params, const BellmanPoint& pt);

/// C = 1: {1; A; 0} on l <= 0, 0 < l <= 1, l > 1.
GeneralRational candidate_c1(const BellmanPoint& pt);

/// C = 2: {1; min(1, A); A / 2^(ceil(l) - 1)}.
GeneralRational candidate_c2(const BellmanPoint& pt);

/// C = 16/5, written level by level: min(1, A/n) for n = ceil(l) <= 3 and
/// (A / 3.2)(2.2 / 3)(2.2 / 3.2)^(n - 4) above.
GeneralRational candidate_c32(const BellmanPoint& pt);

/// Any function on [0, C] x R, evaluated exactly.
struct BellmanFunction {
  std::string name;
  GeneralRational C;
  std::function<GeneralRational(const BellmanPoint&)> eval;

  GeneralRational operator()(const BellmanPoint& pt) const { return eval(pt); }
};

BellmanFunction candidate_function(const GeneralRational& C);
BellmanFunction c1_function();
BellmanFunction c2_function();
BellmanFunction c32_function();

struct SurfaceRow {
  GeneralRational A;
  long lambda = 0;
  GeneralRational value;
};

/// Values on A in {j / 2^grid_exp} intersected with [0, C], integer lambda in
/// [lambda_min, lambda_max]. Rows are A-major.
std::vector<SurfaceRow> candidate_surface(const CandidateParams& params, unsigned grid_exp,
                                          long lambda_min, long lambda_max);

/// Header "A,lambda,value"; rationals as "p/q".
void write_surface_csv(std::ostream& os, std::span<const SurfaceRow> rows);

}  // namespace sparsebell
