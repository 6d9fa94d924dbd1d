#pragma once

// Builders for admissible sequences: a C-Carleson alpha with a prescribed
// root average A(alpha; I) = a.

#include <cstdint>
#include <vector>

#include "sparsebell/carleson_seq.hpp"
#include "sparsebell/rational.hpp"

namespace sparsebell {

enum class ConstructionStyle {
  roof,       // full generations 0..floor(a)-1, fractional part hung below
  partition,  // a = 1 only: alpha_I = 0 and a partition of I is selected
};

/// Bits b_1..b_depth with a = sum b_m 2^-m.
/// Requires 0 <= a < 1 (ContractError) and 2^depth * a integral (PrecisionError).
std::vector<std::uint8_t> binary_expansion(const DyadicRational& a, unsigned depth);

/// A pairwise-disjoint selection of total relative measure a, with alpha_I = 0.
/// At each step with search interval J: bit 1 selects J's right child and
/// continues in the left child; bit 0 continues in the right child.
CarlesonSeq construct_fractional(const DyadicRational& a, unsigned depth);

/// A sequence of the given depth with A(alpha; I) = a exactly and Carleson
/// constant <= C.
///
/// Throws AdmissibilityError for a > C, PrecisionError when the fractional
/// part of a is not dyadic or does not fit in the tree, and ContractError
/// for a < 0, C < 1, or the partition style with a != 1.
CarlesonSeq construct_admissible(const GeneralRational& a, const GeneralRational& C, unsigned depth,
                                 ConstructionStyle style = ConstructionStyle::roof);

}  // namespace sparsebell
