#include "sparsebell/admissible.hpp"

#include <string>

#include "sparsebell/errors.hpp"

namespace sparsebell {

namespace {

void hang_fractional(std::span<const std::uint8_t> bits, NodeAddress local_root,
                     std::vector<NodeAddress>& out) {
  NodeAddress search = local_root;
  for (const std::uint8_t bit : bits) {
    const auto [left, right] = children(search);
    if (bit != 0) {
      out.push_back(right);
      search = left;
    } else {
      search = right;
    }
  }
}

CarlesonSeq staircase_partition(unsigned depth) {
  if (depth == 0) {
    throw PrecisionError("the partition construction needs depth >= 1");
  }
  std::vector<NodeAddress> selected;
  NodeAddress j = NodeAddress::root();
  for (unsigned k = 1; k <= depth; ++k) {
    const auto [left, right] = children(j);
    selected.push_back(left);
    if (k == depth) selected.push_back(right);
    j = right;
  }
  return {depth, std::move(selected)};
}

}  // namespace

std::vector<std::uint8_t> binary_expansion(const DyadicRational& a, unsigned depth) {
  if (a.sign() < 0 || a >= DyadicRational(1)) {
    throw ContractError("binary_expansion needs 0 <= a < 1, got " + a.to_string());
  }
  if (a.log2_denominator() > depth) {
    throw PrecisionError(a.to_string() + " needs " + std::to_string(a.log2_denominator()) +
                         " binary digits, only " + std::to_string(depth) + " available");
  }
  const BigInt scaled = a.scaled_numerator(depth);
  std::vector<std::uint8_t> bits(depth);
  for (unsigned m = 0; m < depth; ++m) {
    bits[m] = static_cast<std::uint8_t>(mpz_tstbit(scaled.get_mpz_t(), depth - 1 - m));
  }
  return bits;
}

CarlesonSeq construct_fractional(const DyadicRational& a, unsigned depth) {
  const auto bits = binary_expansion(a, depth);
  std::vector<NodeAddress> selected;
  hang_fractional(bits, NodeAddress::root(), selected);
  return {depth, std::move(selected)};
}

CarlesonSeq construct_admissible(const GeneralRational& a, const GeneralRational& C, unsigned depth,
                                 ConstructionStyle style) {
  if (C < GeneralRational(1)) throw ContractError("the Carleson bound C must be >= 1");
  if (a.sign() < 0) throw ContractError("the average must be non-negative, got " + a.to_string());
  if (a > C) {
    throw AdmissibilityError("average " + a.to_string() + " exceeds the Carleson bound " +
                             C.to_string());
  }
  if (depth > CarlesonSeq::kMaxDepth) {
    throw ContractError("depth exceeds " + std::to_string(CarlesonSeq::kMaxDepth));
  }

  if (style == ConstructionStyle::partition) {
    if (a != GeneralRational(1)) {
      throw ContractError("the partition construction realizes a = 1 only");
    }
    return staircase_partition(depth);
  }

  const DyadicRational fractional = DyadicRational::from_rational(a.frac());
  const BigInt whole_big = a.floor();
  if (whole_big == 0) return construct_fractional(fractional, depth);

  const long whole = to_long(whole_big);
  const long roof_bottom = whole - 1;
  if (roof_bottom > static_cast<long>(depth)) {
    throw PrecisionError("a roof of " + std::to_string(whole) + " generations needs depth >= " +
                         std::to_string(roof_bottom));
  }
  const unsigned bits_needed = fractional.log2_denominator();
  if (roof_bottom + static_cast<long>(bits_needed) > static_cast<long>(depth)) {
    throw PrecisionError("fractional part " + fractional.to_string() + " below a roof of " +
                         std::to_string(whole) + " generations needs depth >= " +
                         std::to_string(roof_bottom + bits_needed));
  }

  std::vector<NodeAddress> selected;
  for (std::uint32_t level = 0; level <= static_cast<std::uint32_t>(roof_bottom); ++level) {
    for (std::uint64_t index = 0; index < (std::uint64_t{1} << level); ++index) {
      selected.push_back({level, index});
    }
  }
  if (!fractional.is_zero()) {
    const auto bits = binary_expansion(fractional, bits_needed);
    const auto bottom = static_cast<std::uint32_t>(roof_bottom);
    for (std::uint64_t index = 0; index < (std::uint64_t{1} << bottom); ++index) {
      hang_fractional(bits, {bottom, index}, selected);
    }
  }
  return {depth, std::move(selected)};
}

}  // namespace sparsebell
