#pragma once

// Combinatorial dyadic grid D(I): an interval is named by its generation
// (level k) and its position among the 2^k intervals of that generation.
// Real endpoints are never materialized.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <utility>

#include "sparsebell/rational.hpp"

namespace sparsebell {

/// Deepest level an address may name; indices must fit in 64 bits.
inline constexpr std::uint32_t kMaxAddressLevel = 62;

struct NodeAddress {
  std::uint32_t level = 0;
  std::uint64_t index = 0;

  static constexpr NodeAddress root() { return {}; }

  friend constexpr auto operator<=>(const NodeAddress&, const NodeAddress&) = default;
};

/// Throws ContractError unless level <= kMaxAddressLevel and index < 2^level.
void require_valid(NodeAddress a);

[[nodiscard]] constexpr bool is_valid(NodeAddress a) {
  return a.level <= kMaxAddressLevel && a.index < (std::uint64_t{1} << a.level);
}

/// Left child (k+1, 2n) and right child (k+1, 2n+1).
[[nodiscard]] constexpr std::pair<NodeAddress, NodeAddress> children(NodeAddress a) {
  return {{a.level + 1, a.index * 2}, {a.level + 1, a.index * 2 + 1}};
}

/// Parent of a non-root address. Throws ContractError at the root.
[[nodiscard]] NodeAddress parent(NodeAddress a);

/// True iff the interval of `a` contains the interval of `b` (a == b included).
[[nodiscard]] constexpr bool is_ancestor(NodeAddress a, NodeAddress b) {
  if (a.level > b.level) return false;
  const auto shift = b.level - a.level;
  if (shift >= 64) return a.index == 0;
  return (b.index >> shift) == a.index;
}

/// Two dyadic intervals intersect iff one contains the other.
[[nodiscard]] constexpr bool intersects(NodeAddress a, NodeAddress b) {
  return is_ancestor(a, b) || is_ancestor(b, a);
}

/// |J| / |I| = 2^{-level}.
[[nodiscard]] DyadicRational relative_measure(NodeAddress a);

/// Position of `a` in a breadth-first (heap) layout: 2^level - 1 + index.
[[nodiscard]] constexpr std::uint64_t heap_index(NodeAddress a) {
  return (std::uint64_t{1} << a.level) - 1 + a.index;
}

/// Maps an address given relative to the sub-tree rooted at `local_root`
/// into the enclosing grid.
[[nodiscard]] constexpr NodeAddress embed(NodeAddress local_root, NodeAddress local) {
  return {local_root.level + local.level, (local_root.index << local.level) + local.index};
}

std::ostream& operator<<(std::ostream& os, NodeAddress a);

}  // namespace sparsebell
