#pragma once

// Finite binary Carleson sequences on a truncated dyadic tree, and the
// quantities derived from them: Carleson averages, the Carleson constant,
// alpha-children, sparse generations, the height function and level sets.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sparsebell/dyadic_grid.hpp"
#include "sparsebell/rational.hpp"

namespace sparsebell {

/// A binary sequence alpha selecting dyadic intervals of levels 0..depth.
///
/// Immutable after construction. Subtree sums are filled by one bottom-up pass,
/// so carleson_average() is O(1).
class CarlesonSeq {
 public:
  /// Dense storage is 2^(depth+1) nodes, so depth is capped.
  static constexpr unsigned kMaxDepth = 20;

  CarlesonSeq() : CarlesonSeq(0, {}) {}

  /// Duplicate addresses are merged. Throws ContractError for addresses below
  /// `depth` or for depth > kMaxDepth.
  CarlesonSeq(unsigned depth, std::vector<NodeAddress> selected);

  [[nodiscard]] unsigned depth() const { return depth_; }
  /// Selected addresses in lexicographic (level, index) order.
  [[nodiscard]] std::span<const NodeAddress> selected() const { return selected_; }
  [[nodiscard]] bool empty() const { return selected_.empty(); }
  [[nodiscard]] bool is_selected(NodeAddress a) const;

  /// Sum over selected K inside J of 2^(depth - K.level); zero below the tree.
  [[nodiscard]] std::uint64_t subtree_mass(NodeAddress j) const;

  /// A(alpha; J) = (1/|J|) * sum_{K subset J, K selected} |K|.
  [[nodiscard]] DyadicRational carleson_average(NodeAddress j) const;

  friend bool operator==(const CarlesonSeq& a, const CarlesonSeq& b) {
    return a.depth_ == b.depth_ && a.selected_ == b.selected_;
  }

 private:
  unsigned depth_ = 0;
  std::vector<NodeAddress> selected_;
  std::vector<std::uint8_t> flags_;
  std::vector<std::uint64_t> mass_;
};

struct CarlesonBound {
  DyadicRational constant;
  NodeAddress witness;  // an interval attaining the supremum
};

struct ValidationReport {
  DyadicRational carleson_constant;
  DyadicRational average_at_root;
  bool is_C_carleson = false;
  NodeAddress worst_witness;
};

/// sup_J A(alpha; J), evaluated on selected intervals only. Zero (witnessed
/// by the root) for the empty sequence.
CarlesonBound carleson_constant(const CarlesonSeq& seq);

ValidationReport validate(const CarlesonSeq& seq, const GeneralRational& C);

/// Maximal selected intervals strictly inside j, in address order.
std::vector<NodeAddress> alpha_children(const CarlesonSeq& seq, NodeAddress j);

/// [G^0, G^1, ...] up to (excluding) the first empty generation.
std::vector<std::vector<NodeAddress>> sparse_generations(const CarlesonSeq& seq);

/// |S^m| / |I|; zero when G^m is empty.
DyadicRational generation_measure(const CarlesonSeq& seq, unsigned m);

/// Number of selected intervals containing the leaf (inclusive).
/// Throws ContractError unless leaf.level == seq.depth().
unsigned height_at(const CarlesonSeq& seq, NodeAddress leaf);

/// V_lambda = |{h >= lambda}| / |I|, which is 1 for lambda <= 0 and
/// |S^(ceil(lambda) - 1)| / |I| otherwise.
DyadicRational level_set_measure(const CarlesonSeq& seq, const GeneralRational& lambda);

/// Keeps selections with level < n; the result has depth n.
/// Throws ContractError when n > seq.depth().
CarlesonSeq truncate(const CarlesonSeq& seq, unsigned n);

/// A random sequence with Carleson constant <= C. Candidates are visited top
/// down and a selection is rejected if it would push some enclosing average
/// above C. Deterministic in `seed`.
CarlesonSeq random_carleson(unsigned depth, const GeneralRational& C, std::uint64_t seed);

/// {"format": "carleson-seq/1", "depth": N, "selected": [[level, index], ...]}
std::string to_json(const CarlesonSeq& seq);

/// Parses the interchange format. Throws ParseError with line/field context.
CarlesonSeq seq_from_json(std::string_view text);

}  // namespace sparsebell
