#include <gtest/gtest.h>

#include <random>

#include "sparsebell/dyadic_grid.hpp"
#include "sparsebell/errors.hpp"

using namespace sparsebell;

TEST(NodeAddress, Children) {
  EXPECT_EQ(children({0, 0}), std::make_pair(NodeAddress{1, 0}, NodeAddress{1, 1}));
  EXPECT_EQ(children({1, 1}), std::make_pair(NodeAddress{2, 2}, NodeAddress{2, 3}));
  EXPECT_EQ(children({3, 5}), std::make_pair(NodeAddress{4, 10}, NodeAddress{4, 11}));
}

TEST(NodeAddress, Parent) {
  EXPECT_EQ(parent({4, 11}), (NodeAddress{3, 5}));
  EXPECT_EQ(parent({1, 0}), NodeAddress::root());
  EXPECT_THROW((void)parent(NodeAddress::root()), ContractError);
}

TEST(NodeAddress, IsAncestor) {
  EXPECT_TRUE(is_ancestor({0, 0}, {5, 17}));
  EXPECT_TRUE(is_ancestor({2, 1}, {4, 7}));
  EXPECT_FALSE(is_ancestor({2, 1}, {2, 2}));
  EXPECT_TRUE(is_ancestor({2, 1}, {2, 1}));
  EXPECT_FALSE(is_ancestor({4, 7}, {2, 1}));
  EXPECT_FALSE(is_ancestor({2, 1}, {4, 8}));
}

TEST(NodeAddress, RelativeMeasure) {
  EXPECT_EQ(relative_measure({0, 0}), DyadicRational(1));
  EXPECT_EQ(relative_measure({3, 5}), DyadicRational::parse("1/8"));
  EXPECT_EQ(relative_measure({10, 0}), DyadicRational::parse("1/1024"));
}

TEST(NodeAddress, Validity) {
  EXPECT_TRUE(is_valid({3, 7}));
  EXPECT_FALSE(is_valid({3, 8}));
  EXPECT_THROW(require_valid({2, 4}), ContractError);
  EXPECT_NO_THROW(require_valid({62, 5}));
  EXPECT_THROW(require_valid({63, 0}), ContractError);
}

TEST(NodeAddress, HeapIndexAndEmbed) {
  EXPECT_EQ(heap_index({0, 0}), 0u);
  EXPECT_EQ(heap_index({2, 3}), 6u);
  EXPECT_EQ(embed({2, 1}, {0, 0}), (NodeAddress{2, 1}));
  EXPECT_EQ(embed({2, 1}, {1, 1}), (NodeAddress{3, 3}));
  EXPECT_EQ(embed({1, 1}, {2, 2}), (NodeAddress{3, 6}));
}

TEST(NodeAddress, LevelsPartitionTheInterval) {
  for (std::uint32_t k = 0; k <= 10; ++k) {
    DyadicRational total;
    for (std::uint64_t n = 0; n < (std::uint64_t{1} << k); ++n) total += relative_measure({k, n});
    EXPECT_EQ(total, DyadicRational(1)) << "level " << k;
  }
}

// Any two addresses are nested or disjoint; nested ones have ordered levels.
TEST(NodeAddress, Trichotomy) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5000; ++trial) {
    const auto la = static_cast<std::uint32_t>(rng() % 9);
    const auto lb = static_cast<std::uint32_t>(rng() % 9);
    const NodeAddress a{la, rng() % (std::uint64_t{1} << la)};
    const NodeAddress b{lb, rng() % (std::uint64_t{1} << lb)};
    // Independent check: compare half-open intervals [i/2^l, (i+1)/2^l) scaled to 2^8.
    const std::uint64_t a0 = a.index << (8 - la), a1 = (a.index + 1) << (8 - la);
    const std::uint64_t b0 = b.index << (8 - lb), b1 = (b.index + 1) << (8 - lb);
    const bool overlap = a0 < b1 && b0 < a1;
    const bool a_contains_b = a0 <= b0 && b1 <= a1;
    ASSERT_EQ(intersects(a, b), overlap);
    ASSERT_EQ(is_ancestor(a, b), a_contains_b);
    if (is_ancestor(a, b) && is_ancestor(b, a)) ASSERT_EQ(a, b);
  }
}
