#pragma once

// Independent reference implementations used by the tests. Everything here is
// computed from scratch with boost::multiprecision and plain loops over the
// tree; none of it calls into the library's arithmetic or cached sums.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sparsebell/carleson_seq.hpp"
#include "sparsebell/rational.hpp"

namespace oracle {

using Z = boost::multiprecision::cpp_int;
using Q = boost::multiprecision::cpp_rational;

inline Q to_q(const sparsebell::GeneralRational& x) {
  return Q(Z(x.numerator().get_str()), Z(x.denominator().get_str()));
}

inline Q to_q(const sparsebell::DyadicRational& x) {
  return Q(Z(x.numerator().get_str()), Z(1) << x.log2_denominator());
}

inline Z floor_q(const Q& x) {
  const Z n = boost::multiprecision::numerator(x);
  const Z d = boost::multiprecision::denominator(x);
  Z q = n / d;  // truncates toward zero
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

inline Z ceil_q(const Q& x) { return -floor_q(-x); }

inline Q pow_q(Q base, unsigned long e) {
  Q out = 1;
  while (e-- > 0) out *= base;
  return out;
}

/// The closed-form candidate, transcribed independently.
inline Q candidate(const Q& C, const Q& A, const Q& lambda) {
  if (lambda <= 0) return 1;
  const Z n = ceil_q(lambda);
  const Z fc = floor_q(C);
  if (Q(n) <= Q(fc)) return A / Q(n) < 1 ? A / Q(n) : Q(1);
  const Q decay = (C - 1) / C;
  return A / Q(fc) * pow_q(decay, static_cast<unsigned long>(n - fc));
}

/// A binary sequence on the depth-N tree as raw flags, heap ordered.
struct Tree {
  unsigned depth = 0;
  std::vector<char> flags;  // node (l, i) at (1 << l) - 1 + i

  explicit Tree(unsigned n) : depth(n), flags((std::size_t{2} << n) - 1, 0) {}

  static Tree from_mask(unsigned n, std::uint64_t mask) {
    Tree t(n);
    for (std::size_t k = 0; k < t.flags.size(); ++k) t.flags[k] = static_cast<char>((mask >> k) & 1);
    return t;
  }

  static Tree from(const sparsebell::CarlesonSeq& seq) {
    Tree t(seq.depth());
    for (const auto& a : seq.selected()) t.flags[(std::size_t{1} << a.level) - 1 + a.index] = 1;
    return t;
  }

  [[nodiscard]] bool at(unsigned l, std::uint64_t i) const {
    return flags[(std::size_t{1} << l) - 1 + i] != 0;
  }

  [[nodiscard]] std::vector<sparsebell::NodeAddress> addresses() const {
    std::vector<sparsebell::NodeAddress> out;
    for (unsigned l = 0; l <= depth; ++l) {
      for (std::uint64_t i = 0; i < (std::uint64_t{1} << l); ++i) {
        if (at(l, i)) out.push_back({l, i});
      }
    }
    return out;
  }

  [[nodiscard]] sparsebell::CarlesonSeq to_seq() const { return {depth, addresses()}; }

  /// A(alpha; (l, i)) by walking every descendant.
  [[nodiscard]] Q average(unsigned l, std::uint64_t i) const {
    Z mass = 0;
    for (unsigned k = l; k <= depth; ++k) {
      const std::uint64_t first = i << (k - l);
      const std::uint64_t last = (i + 1) << (k - l);
      for (std::uint64_t x = first; x < last; ++x) {
        if (at(k, x)) mass += Z(1) << (depth - k);
      }
    }
    return Q(mass, Z(1) << (depth - l));
  }

  /// Supremum of the average over every node, selected or not.
  [[nodiscard]] Q sup_all() const {
    Q best = 0;
    for (unsigned l = 0; l <= depth; ++l) {
      for (std::uint64_t i = 0; i < (std::uint64_t{1} << l); ++i) {
        const Q a = average(l, i);
        if (a > best) best = a;
      }
    }
    return best;
  }

  [[nodiscard]] unsigned height(std::uint64_t leaf) const {
    unsigned h = 0;
    for (unsigned k = 0; k <= depth; ++k) h += at(k, leaf >> (depth - k)) ? 1 : 0;
    return h;
  }

  /// Fraction of leaves whose height is at least lambda.
  [[nodiscard]] Q level_set(const Q& lambda) const {
    std::uint64_t count = 0;
    const std::uint64_t leaves = std::uint64_t{1} << depth;
    for (std::uint64_t t = 0; t < leaves; ++t) {
      if (Q(height(t)) >= lambda) ++count;
    }
    return Q(Z(count), Z(leaves));
  }
};

/// max V_m over all depth-D sequences with sup average <= C, keyed by
/// (root mass a * 2^D, m). Missing keys have no admissible sequence.
inline std::map<std::pair<std::uint64_t, long>, Q> brute_force_dp(const Q& C, unsigned D, long m_max) {
  std::map<std::pair<std::uint64_t, long>, Q> best;
  const unsigned nodes = (2u << D) - 1;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nodes); ++mask) {
    const Tree t = Tree::from_mask(D, mask);
    if (t.sup_all() > C) continue;
    const Q root = t.average(0, 0) * Q(Z(1) << D);
    const auto mass = static_cast<std::uint64_t>(boost::multiprecision::numerator(root));
    for (long m = 0; m <= m_max; ++m) {
      const Q v = t.level_set(Q(m));
      auto [it, inserted] = best.try_emplace({mass, m}, v);
      if (!inserted && v > it->second) it->second = v;
    }
  }
  return best;
}

}  // namespace oracle
