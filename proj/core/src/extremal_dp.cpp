#include "sparsebell/extremal_dp.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <ostream>
#include <string>
#include <thread>

#include "sparsebell/candidate.hpp"
#include "sparsebell/errors.hpp"

namespace sparsebell {

namespace {

constexpr std::uint64_t kNoChoice = ~std::uint64_t{0};

std::uint64_t floor_times_pow2(const GeneralRational& x, unsigned e) {
  return (x * GeneralRational(BigInt(1) << e, BigInt(1))).floor().get_ui();
}

/// Mass of `a` at depth d, after the range checks shared by every entry point.
std::uint64_t checked_mass(const GeneralRational& C, unsigned d, const DyadicRational& a) {
  if (a.sign() < 0) throw ContractError("average must be non-negative, got " + a.to_string());
  if (compare(a, C) > 0) {
    throw AdmissibilityError("average " + a.to_string() + " exceeds the Carleson bound " +
                             C.to_string());
  }
  if (a > DyadicRational(static_cast<long>(d) + 1)) {
    throw ContractError("average " + a.to_string() + " exceeds the maximum " +
                        std::to_string(d + 1) + " at depth " + std::to_string(d));
  }
  if (a.log2_denominator() > d) {
    throw PrecisionError("average " + a.to_string() + " is not on the 2^-" + std::to_string(d) +
                         " grid");
  }
  return a.scaled_numerator(d).get_ui();
}

/// A split that is always feasible: select the root whenever the mass allows
/// it, then fill the left child as far as its cap permits.
std::uint64_t greedy_choice(std::uint64_t j, unsigned d, std::uint64_t child_cap) {
  const std::uint64_t gamma = j >= (std::uint64_t{1} << d) ? 1 : 0;
  const std::uint64_t s = j - (gamma << d);
  return (std::min(s, child_cap) << 1) | gamma;
}

std::optional<std::uint64_t> env_count(const char* name) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  std::uint64_t n = 0;
  const char* end = raw + std::strlen(raw);
  const auto [ptr, ec] = std::from_chars(raw, end, n);
  if (ec != std::errc() || ptr != end || n == 0) {
    throw ParseError(std::string(name) + " must be a positive integer, got '" + raw + "'");
  }
  return n;
}

}  // namespace

DpLimits DpLimits::from_env() {
  DpLimits limits;
  if (auto cap = env_count("SPARSEBELL_CELL_CAP")) limits.cell_cap = *cap;
  if (auto depth = env_count("SPARSEBELL_MAX_DEPTH")) {
    if (*depth > kHardMaxDepth) {
      throw ContractError("SPARSEBELL_MAX_DEPTH must be <= " + std::to_string(kHardMaxDepth));
    }
    limits.max_depth = static_cast<unsigned>(*depth);
  }
  return limits;
}

ExtremalTable ExtremalTable::build(const GeneralRational& C, unsigned D, long m_max,
                                   const DpLimits& limits) {
  if (C < GeneralRational(1)) throw ContractError("C must be >= 1");
  if (m_max < 0) throw ContractError("m_max must be >= 0");
  if (limits.max_depth > DpLimits::kHardMaxDepth) {
    throw ContractError("depth limit exceeds " + std::to_string(DpLimits::kHardMaxDepth));
  }
  if (D > limits.max_depth) {
    throw ResourceLimitError("depth " + std::to_string(D) + " exceeds the configured limit " +
                             std::to_string(limits.max_depth));
  }

  ExtremalTable t;
  t.C_ = C;
  t.depth_ = D;
  t.m_max_ = m_max;
  // Heights never exceed D + 1, so levels above D + 2 repeat level D + 2 (all zero).
  const long stored = std::min<long>(m_max, static_cast<long>(D) + 2);
  t.caps_.resize(D + 1);
  std::uint64_t cells = 0;
  for (unsigned d = 0; d <= D; ++d) {
    const GeneralRational bound = std::min(C, GeneralRational(static_cast<long>(d) + 1));
    t.caps_[d] = floor_times_pow2(bound, d);
    cells += (t.caps_[d] + 1) * static_cast<std::uint64_t>(stored);
  }
  if (cells > limits.cell_cap) {
    throw ResourceLimitError("table needs " + std::to_string(cells) + " cells, cap is " +
                             std::to_string(limits.cell_cap) + " (SPARSEBELL_CELL_CAP)");
  }
  t.values_.resize(D + 1);
  t.choices_.resize(D + 1);
  for (unsigned d = 0; d <= D; ++d) {
    t.values_[d].assign((t.caps_[d] + 1) * static_cast<std::uint64_t>(stored), 0);
    t.choices_[d].assign(t.values_[d].size(), kNoChoice);
    t.fill_level(d, std::max(1u, limits.threads));
    if (limits.verify_upper_bound) t.verify_level(d);
  }
  return t;
}

std::uint64_t ExtremalTable::cell_count() const {
  std::uint64_t n = 0;
  for (const auto& v : values_) n += v.size();
  return n;
}

std::uint64_t ExtremalTable::numerator(unsigned d, std::uint64_t j, long m) const {
  if (m <= 0) return std::uint64_t{1} << d;
  const long stored = std::min<long>(m_max_, static_cast<long>(depth_) + 2);
  if (m > stored) return 0;
  return values_[d][static_cast<std::uint64_t>(m - 1) * (caps_[d] + 1) + j];
}

std::uint64_t ExtremalTable::choice(unsigned d, std::uint64_t j, long m) const {
  const long stored = std::min<long>(m_max_, static_cast<long>(depth_) + 2);
  if (m <= 0 || stored == 0) return greedy_choice(j, d, d == 0 ? 0 : caps_[d - 1]);
  m = std::min(m, stored);
  return choices_[d][static_cast<std::uint64_t>(m - 1) * (caps_[d] + 1) + j];
}

void ExtremalTable::fill_level(unsigned d, unsigned threads) {
  const std::uint64_t width = caps_[d] + 1;
  const auto levels = static_cast<long>(values_[d].size() / width);
  const std::uint64_t full = std::uint64_t{1} << d;

  if (d == 0) {
    // A single interval: selected (j = 1) gives height 1 everywhere.
    for (long m = 1; m <= levels; ++m) {
      for (std::uint64_t j = 0; j < width; ++j) {
        const std::uint64_t at = static_cast<std::uint64_t>(m - 1) * width + j;
        values_[0][at] = (j == 1 && m == 1) ? 1 : 0;
        choices_[0][at] = j;
      }
    }
    return;
  }

  const std::uint64_t child_cap = caps_[d - 1];
  auto fill_range = [&](std::uint64_t j_begin, std::uint64_t j_end) {
    for (long m = 1; m <= levels; ++m) {
      for (std::uint64_t j = j_begin; j < j_end; ++j) {
        std::uint64_t best = 0;
        std::uint64_t best_choice = kNoChoice;
        for (std::uint64_t gamma = 0; gamma <= 1 && best < full; ++gamma) {
          if (gamma == 1 && j < full) break;
          const std::uint64_t s = j - gamma * full;
          const long child_m = m - static_cast<long>(gamma);
          const std::uint64_t lo = s > child_cap ? s - child_cap : 0;
          const std::uint64_t hi = s / 2;
          for (std::uint64_t i1 = lo; i1 <= hi; ++i1) {
            const std::uint64_t v = numerator(d - 1, i1, child_m) + numerator(d - 1, s - i1, child_m);
            if (best_choice == kNoChoice || v > best) {
              best = v;
              best_choice = (i1 << 1) | gamma;
              if (best == full) break;
            }
          }
        }
        if (best_choice == kNoChoice) {
          throw Error("internal: no feasible split at depth " + std::to_string(d) + ", mass " +
                      std::to_string(j));
        }
        const std::uint64_t at = static_cast<std::uint64_t>(m - 1) * width + j;
        values_[d][at] = best;
        choices_[d][at] = best_choice;
      }
    }
  };

  const std::uint64_t workers = std::min<std::uint64_t>(threads, width);
  if (workers <= 1) {
    fill_range(0, width);
    return;
  }
  // Level-synchronous: depth d - 1 is complete, cells of depth d are independent.
  std::vector<std::jthread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::uint64_t chunk = (width + workers - 1) / workers;
  for (std::uint64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        fill_range(w * chunk, std::min(width, (w + 1) * chunk));
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void ExtremalTable::verify_level(unsigned d) const {
  const auto params = CandidateParams::make(C_);
  const std::uint64_t width = caps_[d] + 1;
  const auto levels = static_cast<long>(values_[d].size() / width);
  for (long m = 1; m <= levels; ++m) {
    for (std::uint64_t j = 0; j < width; ++j) {
      const DyadicRational a(BigInt(static_cast<unsigned long>(j)), d);
      const DyadicRational v(BigInt(static_cast<unsigned long>(numerator(d, j, m))), d);
      const GeneralRational bound = candidate_eval(params, {a.to_rational(), m});
      if (compare(v, bound) > 0) {
        throw Error("internal: F_" + std::to_string(d) + "(" + a.to_string() + ", " +
                    std::to_string(m) + ") = " + v.to_string() + " exceeds the candidate " +
                    bound.to_string());
      }
    }
  }
}

ExtremalTable::Resolved ExtremalTable::resolve(const DpKey& key) const {
  if (!contains(key)) {
    throw LookupError("no cell (depth " + std::to_string(key.depth) + ", a = " +
                      key.average.to_string() + ", m = " + std::to_string(key.level) + ")");
  }
  return {key.depth, key.average.scaled_numerator(key.depth).get_ui(), key.level};
}

bool ExtremalTable::contains(const DpKey& key) const {
  if (key.depth > depth_ || key.level > m_max_) return false;
  if (key.average.sign() < 0 || key.average.log2_denominator() > key.depth) return false;
  return key.average.scaled_numerator(key.depth) <= caps_[key.depth];
}

DyadicRational ExtremalTable::value(const DpKey& key) const {
  const auto r = resolve(key);
  return {BigInt(static_cast<unsigned long>(numerator(r.depth, r.mass, r.level))), r.depth};
}

DpCell ExtremalTable::cell(const DpKey& key) const {
  const auto r = resolve(key);
  DpCell c;
  c.value = value(key);
  c.leaf = r.depth == 0 || r.level <= 0;
  if (c.leaf) return c;
  const std::uint64_t ch = choice(r.depth, r.mass, r.level);
  c.gamma = static_cast<unsigned>(ch & 1);
  const std::uint64_t s = r.mass - (static_cast<std::uint64_t>(c.gamma) << r.depth);
  const std::uint64_t i1 = ch >> 1;
  c.a_left = DyadicRational(BigInt(static_cast<unsigned long>(i1)), r.depth - 1);
  c.a_right = DyadicRational(BigInt(static_cast<unsigned long>(s - i1)), r.depth - 1);
  return c;
}

CarlesonSeq reconstruct_witness(const ExtremalTable& table, const DpKey& key) {
  const auto root = table.resolve(key);
  struct Frame {
    NodeAddress node;
    std::uint64_t mass;
    long level;
  };
  std::vector<NodeAddress> selected;
  std::vector<Frame> stack{{NodeAddress::root(), root.mass, root.level}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const unsigned d = root.depth - f.node.level;
    if (d == 0) {
      if (f.mass == 1) selected.push_back(f.node);
      continue;
    }
    const std::uint64_t ch = table.choice(d, f.mass, f.level);
    const std::uint64_t gamma = ch & 1;
    const std::uint64_t s = f.mass - (gamma << d);
    const std::uint64_t i1 = ch >> 1;
    if (gamma == 1) selected.push_back(f.node);
    const auto [left, right] = children(f.node);
    const long child_level = f.level - static_cast<long>(gamma);
    stack.push_back({right, s - i1, child_level});
    stack.push_back({left, i1, child_level});
  }
  return {root.depth, std::move(selected)};
}

DpResult dp_max_levelset(const GeneralRational& C, unsigned D, const DyadicRational& a, long m,
                         const DpLimits& limits) {
  checked_mass(C, D, a);
  const auto table = ExtremalTable::build(C, D, std::max(0L, m), limits);
  const DpKey key{D, a, m};
  return {table.value(key), reconstruct_witness(table, key)};
}

std::vector<DpRow> dp_table(const GeneralRational& C, unsigned D, long m_max,
                            const DpLimits& limits) {
  const auto table = ExtremalTable::build(C, D, m_max, limits);
  std::vector<DpRow> rows;
  rows.reserve((table.mass_cap(D) + 1) * static_cast<std::uint64_t>(m_max + 1));
  for (std::uint64_t j = 0; j <= table.mass_cap(D); ++j) {
    const DyadicRational a(BigInt(static_cast<unsigned long>(j)), D);
    for (long m = 0; m <= m_max; ++m) {
      rows.push_back({a, m, DyadicRational(BigInt(static_cast<unsigned long>(table.numerator(D, j, m))), D)});
    }
  }
  return rows;
}

void write_dp_csv(std::ostream& os, std::span<const DpRow> rows) {
  os << "a,m,value\n";
  for (const auto& row : rows) os << row.a << ',' << row.m << ',' << row.value << '\n';
}

std::vector<ConvergenceEntry> convergence_report(const GeneralRational& C, const DyadicRational& a,
                                                 long m, unsigned D_max,
                                                 const DpLimits& limits) {
  checked_mass(C, D_max, a);
  const auto params = CandidateParams::make(C);
  const GeneralRational candidate = candidate_eval(params, {a.to_rational(), m});
  const auto table = ExtremalTable::build(C, D_max, std::max(0L, m), limits);
  std::vector<ConvergenceEntry> out;
  for (unsigned d = 0; d <= D_max; ++d) {
    const DpKey key{d, a, m};
    if (!table.contains(key)) continue;
    ConvergenceEntry e;
    e.depth = d;
    e.value = table.value(key);
    e.candidate = candidate;
    e.gap = candidate - e.value.to_rational();
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace sparsebell
