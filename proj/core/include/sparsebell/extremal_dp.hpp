#pragma once

// F_D(a, m) = max V_m(alpha) over C-Carleson sequences of depth D with root
// average exactly a, computed by dynamic programming over (depth, average,
// level) with witness reconstruction.
//
// A depth-d state with average a is stored by its integer mass j = a * 2^d,
// and values by their numerators over 2^d. The child mass cap
// floor(min(C, d) * 2^(d-1)) enforces the hereditary Carleson constraint.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sparsebell/carleson_seq.hpp"
#include "sparsebell/rational.hpp"

namespace sparsebell {

struct DpLimits {
  static constexpr unsigned kHardMaxDepth = CarlesonSeq::kMaxDepth;

  unsigned max_depth = 12;
  std::uint64_t cell_cap = std::uint64_t{1} << 22;  // stored (j, m) cells over all depths
  unsigned threads = 1;
  bool verify_upper_bound = true;  // every cell <= candidate, checked as it is filled

  /// Defaults, overridden by SPARSEBELL_CELL_CAP and SPARSEBELL_MAX_DEPTH.
  static DpLimits from_env();
};

struct DpKey {
  unsigned depth = 0;
  DyadicRational average;
  long level = 0;
};

struct DpCell {
  DyadicRational value;
  bool leaf = false;  // depth 0 or m <= 0: no stored split
  unsigned gamma = 0;
  DyadicRational a_left;
  DyadicRational a_right;
};

class ExtremalTable {
 public:
  /// Fills every depth 0..D and level 1..m_max. Throws ResourceLimitError if
  /// D exceeds limits.max_depth or the cell count exceeds limits.cell_cap.
  static ExtremalTable build(const GeneralRational& C, unsigned D, long m_max,
                             const DpLimits& limits = {});

  [[nodiscard]] const GeneralRational& C() const { return C_; }
  [[nodiscard]] unsigned depth() const { return depth_; }
  [[nodiscard]] long m_max() const { return m_max_; }

  /// Largest mass j = a * 2^d allowed at depth d.
  [[nodiscard]] std::uint64_t mass_cap(unsigned d) const { return caps_[d]; }
  [[nodiscard]] std::uint64_t cell_count() const;

  [[nodiscard]] bool contains(const DpKey& key) const;
  /// Throws LookupError for missing keys.
  [[nodiscard]] DyadicRational value(const DpKey& key) const;
  [[nodiscard]] DpCell cell(const DpKey& key) const;

  // Raw access by mass; m >= 1.
  [[nodiscard]] std::uint64_t numerator(unsigned d, std::uint64_t j, long m) const;

 private:
  friend CarlesonSeq reconstruct_witness(const ExtremalTable& table, const DpKey& key);

  struct Resolved {
    unsigned depth;
    std::uint64_t mass;
    long level;
  };
  [[nodiscard]] Resolved resolve(const DpKey& key) const;
  [[nodiscard]] std::uint64_t choice(unsigned d, std::uint64_t j, long m) const;
  void fill_level(unsigned d, unsigned threads);
  void verify_level(unsigned d) const;

  GeneralRational C_;
  unsigned depth_ = 0;
  long m_max_ = 0;
  std::vector<std::uint64_t> caps_;
  // values_[d][(m - 1) * (caps_[d] + 1) + j], choices_ alike: (i1 << 1) | gamma
  std::vector<std::vector<std::uint64_t>> values_;
  std::vector<std::vector<std::uint64_t>> choices_;
};

/// A sequence of depth key.depth realizing the stored value.
CarlesonSeq reconstruct_witness(const ExtremalTable& table, const DpKey& key);

struct DpResult {
  DyadicRational value;
  CarlesonSeq witness;
};

/// Throws PrecisionError when a is not on the 2^-D grid, AdmissibilityError
/// when a > C, ContractError when a < 0 or a > D + 1.
DpResult dp_max_levelset(const GeneralRational& C, unsigned D, const DyadicRational& a, long m,
                         const DpLimits& limits = {});

struct DpRow {
  DyadicRational a;
  long m = 0;
  DyadicRational value;
};

/// Every a on the 2^-D grid in [0, min(C, D + 1)] and m = 0..m_max, a-major.
std::vector<DpRow> dp_table(const GeneralRational& C, unsigned D, long m_max,
                            const DpLimits& limits = {});

/// Header "a,m,value"; numbers as "p/2^e".
void write_dp_csv(std::ostream& os, std::span<const DpRow> rows);

struct ConvergenceEntry {
  unsigned depth = 0;
  DyadicRational value;
  GeneralRational candidate;
  GeneralRational gap;  // candidate - value
};

/// F_D(a, m) for every D <= D_max at which a is a valid average.
std::vector<ConvergenceEntry> convergence_report(const GeneralRational& C, const DyadicRational& a,
                                                 long m, unsigned D_max,
                                                 const DpLimits& limits = {});

}  // namespace sparsebell
