#pragma once

// Service-coverage management: per-SBS full/reduced radii, per-slice zoom
// bits, the coverage sets they induce, RB budgets and the interference
// indicator between (grid, slice) pairs.
//
// Indexing: BS index m = 0 is the macro cell, m = 1..M the small cells.
// ScmDecision vectors are indexed by SBS position k = m - 1.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ranplan/geometry.hpp"
#include "ranplan/traffic.hpp"

namespace ranplan {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

struct SliceSpec {
  std::vector<double> sinr_min_db;  // per slice
  std::vector<double> rb_per_bit;   // eta, RBs per bit
  std::vector<double> ee_weight;    // lambda
  double sinr_scale = 1.0;          // rho

  std::size_t num_slices() const { return sinr_min_db.size(); }
  double sinr_min_linear(std::size_t n) const { return db_to_linear(sinr_min_db.at(n)); }
  /// rho * gamma_n^min in linear units.
  double sinr_target(std::size_t n) const { return sinr_scale * sinr_min_linear(n); }

  void validate() const;
};

/// Coverage configuration of one SBS.
struct SbsConfig {
  int l_full = 1;
  int l_reduced = 1;
  std::vector<std::uint8_t> zoom;  // per slice, 1 = full-size

  friend bool operator==(const SbsConfig&, const SbsConfig&) = default;
};

struct ScmDecision {
  std::vector<int> l_full;
  std::vector<int> l_reduced;
  std::vector<std::vector<std::uint8_t>> zoom;  // [sbs][slice]

  /// l_f = l_r = 1 with every slice zoomed in: the smallest legal coverage.
  static ScmDecision minimal(std::size_t num_sbs, std::size_t num_slices);

  std::size_t num_sbs() const { return l_full.size(); }
  std::size_t num_slices() const { return zoom.empty() ? 0 : zoom.front().size(); }

  SbsConfig sbs_config(std::size_t k) const;
  ScmDecision with_sbs(std::size_t k, const SbsConfig& cfg) const;

  /// Same coverage with the zoom bits of SBSs where l_f == l_r normalised to 1.
  ScmDecision canonical() const;

  /// Throws invalid_decision on overlapping full-size SCs, l_r > l_f, or a
  /// radius outside [1, L_max].
  void validate(const NetworkLayout& layout, std::size_t num_slices) const;

  friend bool operator==(const ScmDecision&, const ScmDecision&) = default;
};

/// SC radius of SBS k for slice n.
int sc_radius(const ScmDecision& scm, std::size_t k, std::size_t n);

class CoverageMap {
 public:
  std::size_t num_bs() const { return sc_sets_.size(); }
  std::size_t num_grids() const { return territory_.size(); }
  std::size_t num_slices() const { return num_slices_; }

  /// Grids served by BS m for slice n.
  std::span<const std::size_t> sc_set(std::size_t m, std::size_t n) const {
    return sc_sets_.at(m).at(n);
  }
  /// Ring-shaped area of BS m (m >= 1); empty when l_f == l_r.
  std::span<const std::size_t> ring_set(std::size_t m) const { return ring_sets_.at(m); }
  /// Serving BS of grid i for slice n.
  std::size_t assoc(std::size_t i, std::size_t n) const {
    return assoc_[i * num_slices_ + n];
  }
  bool in_ring(std::size_t m, std::size_t i) const {
    return m != 0 && ring_owner_[i] == m;
  }
  /// SBS whose full-size disk claims grid i, 0 if none.
  std::size_t territory(std::size_t i) const { return territory_[i]; }

  friend CoverageMap build_coverage(const NetworkLayout&, const ScmDecision&,
                                    const SliceSpec&);

 private:
  std::size_t num_slices_ = 0;
  std::vector<std::vector<std::vector<std::size_t>>> sc_sets_;
  std::vector<std::vector<std::size_t>> ring_sets_;
  std::vector<std::size_t> assoc_;
  std::vector<std::size_t> territory_;
  std::vector<std::size_t> ring_owner_;
};

/// Throws invalid_decision when the decision overlaps or is out of range.
/// Grids on the shared boundary of two touching full-size disks belong to the
/// lower-index SBS.
CoverageMap build_coverage(const NetworkLayout& layout, const ScmDecision& scm,
                           const SliceSpec& slices);

struct RbBudgetCheck {
  bool sbs = true;   // every SBS within C
  bool mbs = true;   // macro within C
  bool ring = true;  // every ring within C
  std::vector<double> sbs_rbs;
  std::vector<double> ring_rbs;
  double mbs_rbs = 0.0;

  bool all() const { return sbs && mbs && ring; }
};

RbBudgetCheck check_rb_budgets(const CoverageMap& coverage, const DtdInstance& dtd,
                               const SliceSpec& slices, double rb_budget);

/// 0 when the transmission to (i2, n2) cannot interfere with the one to (i, n).
int interference_indicator(const CoverageMap& coverage, const ScmDecision& scm,
                           std::size_t i, std::size_t n, std::size_t i2,
                           std::size_t n2);

struct CandidateOptions {
  /// Drop zoom variants when l_f == l_r (they describe the same coverage).
  bool dedupe = false;
  /// Cell zooming: the same SC radius for every slice.
  bool uniform_zoom = false;
};

/// Every (l_f, l_r, zoom) of one SBS, ordered by l_f, then l_r, then zoom
/// bits read as a binary number with slice 0 most significant.
std::vector<SbsConfig> sbs_config_space(int max_layers, std::size_t num_slices,
                                        CandidateOptions options = {});

/// All configurations of SBS k (1 <= l_r <= l_f <= L_max, every zoom vector)
/// whose full-size SC stays clear of the other SBSs' current l_f.
std::vector<SbsConfig> enumerate_candidates(const NetworkLayout& layout,
                                            const ScmDecision& scm, std::size_t k,
                                            CandidateOptions options = {});

}  // namespace ranplan
