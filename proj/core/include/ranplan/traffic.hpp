#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "ranplan/geometry.hpp"

namespace ranplan {

/// Data-traffic distribution of one planning window: bits offered in grid i
/// for slice n during interval t.
class DtdInstance {
 public:
  DtdInstance() = default;
  DtdInstance(std::size_t num_grids, std::size_t num_slices,
              std::size_t num_intervals, double interval_duration_s);

  std::size_t num_grids() const { return grids_; }
  std::size_t num_slices() const { return slices_; }
  std::size_t num_intervals() const { return intervals_; }
  double interval_duration_s() const { return tau_; }
  std::size_t size() const { return loads_.size(); }

  double load(std::size_t i, std::size_t n, std::size_t t) const {
    return loads_[offset(i, n, t)];
  }
  void set_load(std::size_t i, std::size_t n, std::size_t t, double bits);
  void add_load(std::size_t i, std::size_t n, std::size_t t, double bits);

  /// Flat view in (grid, slice, interval) row-major order.
  std::span<const double> flat() const { return loads_; }

  /// Bits for slice n summed over grids and intervals.
  double slice_total(std::size_t n) const;

  friend bool operator==(const DtdInstance&, const DtdInstance&) = default;

 private:
  std::size_t offset(std::size_t i, std::size_t n, std::size_t t) const {
    return (i * slices_ + n) * intervals_ + t;
  }

  std::size_t grids_ = 0;
  std::size_t slices_ = 0;
  std::size_t intervals_ = 0;
  double tau_ = 1.0;
  std::vector<double> loads_;
};

struct TrafficParams {
  double ppp_rate_per_grid = 1.0;
  double load_low_bits = 0.1e6;
  double load_high_bits = 1.5e6;
  std::size_t num_intervals = 3;
  double interval_duration_s = 1.0;
  double load_quantum_bits = 1e4;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Per-grid Poisson UT counts (one draw per window and slice), a uniform
/// mean load per UT, and Poisson per-interval loads in quanta.
DtdInstance generate_dtd(const NetworkLayout& layout, std::size_t num_slices,
                         const TrafficParams& params);

/// A UT realization in continuous space, independent of the grid size.
struct UtField {
  struct Ut {
    Point2 pos_km;
    std::size_t slice = 0;
    std::vector<double> interval_loads_bits;
  };
  std::vector<Ut> uts;
  std::size_t num_slices = 0;
  std::size_t num_intervals = 0;
  double interval_duration_s = 1.0;
};

/// Homogeneous PPP over a disk of `radius_km`. The density matches
/// `params.ppp_rate_per_grid` UTs per hexagon of `reference_diameter_km`.
UtField generate_ut_field(double radius_km, double reference_diameter_km,
                          std::size_t num_slices, const TrafficParams& params);

/// Aggregates a UT field into the grids of a layout. UTs falling outside the
/// layout are dropped.
DtdInstance bin_ut_field(const UtField& field, const NetworkLayout& layout);

/// Text format:
///   line 1: `DTD <I> <N> <T> <tau>`
///   then one line per (i, n, t) in row-major order: `<i> <n> <t> <bits>`
/// Reals are written in shortest round-trip form.
void write_dtd(std::ostream& os, const DtdInstance& dtd);
DtdInstance read_dtd(std::istream& is);

void save_dtd(const DtdInstance& dtd, const std::filesystem::path& path);
DtdInstance load_dtd(const std::filesystem::path& path);
/// Loads and checks the grid and slice counts against expectations.
DtdInstance load_dtd(const std::filesystem::path& path, std::size_t num_grids,
                     std::size_t num_slices);

}  // namespace ranplan
