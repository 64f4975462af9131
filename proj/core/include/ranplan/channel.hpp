#pragma once

#include <cstddef>
#include <vector>

#include "ranplan/geometry.hpp"
#include "ranplan/slicing.hpp"
#include "ranplan/traffic.hpp"

namespace ranplan {

enum class ThetaMode { occupancy, constant };

struct RadioConfig {
  double noise_density_dbm_hz = -174.0;
  /// 12 subcarriers x 30 kHz.
  double rb_bandwidth_hz = 360e3;
  /// RBs available to each BS over a planning window (C).
  double rb_budget = 1e6;
  ThetaMode theta_mode = ThetaMode::occupancy;
  double theta_constant = 1.0;

  /// Noise power on one RB, in watts.
  double noise_per_rb_w() const;
  void validate() const;
};

/// COST-231 Hata path loss in dB; `d_km` must be positive.
double path_loss_db(const BsSite& bs, double d_km);

/// Linear power gain 10^(-PL/10), capped at 1.
double linear_gain(double path_loss_db);
double linear_gain(const BsSite& bs, double d_km);

/// Average gain from every BS to every grid center.
class GainTable {
 public:
  explicit GainTable(const NetworkLayout& layout);

  double gain(std::size_t bs, std::size_t grid) const {
    return gains_[bs * grids_ + grid];
  }
  std::size_t num_bs() const { return bs_; }
  std::size_t num_grids() const { return grids_; }

 private:
  std::size_t bs_ = 0;
  std::size_t grids_ = 0;
  std::vector<double> gains_;
};

/// Likeliness that (i2, n2)'s transmission collides with (i, n)'s in interval
/// t. The occupancy model uses the interferer's share of the per-interval RB
/// budget; it does not depend on the victim.
double theta(const DtdInstance& dtd, const SliceSpec& slices, const RadioConfig& radio,
             std::size_t i, std::size_t n, std::size_t i2, std::size_t n2, std::size_t t);

inline double delta(int b, double theta_value, double gain) {
  return static_cast<double>(b) * theta_value * gain;
}

}  // namespace ranplan
