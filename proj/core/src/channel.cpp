#include "ranplan/channel.hpp"

#include <algorithm>
#include <cmath>

#include "ranplan/error.hpp"

namespace ranplan {

double RadioConfig::noise_per_rb_w() const {
  return std::pow(10.0, (noise_density_dbm_hz - 30.0) / 10.0) * rb_bandwidth_hz;
}

void RadioConfig::validate() const {
  if (!(rb_bandwidth_hz > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "RB bandwidth must be positive");
  }
  if (!(rb_budget > 0.0)) throw Error(ErrorCode::invalid_argument, "RB budget must be positive");
  if (!(theta_constant >= 0.0 && theta_constant <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "constant theta must lie in [0, 1]");
  }
  if (!std::isfinite(noise_density_dbm_hz)) {
    throw Error(ErrorCode::invalid_argument, "noise density must be finite");
  }
}

double path_loss_db(const BsSite& bs, double d_km) {
  if (!(d_km > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "path loss needs a positive distance");
  }
  const double log_h = std::log10(bs.antenna_height_m);
  return 46.55 + 33.81 * std::log10(bs.carrier_freq_mhz) - 13.82 * log_h +
         (44.9 - 6.55 * log_h) * std::log10(d_km);
}

double linear_gain(double loss_db) { return std::min(1.0, std::pow(10.0, -loss_db / 10.0)); }

double linear_gain(const BsSite& bs, double d_km) { return linear_gain(path_loss_db(bs, d_km)); }

GainTable::GainTable(const NetworkLayout& layout)
    : bs_(layout.num_bs()), grids_(layout.num_grids()), gains_(bs_ * grids_) {
  for (std::size_t m = 0; m < bs_; ++m) {
    for (std::size_t i = 0; i < grids_; ++i) {
      gains_[m * grids_ + i] = linear_gain(layout.bs(m), euclid_distance_km(layout, m, i));
    }
  }
}

double theta(const DtdInstance& dtd, const SliceSpec& slices, const RadioConfig& radio,
             std::size_t /*i*/, std::size_t /*n*/, std::size_t i2, std::size_t n2,
             std::size_t t) {
  if (radio.theta_mode == ThetaMode::constant) return radio.theta_constant;
  const double per_interval_budget =
      radio.rb_budget / static_cast<double>(dtd.num_intervals());
  return std::min(1.0, dtd.load(i2, n2, t) * slices.rb_per_bit.at(n2) / per_interval_budget);
}

}  // namespace ranplan
