#pragma once

// Small scenario builders shared by the unit and acceptance tests.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "ranplan/channel.hpp"
#include "ranplan/geometry.hpp"
#include "ranplan/power.hpp"
#include "ranplan/slicing.hpp"
#include "ranplan/traffic.hpp"

namespace ranplan::testing {

inline NetworkLayout make_layout(int extent_layers, std::vector<HexCoord> sbs_coords,
                                 int max_sc_layers = 2, double diameter_km = 0.1,
                                 double sbs_power_w = 1.0, double mbs_power_w = 20.0) {
  BsSite mbs{{0, 0}, 50.0, 1500.0, mbs_power_w};
  std::vector<BsSite> sbs;
  for (auto c : sbs_coords) sbs.push_back(BsSite{c, 15.0, 1500.0, sbs_power_w});
  return NetworkLayout(diameter_km, hex_disk({0, 0}, extent_layers), mbs, std::move(sbs),
                       max_sc_layers, 1.5);
}

inline SliceSpec make_slices(std::size_t n, double eta = 1e-5) {
  const double gammas[] = {7.0, 11.0, 9.0};
  SliceSpec s;
  for (std::size_t k = 0; k < n; ++k) {
    s.sinr_min_db.push_back(gammas[k % 3]);
    s.rb_per_bit.push_back(eta);
    s.ee_weight.push_back(1.0);
  }
  return s;
}

inline RadioConfig make_radio(double rb_budget = 1e5) {
  RadioConfig r;
  r.rb_budget = rb_budget;
  return r;
}

inline TrafficParams make_traffic(std::uint64_t seed, std::size_t intervals = 3,
                                  double rate = 0.5) {
  TrafficParams p;
  p.ppp_rate_per_grid = rate;
  p.num_intervals = intervals;
  p.seed = seed;
  return p;
}

/// Owns everything a PlanningInputs refers to.
struct Scenario {
  NetworkLayout layout;
  DtdInstance dtd;
  SliceSpec slices;
  RadioConfig radio;
  GainTable gains;

  Scenario(NetworkLayout l, DtdInstance d, SliceSpec s, RadioConfig r)
      : layout(std::move(l)), dtd(std::move(d)), slices(std::move(s)), radio(r),
        gains(layout) {}
  Scenario(const Scenario&) = delete;
  Scenario& operator=(const Scenario&) = delete;

  PlanningInputs inputs() const { return {layout, dtd, slices, radio, gains}; }
};

inline std::unique_ptr<Scenario> make_scenario(NetworkLayout layout, std::size_t num_slices,
                                               std::uint64_t seed, std::size_t intervals = 3,
                                               double rate = 0.5, double rb_budget = 1e5) {
  auto dtd = generate_dtd(layout, num_slices, make_traffic(seed, intervals, rate));
  return std::make_unique<Scenario>(std::move(layout), std::move(dtd), make_slices(num_slices),
                                    make_radio(rb_budget));
}

/// The "tiny" instances used against the exhaustive oracle: a 3-layer disk
/// (37 grids), L_max = 2, N = 2, one or two SBSs.
inline std::unique_ptr<Scenario> tiny_scenario(std::size_t num_sbs, std::uint64_t seed) {
  std::vector<HexCoord> sbs = {{2, 0}};
  if (num_sbs >= 2) sbs.push_back({-2, 1});
  return make_scenario(make_layout(3, sbs, 2), 2, seed, 3, 1.0);
}

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace ranplan::testing
