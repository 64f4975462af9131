#pragma once

// Scenario configuration: one JSON document with layout, slices, radio,
// traffic, learning and run sections. Every numeric field is range-checked
// when the file is loaded; unknown keys are rejected.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ranplan/channel.hpp"
#include "ranplan/geometry.hpp"
#include "ranplan/learning.hpp"
#include "ranplan/slicing.hpp"
#include "ranplan/traffic.hpp"

namespace ranplan {

enum class Scheme { sz_grid, cz_grid, cz_cell };
enum class Solver { loscs, ulscs, exhaustive, fixed };

std::string_view to_string(Scheme s);
std::string_view to_string(Solver s);
Scheme scheme_from_string(std::string_view name);
Solver solver_from_string(std::string_view name);

struct SbsPlacement {
  /// Either a grid coordinate or a position in km (snapped to the nearest grid).
  std::optional<HexCoord> coord;
  std::optional<Point2> pos_km;
  double antenna_height_m = 15.0;
  double max_power_w = 1.0;
};

struct LayoutConfig {
  double grid_diameter_km = 0.1;
  /// Extent of the grid disk around the macro, in layers or in km.
  std::optional<int> extent_layers;
  std::optional<double> extent_km;
  double mbs_height_m = 50.0;
  double mbs_max_power_w = 20.0;
  double carrier_freq_mhz = 1500.0;
  /// Largest SC radius of an SBS, in layers or in km.
  std::optional<int> max_sc_layers;
  std::optional<double> max_sc_radius_km;
  double mbs_sc_radius_km = 1.0;
  std::vector<SbsPlacement> sbs;
};

struct RadioSection {
  RadioConfig radio;
  /// When set, C = bandwidth / RB bandwidth * slots per window.
  std::optional<double> bandwidth_hz;
  double slots_per_window = 1.0;
};

enum class TrafficMode { grid, field };

struct TrafficSection {
  TrafficParams params;
  /// `grid` draws UTs per grid; `field` draws a continuous UT field at the
  /// reference diameter and bins it into the layout's grids.
  TrafficMode mode = TrafficMode::grid;
  double reference_diameter_km = 0.1;
};

struct LearningSection {
  std::optional<std::filesystem::path> model_path;
  std::vector<std::size_t> hidden = {512};
  std::size_t latent = 64;
  Activation activation = Activation::elu;
  std::size_t train_instances = 200;
  TrainParams train;
  std::uint64_t seed = 7;
};

struct RunSection {
  std::size_t windows = 1;
  std::uint64_t seed = 1;
  Scheme scheme = Scheme::sz_grid;
  Solver solver = Solver::loscs;
  std::size_t k = 5;
  std::size_t capacity = 500;
  /// Windows solved with loscs before the measured ones, to fill the store.
  std::size_t warmup_windows = 0;
  std::optional<std::filesystem::path> store_path;
  std::size_t exhaustive_cap = 100'000;
  /// SC radius used by the `fixed` solver (every SBS, every slice).
  std::optional<int> fixed_sc_layers;
  std::optional<double> fixed_sc_radius_km;
  bool record_wall_time = true;
};

struct ScenarioConfig {
  LayoutConfig layout;
  SliceSpec slices;
  RadioSection radio;
  TrafficSection traffic;
  LearningSection learning;
  RunSection run;

  /// Throws config_error naming the offending field.
  void validate() const;

  /// Builds the layout described by the layout section.
  NetworkLayout build_layout() const;
  /// The radio config with C resolved.
  RadioConfig resolved_radio() const;
};

ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string dump_config(const ScenarioConfig& config);

}  // namespace ranplan
