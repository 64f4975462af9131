#pragma once

// Hexagonal-grid world model.
//
// Grids are flat-top hexagons addressed by axial coordinates (q, r). The grid
// "diameter" is the corner-to-corner width, so neighbouring centers are
// diameter * sqrt(3) / 2 apart. Coverage radii are counted in hex layers;
// propagation distances are in kilometres.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace ranplan {

struct HexCoord {
  int q = 0;
  int r = 0;

  // Cube form: x = q, z = r, y = -q - r.
  constexpr int x() const { return q; }
  constexpr int y() const { return -q - r; }
  constexpr int z() const { return r; }

  friend constexpr bool operator==(HexCoord, HexCoord) = default;
  friend constexpr HexCoord operator+(HexCoord a, HexCoord b) {
    return {a.q + b.q, a.r + b.r};
  }
};

struct HexCoordHash {
  std::size_t operator()(HexCoord c) const noexcept {
    return std::hash<std::int64_t>{}((static_cast<std::int64_t>(c.q) << 32) ^
                                     static_cast<std::uint32_t>(c.r));
  }
};

/// Number of hex layers between two grids.
int hex_distance(HexCoord a, HexCoord b);

/// Grids at exactly `layer` steps from `center`, walked in a fixed order.
std::vector<HexCoord> hex_ring(HexCoord center, int layer);

/// All grids within `layers` of `center`, ring by ring starting at the center.
/// This ordering defines the grid index of a layout built from it.
std::vector<HexCoord> hex_disk(HexCoord center, int layers);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Center of a hexagon in units of the grid diameter.
Point2 hex_center(HexCoord c);

/// Nearest hexagon to a point given in units of the grid diameter.
HexCoord hex_round(Point2 p);

/// Spacing between adjacent grid centers, as a multiple of the diameter.
inline constexpr double kCenterSpacingPerDiameter = 0.86602540378443864676;

struct BsSite {
  HexCoord coord;
  double antenna_height_m = 15.0;
  double carrier_freq_mhz = 1500.0;
  double max_power_w = 1.0;
};

/// Immutable geometry of one network: grids, the macro site at the origin
/// and M small-cell sites.
class NetworkLayout {
 public:
  NetworkLayout(double grid_diameter_km, std::vector<HexCoord> grid_coords,
                BsSite mbs, std::vector<BsSite> sbs, int max_sc_layers,
                double mbs_sc_radius_km);

  double grid_diameter_km() const { return grid_diameter_km_; }
  double center_spacing_km() const {
    return grid_diameter_km_ * kCenterSpacingPerDiameter;
  }
  std::size_t num_grids() const { return grid_coords_.size(); }
  std::size_t num_sbs() const { return sbs_.size(); }
  /// Base stations including the macro (index 0).
  std::size_t num_bs() const { return sbs_.size() + 1; }
  int max_sc_layers() const { return max_sc_layers_; }
  double mbs_sc_radius_km() const { return mbs_sc_radius_km_; }

  std::span<const HexCoord> grid_coords() const { return grid_coords_; }
  HexCoord grid(std::size_t i) const;
  const BsSite& mbs() const { return mbs_; }
  std::span<const BsSite> sbs() const { return sbs_; }

  /// BS by unified index: 0 is the macro, 1..M are small cells.
  const BsSite& bs(std::size_t m) const;

  /// Grid index of a coordinate, if it belongs to the layout.
  std::optional<std::size_t> grid_index(HexCoord c) const;

  /// Layer distance from BS m to grid i.
  int layer_distance(std::size_t m, std::size_t i) const;

 private:
  double grid_diameter_km_;
  std::vector<HexCoord> grid_coords_;
  BsSite mbs_;
  std::vector<BsSite> sbs_;
  int max_sc_layers_;
  double mbs_sc_radius_km_;
  std::unordered_map<HexCoord, std::size_t, HexCoordHash> index_;
};

/// Distance in km between BS `bs` and the center of grid `grid`, never below
/// half a grid diameter.
double euclid_distance_km(const NetworkLayout& layout, std::size_t bs,
                          std::size_t grid);

/// True iff every pair of SBSs is at least l_f[m] + l_f[m'] layers apart.
bool validate_non_overlap(const NetworkLayout& layout, std::span<const int> l_full);

}  // namespace ranplan
