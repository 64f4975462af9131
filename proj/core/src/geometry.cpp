#include "ranplan/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

#include "ranplan/error.hpp"

namespace ranplan {

namespace {

constexpr std::array<HexCoord, 6> kDirections = {{
    {1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1},
}};

constexpr double kSqrt3 = 1.73205080756887729353;

}  // namespace

int hex_distance(HexCoord a, HexCoord b) {
  const int dq = a.q - b.q;
  const int dr = a.r - b.r;
  return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
}

std::vector<HexCoord> hex_ring(HexCoord center, int layer) {
  if (layer < 0) {
    throw Error(ErrorCode::invalid_argument, "negative ring layer");
  }
  if (layer == 0) return {center};
  std::vector<HexCoord> ring;
  ring.reserve(static_cast<std::size_t>(6 * layer));
  HexCoord cur = center;
  for (int k = 0; k < layer; ++k) cur = cur + kDirections[4];
  for (const HexCoord dir : kDirections) {
    for (int k = 0; k < layer; ++k) {
      ring.push_back(cur);
      cur = cur + dir;
    }
  }
  return ring;
}

std::vector<HexCoord> hex_disk(HexCoord center, int layers) {
  if (layers < 0) {
    throw Error(ErrorCode::invalid_argument, "negative disk radius");
  }
  std::vector<HexCoord> out;
  out.reserve(static_cast<std::size_t>(3 * layers * (layers + 1) + 1));
  for (int k = 0; k <= layers; ++k) {
    auto ring = hex_ring(center, k);
    out.insert(out.end(), ring.begin(), ring.end());
  }
  return out;
}

Point2 hex_center(HexCoord c) {
  // Flat-top hexagon with corner radius 1/2.
  return {0.75 * c.q, kSqrt3 * (0.25 * c.q + 0.5 * c.r)};
}

HexCoord hex_round(Point2 p) {
  const double fq = 4.0 * p.x / 3.0;
  const double fr = 2.0 * (-p.x / 3.0 + p.y / kSqrt3);
  const double fs = -fq - fr;
  double rq = std::round(fq);
  double rr = std::round(fr);
  const double rs = std::round(fs);
  const double dq = std::abs(rq - fq);
  const double dr = std::abs(rr - fr);
  const double ds = std::abs(rs - fs);
  if (dq > dr && dq > ds) {
    rq = -rr - rs;
  } else if (dr > ds) {
    rr = -rq - rs;
  }
  return {static_cast<int>(rq), static_cast<int>(rr)};
}

NetworkLayout::NetworkLayout(double grid_diameter_km,
                             std::vector<HexCoord> grid_coords, BsSite mbs,
                             std::vector<BsSite> sbs, int max_sc_layers,
                             double mbs_sc_radius_km)
    : grid_diameter_km_(grid_diameter_km),
      grid_coords_(std::move(grid_coords)),
      mbs_(mbs),
      sbs_(std::move(sbs)),
      max_sc_layers_(max_sc_layers),
      mbs_sc_radius_km_(mbs_sc_radius_km) {
  if (!(grid_diameter_km_ > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "grid diameter must be positive");
  }
  if (grid_coords_.empty()) {
    throw Error(ErrorCode::invalid_argument, "layout has no grids");
  }
  if (max_sc_layers_ < 1) {
    throw Error(ErrorCode::invalid_argument, "max SC layers must be >= 1");
  }
  if (!(mbs_sc_radius_km_ > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "MBS SC radius must be positive");
  }
  index_.reserve(grid_coords_.size());
  for (std::size_t i = 0; i < grid_coords_.size(); ++i) {
    if (!index_.emplace(grid_coords_[i], i).second) {
      throw Error(ErrorCode::invalid_argument, "duplicate grid coordinate");
    }
  }
  if (mbs_.coord != HexCoord{0, 0} || !index_.contains(mbs_.coord)) {
    throw Error(ErrorCode::invalid_argument, "MBS must sit on the origin grid");
  }
  auto check_site = [](const BsSite& s) {
    if (!(s.antenna_height_m > 0.0)) {
      throw Error(ErrorCode::invalid_argument, "antenna height must be positive");
    }
    if (!(s.carrier_freq_mhz >= 150.0 && s.carrier_freq_mhz <= 2000.0)) {
      throw Error(ErrorCode::invalid_argument,
                  "carrier frequency outside [150, 2000] MHz");
    }
    if (!(s.max_power_w > 0.0)) {
      throw Error(ErrorCode::invalid_argument, "max power must be positive");
    }
  };
  check_site(mbs_);
  std::vector<HexCoord> used{mbs_.coord};
  for (const auto& s : sbs_) {
    check_site(s);
    if (!index_.contains(s.coord)) {
      throw Error(ErrorCode::invalid_argument, "SBS outside the grid set");
    }
    if (std::find(used.begin(), used.end(), s.coord) != used.end()) {
      throw Error(ErrorCode::invalid_argument, "two base stations share a grid");
    }
    used.push_back(s.coord);
  }
  // l_f = 1 everywhere must stay legal under the non-overlap rule.
  for (std::size_t a = 0; a < sbs_.size(); ++a) {
    for (std::size_t b = a + 1; b < sbs_.size(); ++b) {
      if (hex_distance(sbs_[a].coord, sbs_[b].coord) < 2) {
        throw Error(ErrorCode::invalid_argument, "SBSs must be at least 2 layers apart");
      }
    }
  }
}

HexCoord NetworkLayout::grid(std::size_t i) const {
  if (i >= grid_coords_.size()) {
    throw Error(ErrorCode::index_out_of_range,
                "grid index " + std::to_string(i) + " out of range");
  }
  return grid_coords_[i];
}

const BsSite& NetworkLayout::bs(std::size_t m) const {
  if (m == 0) return mbs_;
  if (m > sbs_.size()) {
    throw Error(ErrorCode::index_out_of_range,
                "BS index " + std::to_string(m) + " out of range");
  }
  return sbs_[m - 1];
}

std::optional<std::size_t> NetworkLayout::grid_index(HexCoord c) const {
  const auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int NetworkLayout::layer_distance(std::size_t m, std::size_t i) const {
  return hex_distance(bs(m).coord, grid(i));
}

double euclid_distance_km(const NetworkLayout& layout, std::size_t bs,
                          std::size_t grid) {
  const Point2 a = hex_center(layout.bs(bs).coord);
  const Point2 b = hex_center(layout.grid(grid));
  const double d = std::hypot(a.x - b.x, a.y - b.y) * layout.grid_diameter_km();
  return std::max(d, 0.5 * layout.grid_diameter_km());
}

bool validate_non_overlap(const NetworkLayout& layout, std::span<const int> l_full) {
  const auto sbs = layout.sbs();
  if (l_full.size() != sbs.size()) {
    throw Error(ErrorCode::dimension_mismatch, "one full-size radius per SBS expected");
  }
  for (std::size_t m = 0; m < sbs.size(); ++m) {
    for (std::size_t k = m + 1; k < sbs.size(); ++k) {
      if (hex_distance(sbs[m].coord, sbs[k].coord) < l_full[m] + l_full[k]) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace ranplan
