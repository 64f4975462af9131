#include <cmath>
#include <random>
#include <set>
#include <utility>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ranplan/error.hpp"
#include "ranplan/geometry.hpp"

using namespace ranplan;
using ranplan::testing::make_layout;

namespace {

// Breadth-first layer count over the six axial neighbours.
int bfs_distance(HexCoord a, HexCoord b) {
  const HexCoord dirs[] = {{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}};
  std::set<std::pair<int, int>> seen{{a.q, a.r}};
  std::vector<HexCoord> frontier{a};
  for (int d = 0;; ++d) {
    std::vector<HexCoord> next;
    for (auto c : frontier) {
      if (c == b) return d;
      for (auto dir : dirs) {
        HexCoord n = c + dir;
        if (seen.insert({n.q, n.r}).second) next.push_back(n);
      }
    }
    frontier = std::move(next);
  }
}

}  // namespace

TEST(Geometry, HexDistanceExamples) {
  EXPECT_EQ(hex_distance({0, 0}, {0, 0}), 0);
  EXPECT_EQ(hex_distance({0, 0}, {2, -1}), 2);
  EXPECT_EQ(hex_distance({2, -1}, {0, 0}), 2);
}

TEST(Geometry, HexDistanceMatchesBreadthFirstSearch) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> u(-5, 5);
  for (int k = 0; k < 200; ++k) {
    HexCoord a{u(rng), u(rng)}, b{u(rng), u(rng)};
    ASSERT_EQ(hex_distance(a, b), bfs_distance(a, b));
  }
}

TEST(Geometry, TriangleInequality) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> u(-6, 6);
  for (int k = 0; k < 500; ++k) {
    HexCoord a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    EXPECT_LE(hex_distance(a, c), hex_distance(a, b) + hex_distance(b, c));
  }
}

TEST(Geometry, CubeConstraint) {
  for (auto c : hex_disk({1, -2}, 3)) EXPECT_EQ(c.x() + c.y() + c.z(), 0);
}

TEST(Geometry, RingAndDiskCounts) {
  EXPECT_EQ(hex_ring({0, 0}, 0).size(), 1u);
  for (int k = 1; k <= 5; ++k) {
    auto ring = hex_ring({2, 1}, k);
    EXPECT_EQ(ring.size(), static_cast<std::size_t>(6 * k));
    for (auto c : ring) EXPECT_EQ(hex_distance(c, {2, 1}), k);
    EXPECT_EQ(hex_disk({2, 1}, k).size(), static_cast<std::size_t>(3 * k * (k + 1) + 1));
  }
  EXPECT_EQ(hex_disk({0, 0}, 2).size(), 19u);
}

TEST(Geometry, DiskIsDistinctAndCenterFirst) {
  auto disk = hex_disk({0, 0}, 3);
  EXPECT_EQ(disk.front(), (HexCoord{0, 0}));
  std::set<std::pair<int, int>> uniq;
  for (auto c : disk) uniq.insert({c.q, c.r});
  EXPECT_EQ(uniq.size(), disk.size());
}

TEST(Geometry, HexRoundInvertsCenter) {
  for (auto c : hex_disk({0, 0}, 4)) {
    Point2 p = hex_center(c);
    EXPECT_EQ(hex_round({p.x + 0.1, p.y - 0.1}), c);
  }
}

TEST(Geometry, EuclidDistanceExamples) {
  auto layout = make_layout(2, {{1, 0}}, 1);
  EXPECT_DOUBLE_EQ(euclid_distance_km(layout, 0, 0), 0.05);  // co-located, clamped
  EXPECT_DOUBLE_EQ(euclid_distance_km(layout, 1, *layout.grid_index({1, 0})), 0.05);
  const double spacing = 0.1 * std::sqrt(3.0) / 2.0;
  auto idx = *layout.grid_index({1, 0});
  EXPECT_NEAR(euclid_distance_km(layout, 0, idx), spacing, 1e-12);
  EXPECT_NEAR(spacing, 0.0866, 1e-4);
  auto far = *layout.grid_index({2, 0});
  EXPECT_NEAR(euclid_distance_km(layout, 0, far), 2.0 * spacing, 1e-12);
}

TEST(Geometry, EuclidDistanceIsSymmetricInSites) {
  auto layout = make_layout(3, {{2, -1}}, 1);
  auto g_sbs = *layout.grid_index({2, -1});
  auto g_mbs = *layout.grid_index({0, 0});
  EXPECT_NEAR(euclid_distance_km(layout, 0, g_sbs), euclid_distance_km(layout, 1, g_mbs), 1e-15);
}

TEST(Geometry, NonOverlapExamples) {
  auto one = make_layout(3, {{1, 0}});
  std::vector<int> l1 = {2};
  EXPECT_TRUE(validate_non_overlap(one, l1));

  auto four = make_layout(4, {{2, 0}, {-2, 0}});
  std::vector<int> l2 = {2, 2};
  EXPECT_TRUE(validate_non_overlap(four, l2));

  auto three = make_layout(4, {{2, 0}, {-1, 0}});
  EXPECT_FALSE(validate_non_overlap(three, l2));
}

TEST(Geometry, LayoutRejectsBadSites) {
  BsSite mbs{{0, 0}, 50.0, 1500.0, 20.0};
  auto grids = hex_disk({0, 0}, 1);
  EXPECT_THROW(NetworkLayout(0.1, grids, mbs, {BsSite{{5, 0}}}, 1, 1.0), Error);
  EXPECT_THROW(NetworkLayout(0.1, grids, mbs, {BsSite{{0, 0}}}, 1, 1.0), Error);
  EXPECT_THROW(NetworkLayout(0.1, grids, mbs, {}, 0, 1.0), Error);
  BsSite bad_freq{{0, 0}, 50.0, 5000.0, 20.0};
  EXPECT_THROW(NetworkLayout(0.1, grids, bad_freq, {}, 1, 1.0), Error);
}

TEST(Geometry, LayerDistanceUsesSiteCoordinate) {
  auto layout = make_layout(3, {{2, 0}});
  auto g = *layout.grid_index({0, 0});
  EXPECT_EQ(layout.layer_distance(1, g), 2);
  EXPECT_EQ(layout.layer_distance(0, g), 0);
}
