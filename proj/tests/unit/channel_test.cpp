#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ranplan/channel.hpp"
#include "ranplan/error.hpp"

using namespace ranplan;
using ranplan::testing::make_layout;
using ranplan::testing::make_slices;

TEST(Channel, PathLossExamples) {
  BsSite mbs{{0, 0}, 50.0, 1500.0, 20.0};
  BsSite sbs{{0, 0}, 15.0, 1500.0, 1.0};
  EXPECT_NEAR(path_loss_db(mbs, 1.0), 130.454, 1e-3);
  EXPECT_NEAR(path_loss_db(sbs, 0.2), 111.680, 1e-3);
  const double slope = (44.9 - 6.55 * std::log10(15.0)) * std::log10(2.0);
  EXPECT_NEAR(path_loss_db(sbs, 0.4) - path_loss_db(sbs, 0.2), slope, 1e-9);
  EXPECT_THROW(path_loss_db(sbs, 0.0), Error);
}

TEST(Channel, LinearGainExamples) {
  EXPECT_NEAR(linear_gain(130.454), 9.006e-14, 1e-16);
  EXPECT_DOUBLE_EQ(linear_gain(0.0), 1.0);
  BsSite sbs{{0, 0}, 15.0, 1500.0, 1.0};
  double prev = linear_gain(sbs, 0.05);
  for (double d = 0.1; d < 2.0; d += 0.05) {
    const double g = linear_gain(sbs, d);
    EXPECT_LT(g, prev);
    prev = g;
  }
}

TEST(Channel, NoisePerRb) {
  RadioConfig r;
  // -174 dBm/Hz over 360 kHz.
  EXPECT_NEAR(r.noise_per_rb_w(), 1e-3 * std::pow(10.0, -17.4) * 360e3, 1e-27);
}

TEST(Channel, GainTableMatchesDirectEvaluation) {
  auto layout = make_layout(2, {{1, 0}});
  GainTable g(layout);
  ASSERT_EQ(g.num_bs(), 2u);
  for (std::size_t m = 0; m < 2; ++m)
    for (std::size_t i = 0; i < layout.num_grids(); ++i)
      EXPECT_DOUBLE_EQ(g.gain(m, i), linear_gain(layout.bs(m), euclid_distance_km(layout, m, i)));
}

TEST(Channel, ThetaExamples) {
  auto slices = make_slices(1, 1.0);
  RadioConfig r;
  r.rb_budget = 300.0;  // 100 RBs per interval over T = 3
  DtdInstance dtd(2, 1, 3, 1.0);
  EXPECT_EQ(theta(dtd, slices, r, 0, 0, 1, 0, 0), 0.0);
  dtd.set_load(1, 0, 0, 100.0);
  EXPECT_DOUBLE_EQ(theta(dtd, slices, r, 0, 0, 1, 0, 0), 1.0);
  dtd.set_load(1, 0, 1, 25.0);
  EXPECT_DOUBLE_EQ(theta(dtd, slices, r, 0, 0, 1, 0, 1), 0.25);
  r.theta_mode = ThetaMode::constant;
  r.theta_constant = 1.0;
  EXPECT_EQ(theta(dtd, slices, r, 0, 0, 1, 0, 2), 1.0);
}

TEST(Channel, DeltaExamples) {
  EXPECT_EQ(delta(0, 0.7, 1e-10), 0.0);
  EXPECT_EQ(delta(1, 1.0, 3e-11), 3e-11);
  EXPECT_DOUBLE_EQ(delta(1, 0.5, 2e-13), 1e-13);
}
