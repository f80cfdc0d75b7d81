#include <gtest/gtest.h>

#include <cmath>

#include "plane_sweep/errors.hpp"
#include "plane_sweep/relative_motion.hpp"

namespace ps = plane_sweep;

namespace {

const ps::MeanElements kSat{6928.137, 0.0, 0.925, 0.4, 0.0, 0.3, 0.0};

TEST(RelativeMotion, DiffElementsWrapsAndChecksEpoch) {
  ps::MeanElements sc = kSat;
  sc.raan = kSat.raan + ps::kTwoPi - 0.01;
  sc.a += 3.0;
  const auto d = ps::diff_elements(sc, kSat);
  EXPECT_NEAR(d.d_raan, -0.01, 1e-12);
  EXPECT_DOUBLE_EQ(d.d_a, 3.0);
  sc.epoch = 1.0;
  EXPECT_THROW((void)ps::diff_elements(sc, kSat), ps::EpochMismatch);
}

TEST(RelativeMotion, GeometricFrameAxes) {
  const auto sat = ps::mean_to_cartesian(kSat);
  const auto same = ps::relative_rtn(sat, sat);
  EXPECT_EQ(same.range(), 0.0);
  ps::CartesianState up = sat;
  up.position += 2.0 * sat.position.normalized();
  const auto rel = ps::relative_rtn(up, sat);
  EXPECT_NEAR(rel.r_r, 2.0, 1e-9);
  EXPECT_NEAR(rel.r_t, 0.0, 1e-9);
  EXPECT_NEAR(rel.r_n, 0.0, 1e-9);
  EXPECT_NEAR(rel.range(), 2.0, 1e-9);
}

// Linear model vs exact geometry for offsets small enough that the second-order
// terms stay below a few metres.
TEST(RelativeMotion, LinearModelTracksGeometry) {
  ps::MeanElements sc = kSat;
  sc.a += 0.5;
  sc.e = 2e-4;
  sc.argp = 1.0;
  sc.mean_anomaly = kSat.mean_anomaly - 1.0 + 1e-4;
  sc.i += 2e-4;
  sc.raan += -1e-4;
  const auto d = ps::diff_elements(sc, kSat);
  const double n0 = std::sqrt(ps::kEarth.mu / std::pow(kSat.a, 3));
  for (double u = 0.0; u < ps::kTwoPi; u += 0.5) {
    ps::MeanElements sat_u = kSat;
    sat_u.mean_anomaly = u;
    ps::MeanElements sc_u = sc;
    sc_u.mean_anomaly = u + (sc.mean_anomaly - kSat.mean_anomaly);
    const auto dd = ps::diff_elements(sc_u, sat_u);
    const auto lin = ps::rtn_linear(dd, kSat.a, n0, 0.0, u, kSat.i);
    const auto geo = ps::relative_rtn(ps::mean_to_cartesian(sc_u), ps::mean_to_cartesian(sat_u));
    EXPECT_NEAR(lin.r_r, geo.r_r, 5e-3) << u;
    EXPECT_NEAR(lin.r_t, geo.r_t, 5e-3) << u;
    EXPECT_NEAR(lin.r_n, geo.r_n, 5e-3) << u;
    EXPECT_NEAR(lin.v_n, geo.v_n, 5e-6) << u;
  }
  EXPECT_GT(d.d_e(), 0.0);
}

TEST(RelativeMotion, LinearDriftIsAlongTrack) {
  ps::DiffElements d;
  d.d_a = 10.0;
  const double n0 = 1.1e-3;
  const auto s0 = ps::rtn_linear(d, 7000.0, n0, 0.0, 0.0, 0.9);
  const auto s1 = ps::rtn_linear(d, 7000.0, n0, 100.0, 0.0, 0.9);
  EXPECT_NEAR(s1.r_t - s0.r_t, -1.5 * 10.0 * n0 * 100.0, 1e-9);
  EXPECT_DOUBLE_EQ(s0.r_r, 10.0);
}

TEST(RelativeMotion, FlybySpeedAtPerigee) {
  ps::MeanElements sc = kSat;
  sc.a = 7136.0;
  sc.e = 0.0286;
  const double v = ps::flyby_relative_speed_exact(sc, kSat);
  const double rp = sc.a * (1 - sc.e);
  const double vp = std::sqrt(ps::kEarth.mu * (2 / rp - 1 / sc.a));
  EXPECT_NEAR(v, std::abs(vp - std::sqrt(ps::kEarth.mu / kSat.a)), 1e-12);
  sc.i += 0.01;
  EXPECT_GT(ps::flyby_relative_speed_exact(sc, kSat), v);
}

TEST(RelativeMotion, DriftSignsAndSingularity) {
  const auto raan = ps::delta_raan_drift(200.0, 0.0, kSat, 86400.0);
  // Prograde orbit regresses slower when raised.
  EXPECT_GT(raan.value, 0.0);
  EXPECT_FALSE(raan.singular);
  ps::MeanElements polar = kSat;
  polar.i = ps::kPi / 2;
  EXPECT_TRUE(ps::delta_raan_drift(0.0, 0.01, polar, 86400.0).singular);
  EXPECT_EQ(ps::delta_argp_drift(0.0, 0.0, kSat, 86400.0).value, 0.0);
}

}  // namespace
