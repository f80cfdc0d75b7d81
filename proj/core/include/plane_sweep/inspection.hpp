#pragma once

#include "plane_sweep/astro.hpp"

namespace plane_sweep {

/// One orbital plane of uniformly phased circular satellites.
struct OrbitalPlane {
  int constellation_id = 0;
  int plane_id = 0;  // 1-based within its constellation
  double a0 = 0.0;   // km
  double i0 = 0.0;   // rad
  double raan0 = 0.0;  // rad at t = 0
  int n_sats = 1;
  double phase0 = 0.0;  // argument of latitude of satellite 0 at t = 0

  friend bool operator==(const OrbitalPlane&, const OrbitalPlane&) = default;
};

/// Drift rates shared by all satellites of a plane.
[[nodiscard]] SecularRates plane_rates(const OrbitalPlane& plane, const Constants& c = kEarth);
/// Node-to-node period of the plane's satellites.
[[nodiscard]] double nodal_period(const OrbitalPlane& plane, const Constants& c = kEarth);
[[nodiscard]] double plane_raan(const OrbitalPlane& plane, double t, const Constants& c = kEarth);
/// Satellite `k` at time `t` (circular: argp = 0, mean anomaly = argument of latitude).
[[nodiscard]] MeanElements satellite_elements(const OrbitalPlane& plane, int k, double t,
                                              const Constants& c = kEarth);

struct InspectionLimits {
  double dr_flyby = 50.0;   // km
  double dv_flyby = 0.150;  // km/s
  double delta_r0 = 5.0;    // km, radial offset at each flyby
  // Design-only margins that keep the strict flyby bounds strict at |k| = 1.
  double range_margin = 0.25;     // km
  double speed_margin = 0.5e-3;   // km/s
};

struct InspectionOffsets {
  double d_a = 0.0;             // nominal lag offset, km
  double d_e = 0.0;
  double d_i = 0.0;             // rad
  double d_raan0 = 0.0;         // rad
  double d_argp0 = 0.0;         // rad
  double d_u0 = 0.0;            // rad
  double d_a_correction = 0.0;  // km, so that a = a0 + d_a + d_a_correction

  friend bool operator==(const InspectionOffsets&, const InspectionOffsets&) = default;
};

/// Start-independent part of an inspection orbit: the spacecraft orbit relative to a
/// satellite crossing the ascending node at t = 0.
struct InspectionShape {
  double k_i = 0.0;
  double k_omega = 0.0;
  InspectionOffsets offsets;
  double a = 0.0;
  double e = 0.0;
  double mean_anomaly0 = 0.0;  // at the first flyby
  double d_i_max = 0.0;        // design bound on |d_i|
  double raan_slack = 0.0;     // design slack around the centered RAAN offset
  double raan_drift = 0.0;     // differential RAAN drift across the leg
  double leg_span = 0.0;       // first to last flyby, s
  double predicted_speed = 0.0;  // worst-case flyby speed, km/s
};

struct InspectionOrbit {
  MeanElements elements;  // at t_start
  OrbitalPlane plane;
  int start_sat = 0;
  double t_start = 0.0;
  double dt_stay = 0.0;
  double k_i = 0.0;
  double k_omega = 0.0;
  InspectionOffsets offsets;
  double delta_r0 = 0.0;
  double d_i_max = 0.0;
  double raan_slack = 0.0;

  [[nodiscard]] double t_end() const { return t_start + dt_stay; }
  friend bool operator==(const InspectionOrbit&, const InspectionOrbit&) = default;
};

/// Time for a satellite at argument of latitude `u0` to reach the ascending node.
[[nodiscard]] double wait_time(double u0, double n0);
[[nodiscard]] double stay_duration(int n_sats, double period);

/// Largest inclination offset keeping the nominal flyby speed below `dv_flyby`.
/// Throws InfeasiblePlane when the along-track speed alone exceeds it.
[[nodiscard]] double max_inclination_offset(const OrbitalPlane& plane, double d_a, double d_e,
                                            double dv_flyby, const Constants& c = kEarth);
/// Remaining RAAN freedom once the drift is centered. Throws InfeasiblePlane.
[[nodiscard]] double raan_offset_slack(const OrbitalPlane& plane, double d_raan_drift_total,
                                       double dr_flyby, double delta_r0);

/// Synthesizes the maneuver-free inspection geometry for a plane.
/// Throws InfeasiblePlane or InvalidCoefficient.
[[nodiscard]] InspectionShape design_inspection(const OrbitalPlane& plane, double k_i,
                                                double k_omega, const InspectionLimits& limits,
                                                const Constants& c = kEarth);

/// Anchors a shape to `start_sat`, waiting from `t_ready` until it crosses the node.
[[nodiscard]] InspectionOrbit place_inspection(const InspectionShape& shape,
                                               const OrbitalPlane& plane, int start_sat,
                                               double t_ready, const InspectionLimits& limits,
                                               const Constants& c = kEarth);

[[nodiscard]] InspectionOrbit compute_inspection_orbit(const OrbitalPlane& plane, int start_sat,
                                                       double t0, double k_i, double k_omega,
                                                       const InspectionLimits& limits,
                                                       const Constants& c = kEarth);

struct CoefficientRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// Feasible k_i interval around 0, bisected to `tol`. Throws InfeasiblePlane when k_i = 0
/// is already infeasible.
[[nodiscard]] CoefficientRange feasible_k_i_range(const OrbitalPlane& plane,
                                                  const InspectionLimits& limits,
                                                  const Constants& c = kEarth, double tol = 1e-6);

}  // namespace plane_sweep
