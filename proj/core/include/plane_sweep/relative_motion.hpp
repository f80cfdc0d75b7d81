#pragma once

#include "plane_sweep/astro.hpp"

namespace plane_sweep {

/// Spacecraft-minus-satellite element differences (angles wrapped).
struct DiffElements {
  double d_a = 0.0;   // km
  double d_ex = 0.0;  // e cos(argp) difference
  double d_ey = 0.0;  // e sin(argp) difference
  double d_u = 0.0;   // argument of latitude, rad
  double d_i = 0.0;
  double d_raan = 0.0;

  [[nodiscard]] double d_e() const;
  /// Phase of the relative eccentricity vector.
  [[nodiscard]] double u_e() const;
};

/// Relative state in the satellite's RTN axes: T along-track, N orbit normal, R radial.
struct RtnState {
  double r_t = 0.0, r_n = 0.0, r_r = 0.0;  // km
  double v_t = 0.0, v_n = 0.0, v_r = 0.0;  // km/s

  [[nodiscard]] double range() const;
  [[nodiscard]] double speed() const;
};

/// Throws EpochMismatch if epochs differ by more than 1 microsecond.
[[nodiscard]] DiffElements diff_elements(const MeanElements& sc, const MeanElements& sat);

/// Linearized near-circular relative motion. `u` is the satellite's argument of latitude,
/// `dt` the time since the offsets were taken, `i0` the reference inclination.
[[nodiscard]] RtnState rtn_linear(const DiffElements& d, double a0, double n0, double dt,
                                  double u, double i0);

/// Geometric relative state of `sc` w.r.t. `sat`, expressed in the satellite's RTN axes.
[[nodiscard]] RtnState relative_rtn(const CartesianState& sc, const CartesianState& sat);

/// Relative speed at a perigee-over-node conjunction with a circular target.
[[nodiscard]] double flyby_relative_speed_exact(const MeanElements& sc, const MeanElements& sat,
                                                const Constants& c = kEarth);

struct DriftResult {
  double value = 0.0;      // rad
  bool singular = false;   // tan(i) term dropped at i = pi/2
};

/// Linearized differential RAAN drift accumulated over `duration`.
[[nodiscard]] DriftResult delta_raan_drift(double d_a, double d_i, const MeanElements& plane_el,
                                           double duration, const Constants& c = kEarth);
/// Linearized differential argument-of-perigee drift accumulated over `duration`.
[[nodiscard]] DriftResult delta_argp_drift(double d_a, double d_i, const MeanElements& plane_el,
                                           double duration, const Constants& c = kEarth);

}  // namespace plane_sweep
