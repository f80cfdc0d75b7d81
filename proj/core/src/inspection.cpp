#include "plane_sweep/inspection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "plane_sweep/errors.hpp"
#include "plane_sweep/relative_motion.hpp"

namespace plane_sweep {

namespace {

MeanElements plane_reference(const OrbitalPlane& plane) {
  return MeanElements{plane.a0, 0.0, plane.i0, plane.raan0, 0.0, 0.0, 0.0};
}

void check_coefficient(double k, const char* name) {
  if (!(std::abs(k) <= 1.0)) throw InvalidCoefficient(std::string(name) + " outside [-1, 1]");
}

/// Along-track offset of the spacecraft from a satellite, in the satellite's frame.
double along_track(const MeanElements& sc, const MeanElements& sat, const Constants& c) {
  const CartesianState s = mean_to_cartesian(sc, c);
  const CartesianState t = mean_to_cartesian(sat, c);
  const Vec3 r_hat = t.position.normalized();
  const Vec3 n_hat = t.position.cross(t.velocity).normalized();
  return (s.position - t.position).dot(n_hat.cross(r_hat));
}

/// Quantities derived from a trial spacecraft semi-major axis.
struct TrialOrbit {
  double e = 0.0;
  SecularRates rates;
  double raan_drift = 0.0;
  double apsidal_drift = 0.0;
};

}  // namespace

SecularRates plane_rates(const OrbitalPlane& plane, const Constants& c) {
  return secular_rates(plane_reference(plane), c);
}

double nodal_period(const OrbitalPlane& plane, const Constants& c) {
  return kTwoPi / plane_rates(plane, c).arg_latitude();
}

double plane_raan(const OrbitalPlane& plane, double t, const Constants& c) {
  return wrap_pi(plane.raan0 + plane_rates(plane, c).raan * t);
}

MeanElements satellite_elements(const OrbitalPlane& plane, int k, double t, const Constants& c) {
  const SecularRates rates = plane_rates(plane, c);
  const double u0 = plane.phase0 + kTwoPi * k / plane.n_sats;
  return MeanElements{plane.a0,
                      0.0,
                      plane.i0,
                      wrap_pi(plane.raan0 + rates.raan * t),
                      0.0,
                      wrap_pi(u0 + rates.arg_latitude() * t),
                      t};
}

double wait_time(double u0, double n0) {
  double to_node = wrap_two_pi(kTwoPi - u0);
  if (to_node > kTwoPi - 1e-10) to_node = 0.0;
  return to_node / n0;
}

double stay_duration(int n_sats, double period) {
  return static_cast<double>(n_sats - 1) * (n_sats + 1) / n_sats * period;
}

double max_inclination_offset(const OrbitalPlane& plane, double d_a, double d_e, double dv_flyby,
                              const Constants& c) {
  const MeanElements sat = plane_reference(plane);
  MeanElements sc = sat;
  sc.a = plane.a0 + d_a;
  sc.e = d_e;
  const double tangential = flyby_relative_speed_exact(sc, sat, c);
  if (tangential > dv_flyby)
    throw InfeasiblePlane(InfeasibleBound::FlybySpeed,
                          "flyby speed " + std::to_string(tangential * 1e3) +
                              " m/s exceeds limit " + std::to_string(dv_flyby * 1e3) + " m/s");
  return std::sqrt(dv_flyby * dv_flyby - tangential * tangential) / circular_speed(plane.a0, c);
}

double raan_offset_slack(const OrbitalPlane& plane, double d_raan_drift_total, double dr_flyby,
                         double delta_r0) {
  const double cross_budget = std::sqrt(dr_flyby * dr_flyby - delta_r0 * delta_r0);
  const double span = std::abs(plane.a0 * d_raan_drift_total * std::sin(plane.i0));
  if (span > 2.0 * cross_budget)
    throw InfeasiblePlane(InfeasibleBound::CrossTrack,
                          "cross-track drift span " + std::to_string(span) + " km exceeds " +
                              std::to_string(2.0 * cross_budget) + " km");
  const double bound = cross_budget / (plane.a0 * std::sin(plane.i0));
  return std::max(0.0, bound - 0.5 * std::abs(d_raan_drift_total));
}

InspectionShape design_inspection(const OrbitalPlane& plane, double k_i, double k_omega,
                                  const InspectionLimits& limits, const Constants& c) {
  check_coefficient(k_i, "k_i");
  check_coefficient(k_omega, "k_omega");
  const int n = plane.n_sats;
  if (n < 2) throw InfeasiblePlane(InfeasibleBound::TooFewSatellites, "plane needs >= 2 satellites");
  if (!(limits.delta_r0 >= 0.0 && limits.delta_r0 < limits.dr_flyby))
    throw InfeasiblePlane(InfeasibleBound::Geometry, "delta_r0 must be in [0, dr_flyby)");

  // Shapes are relative to the plane, so the reference satellite sits at RAAN 0.
  MeanElements sat0 = plane_reference(plane);
  sat0.raan = 0.0;
  const SecularRates sat_rates = secular_rates(sat0, c);
  const double span = stay_duration(n, kTwoPi / sat_rates.arg_latitude());

  // Nominal lag offset and the perigee-over-node geometry.
  const double d_a = 2.0 * plane.a0 / (3.0 * n);
  const double r_perigee = plane.a0 + limits.delta_r0;
  const double r_apogee = plane.a0 - limits.delta_r0 + 2.0 * d_a;
  const double d_e = (r_apogee - r_perigee) / (r_apogee + r_perigee);

  // Inclination freedom from the flyby speed limit, including the radial speed left by
  // the perigee drifting off the node.
  MeanElements nominal = sat0;
  nominal.a = plane.a0 + d_a;
  nominal.e = d_e;
  const double tangential = flyby_relative_speed_exact(nominal, sat0, c);
  const double half_apsidal = 0.5 * std::abs(secular_rates(nominal, c).argp) * span;
  const double p_nominal = nominal.a * (1.0 - d_e * d_e);
  const double radial_speed = std::sqrt(c.mu / p_nominal) * d_e * std::sin(half_apsidal);
  const double v_perigee = std::sqrt(c.mu * (2.0 / r_perigee - 1.0 / nominal.a));
  const double dv_design = limits.dv_flyby - limits.speed_margin;
  const double normal_budget =
      dv_design * dv_design - tangential * tangential - radial_speed * radial_speed;
  if (normal_budget < 0.0)
    throw InfeasiblePlane(InfeasibleBound::FlybySpeed,
                          "flyby speed " + std::to_string(tangential * 1e3) +
                              " m/s exceeds limit " + std::to_string(limits.dv_flyby * 1e3) +
                              " m/s");
  const double d_i_max = std::sqrt(normal_budget) / v_perigee;
  const double d_i = k_i * d_i_max;
  const double incl = plane.i0 + d_i;
  const double sin_cross = std::max(std::sin(plane.i0), std::sin(incl));

  auto trial = [&](double a) {
    TrialOrbit t;
    t.e = 1.0 - r_perigee / a;
    t.rates = secular_rates(MeanElements{a, t.e, incl, 0, 0, 0, 0}, c);
    t.raan_drift = (t.rates.raan - sat_rates.raan) * span;
    t.apsidal_drift = t.rates.argp * span;
    return t;
  };

  // Cross-track budget: the radial offset grows as the perigee drifts off the node.
  auto cross_bound = [&](const TrialOrbit& t, double a) {
    const double p = a * (1.0 - t.e * t.e);
    const double excursion = p / (1.0 + t.e * std::cos(0.5 * t.apsidal_drift)) - r_perigee;
    const double radial = limits.delta_r0 + excursion;
    const double range = limits.dr_flyby - limits.range_margin;
    if (radial >= range) return -1.0;
    return std::sqrt(range * range - radial * radial) / (r_perigee * sin_cross);
  };

  auto raan_offset = [&](const TrialOrbit& t, double a) {
    const double slack = std::max(0.0, cross_bound(t, a) - 0.5 * std::abs(t.raan_drift));
    return -0.5 * t.raan_drift + k_omega * slack;
  };

  auto spacecraft = [&](double a, double mean_anomaly0) {
    const TrialOrbit t = trial(a);
    return std::pair{MeanElements{a, t.e, incl, raan_offset(t, a), -0.5 * t.apsidal_drift,
                                  mean_anomaly0, 0.0},
                     t.rates};
  };

  const MeanElements first_target = sat0;
  MeanElements last_target = sat0;
  last_target.mean_anomaly = wrap_pi(-kTwoPi * (n - 1) / n);
  const MeanElements last_at_end = propagate_with(last_target, sat_rates, span);

  auto residual = [&](double a, double mean_anomaly0) {
    const auto [sc, rates] = spacecraft(a, mean_anomaly0);
    return std::array<double, 2>{along_track(sc, first_target, c),
                                 along_track(propagate_with(sc, rates, span), last_at_end, c)};
  };

  // Initial guess: one satellite spacing of lag per spacecraft revolution.
  const double target_rate = sat_rates.arg_latitude() * n / (n + 1.0);
  double a = plane.a0 * std::pow((n + 1.0) / n, 2.0 / 3.0);
  for (int iter = 0; iter < 4; ++iter) {
    if (a <= r_perigee) break;
    a *= std::pow(trial(a).rates.arg_latitude() / target_rate, 2.0 / 3.0);
  }
  if (!(a > r_perigee))
    throw InfeasiblePlane(InfeasibleBound::Geometry, "no elliptic inspection orbit for plane");
  double mean_anomaly0 = 0.0;
  {
    const auto [sc, rates] = spacecraft(a, 0.0);
    const double true_anom = -sc.argp - sc.raan * std::cos(incl);
    mean_anomaly0 = mean_from_true(true_anom, sc.e);
  }

  bool converged = false;
  for (int iter = 0; iter < 30; ++iter) {
    const auto f = residual(a, mean_anomaly0);
    if (std::abs(f[0]) < 1e-8 && std::abs(f[1]) < 1e-8) {
      converged = true;
      break;
    }
    constexpr double kStepA = 1e-3;
    constexpr double kStepM = 1e-7;
    const auto fa = residual(a + kStepA, mean_anomaly0);
    const auto fm = residual(a, mean_anomaly0 + kStepM);
    const double j00 = (fa[0] - f[0]) / kStepA, j01 = (fm[0] - f[0]) / kStepM;
    const double j10 = (fa[1] - f[1]) / kStepA, j11 = (fm[1] - f[1]) / kStepM;
    const double det = j00 * j11 - j01 * j10;
    if (det == 0.0 || !std::isfinite(det)) break;
    double step_a = (j11 * f[0] - j01 * f[1]) / det;
    double step_m = (-j10 * f[0] + j00 * f[1]) / det;
    step_a = std::clamp(step_a, -50.0, 50.0);
    a -= step_a;
    mean_anomaly0 -= step_m;
    if (!(a > r_perigee))
      throw InfeasiblePlane(InfeasibleBound::Geometry, "inspection orbit solve diverged");
  }
  if (!converged)
    throw InfeasiblePlane(InfeasibleBound::Geometry, "inspection orbit solve did not converge");

  const TrialOrbit final_orbit = trial(a);
  const double bound = cross_bound(final_orbit, a);
  if (bound < 0.0 || 0.5 * std::abs(final_orbit.raan_drift) > bound)
    throw InfeasiblePlane(InfeasibleBound::CrossTrack,
                          "RAAN drift " + std::to_string(final_orbit.raan_drift) +
                              " rad breaks the cross-track limit of " +
                              std::to_string(limits.dr_flyby) + " km");

  const auto [sc, rates] = spacecraft(a, mean_anomaly0);
  InspectionShape shape;
  shape.k_i = k_i;
  shape.k_omega = k_omega;
  shape.a = a;
  shape.e = sc.e;
  shape.mean_anomaly0 = wrap_pi(mean_anomaly0);
  shape.d_i_max = d_i_max;
  shape.raan_slack = bound - 0.5 * std::abs(final_orbit.raan_drift);
  shape.raan_drift = final_orbit.raan_drift;
  shape.leg_span = span;
  shape.predicted_speed = std::sqrt(tangential * tangential + radial_speed * radial_speed +
                                    v_perigee * v_perigee * d_i * d_i);
  shape.offsets = InspectionOffsets{
      .d_a = d_a,
      .d_e = sc.e,
      .d_i = d_i,
      .d_raan0 = sc.raan,
      .d_argp0 = sc.argp,
      .d_u0 = wrap_pi(sc.argp + mean_anomaly0),
      .d_a_correction = a - (plane.a0 + d_a),
  };
  return shape;
}

InspectionOrbit place_inspection(const InspectionShape& shape, const OrbitalPlane& plane,
                                 int start_sat, double t_ready, const InspectionLimits& limits,
                                 const Constants& c) {
  const SecularRates rates = plane_rates(plane, c);
  const MeanElements sat_ready = satellite_elements(plane, start_sat, t_ready, c);
  const double wait = wait_time(sat_ready.mean_anomaly, rates.arg_latitude());
  const MeanElements sat = propagate_with(sat_ready, rates, wait);

  InspectionOrbit orbit;
  orbit.plane = plane;
  orbit.start_sat = start_sat;
  orbit.t_start = t_ready + wait;
  orbit.dt_stay = shape.leg_span;
  orbit.k_i = shape.k_i;
  orbit.k_omega = shape.k_omega;
  orbit.offsets = shape.offsets;
  orbit.delta_r0 = limits.delta_r0;
  orbit.d_i_max = shape.d_i_max;
  orbit.raan_slack = shape.raan_slack;
  orbit.elements = MeanElements{shape.a,
                                shape.e,
                                plane.i0 + shape.offsets.d_i,
                                wrap_pi(sat.raan + shape.offsets.d_raan0),
                                shape.offsets.d_argp0,
                                wrap_pi(shape.mean_anomaly0 + sat.arg_latitude()),
                                orbit.t_start};
  return orbit;
}

InspectionOrbit compute_inspection_orbit(const OrbitalPlane& plane, int start_sat, double t0,
                                         double k_i, double k_omega,
                                         const InspectionLimits& limits, const Constants& c) {
  return place_inspection(design_inspection(plane, k_i, k_omega, limits, c), plane, start_sat, t0,
                          limits, c);
}

CoefficientRange feasible_k_i_range(const OrbitalPlane& plane, const InspectionLimits& limits,
                                    const Constants& c, double tol) {
  (void)design_inspection(plane, 0.0, 0.0, limits, c);
  auto feasible = [&](double k) {
    try {
      (void)design_inspection(plane, k, 0.0, limits, c);
      return true;
    } catch (const InfeasiblePlane&) {
      return false;
    }
  };
  auto edge = [&](double sign) {
    if (feasible(sign)) return sign;
    double good = 0.0, bad = sign;
    while (std::abs(bad - good) > tol) {
      const double mid = 0.5 * (good + bad);
      (feasible(mid) ? good : bad) = mid;
    }
    return good;
  };
  return {edge(-1.0), edge(1.0)};
}

}  // namespace plane_sweep
