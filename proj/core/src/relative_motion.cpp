#include "plane_sweep/relative_motion.hpp"

#include <cmath>

#include "plane_sweep/errors.hpp"

namespace plane_sweep {

double DiffElements::d_e() const { return std::hypot(d_ex, d_ey); }

double DiffElements::u_e() const { return std::atan2(d_ey, d_ex); }

double RtnState::range() const { return std::sqrt(r_t * r_t + r_n * r_n + r_r * r_r); }

double RtnState::speed() const { return std::sqrt(v_t * v_t + v_n * v_n + v_r * v_r); }

DiffElements diff_elements(const MeanElements& sc, const MeanElements& sat) {
  if (std::abs(sc.epoch - sat.epoch) > 1e-6) throw EpochMismatch("diff_elements: epochs differ");
  DiffElements d;
  d.d_a = sc.a - sat.a;
  d.d_ex = sc.e * std::cos(sc.argp) - sat.e * std::cos(sat.argp);
  d.d_ey = sc.e * std::sin(sc.argp) - sat.e * std::sin(sat.argp);
  d.d_u = angle_diff(sc.arg_latitude(), sat.arg_latitude());
  d.d_i = sc.i - sat.i;
  d.d_raan = angle_diff(sc.raan, sat.raan);
  return d;
}

RtnState rtn_linear(const DiffElements& d, double a0, double n0, double dt, double u, double i0) {
  const double drift_rate = -1.5 * d.d_a / a0 * n0;
  const double de = d.d_e();
  const double phase = u - d.u_e();
  const double si = std::sin(i0), ci = std::cos(i0);
  const double su = std::sin(u), cu = std::cos(u);
  RtnState s;
  s.r_t = a0 * (d.d_u + drift_rate * dt + d.d_raan * ci) + 2.0 * a0 * de * std::sin(phase);
  s.r_n = a0 * (d.d_i * su - d.d_raan * si * cu);
  s.r_r = d.d_a - a0 * de * std::cos(phase);
  s.v_t = a0 * drift_rate + 2.0 * a0 * de * n0 * std::cos(phase);
  s.v_n = a0 * n0 * (d.d_i * cu + d.d_raan * si * su);
  s.v_r = a0 * de * n0 * std::sin(phase);
  return s;
}

RtnState relative_rtn(const CartesianState& sc, const CartesianState& sat) {
  const Vec3 r_hat = sat.position.normalized();
  const Vec3 n_hat = sat.position.cross(sat.velocity).normalized();
  const Vec3 t_hat = n_hat.cross(r_hat);
  const Vec3 dr = sc.position - sat.position;
  const Vec3 dv = sc.velocity - sat.velocity;
  return RtnState{dr.dot(t_hat), dr.dot(n_hat), dr.dot(r_hat),
                  dv.dot(t_hat), dv.dot(n_hat), dv.dot(r_hat)};
}

double flyby_relative_speed_exact(const MeanElements& sc, const MeanElements& sat,
                                  const Constants& c) {
  const double r_perigee = sc.a * (1.0 - sc.e);
  const double v_perigee = std::sqrt(c.mu * (2.0 / r_perigee - 1.0 / sc.a));
  const double v_sat = circular_speed(sat.a, c);
  const double tangential = v_perigee - v_sat;
  const double normal = v_sat * (sc.i - sat.i);
  return std::hypot(tangential, normal);
}

DriftResult delta_raan_drift(double d_a, double d_i, const MeanElements& plane_el,
                             double duration, const Constants& c) {
  const double rate = secular_rates(plane_el, c).raan;
  const double ci = std::cos(plane_el.i);
  const bool singular = std::abs(ci) < 1e-12;
  const double i_term = singular ? 0.0 : -std::tan(plane_el.i) * d_i;
  return {duration * (-3.5 * d_a / plane_el.a + i_term) * rate, singular};
}

DriftResult delta_argp_drift(double d_a, double d_i, const MeanElements& plane_el,
                             double duration, const Constants& c) {
  const double rate = secular_rates(plane_el, c).argp;
  const double si = std::sin(plane_el.i), ci = std::cos(plane_el.i);
  return {duration * (-3.5 * d_a / plane_el.a - 5.0 * si * ci * d_i) * rate, false};
}

}  // namespace plane_sweep
