#include "plane_sweep/astro.hpp"

#include <cmath>
#include <string>

#include "plane_sweep/errors.hpp"

namespace plane_sweep {

double wrap_pi(double angle) {
  double r = std::remainder(angle, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

double wrap_two_pi(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

double angle_diff(double from, double to) { return wrap_pi(from - to); }

double mean_motion(double a, const Constants& c) { return std::sqrt(c.mu / (a * a * a)); }

double orbital_period(double a, const Constants& c) { return kTwoPi * std::sqrt(a * a * a / c.mu); }

double circular_speed(double a, const Constants& c) { return std::sqrt(c.mu / a); }

SecularRates secular_rates(const MeanElements& el, const Constants& c) {
  const double n = mean_motion(el.a, c);
  const double one_minus_e2 = 1.0 - el.e * el.e;
  const double p = el.a * one_minus_e2;
  const double k = 1.5 * c.j2 * (c.re / p) * (c.re / p) * n;
  const double ci = std::cos(el.i);
  const double si2 = 1.0 - ci * ci;
  return SecularRates{
      .raan = -k * ci,
      .argp = k * (2.0 - 2.5 * si2),
      .mean_anomaly = n + k * (1.0 - 1.5 * si2) * std::sqrt(one_minus_e2),
  };
}

MeanElements propagate_with(const MeanElements& el, const SecularRates& rates, double dt) {
  if (dt == 0.0) return el;
  MeanElements out = el;
  out.raan = wrap_pi(el.raan + rates.raan * dt);
  out.argp = wrap_pi(el.argp + rates.argp * dt);
  out.mean_anomaly = wrap_pi(el.mean_anomaly + rates.mean_anomaly * dt);
  out.epoch = el.epoch + dt;
  return out;
}

MeanElements propagate_mean(const MeanElements& el, double dt, const Constants& c) {
  return propagate_with(el, secular_rates(el, c), dt);
}

double solve_kepler(double mean_anomaly, double e) {
  if (!(e >= 0.0 && e < 1.0)) throw InvalidElements("eccentricity outside [0, 1)");
  if (e == 0.0) return mean_anomaly;
  // Solve on the principal branch, then shift back.
  const double m = wrap_pi(mean_anomaly);
  const double branch = mean_anomaly - m;
  auto residual = [&](double ecc_anom) { return ecc_anom - e * std::sin(ecc_anom) - m; };

  double ecc_anom = e > 0.8 ? (m >= 0.0 ? kPi : -kPi) : m;
  for (int iter = 0; iter < 50; ++iter) {
    const double f = residual(ecc_anom);
    if (std::abs(f) < 1e-14) return ecc_anom + branch;
    const double step = f / (1.0 - e * std::cos(ecc_anom));
    ecc_anom -= step;
    if (std::abs(step) < 1e-15) break;
  }
  if (std::abs(residual(ecc_anom)) < 1e-12) return ecc_anom + branch;

  // Bisection fallback: the residual is monotone on [-pi, pi].
  double lo = -kPi;
  double hi = kPi;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0.0) hi = mid; else lo = mid;
    if (hi - lo < 1e-15) break;
  }
  ecc_anom = 0.5 * (lo + hi);
  if (std::abs(residual(ecc_anom)) >= 1e-12)
    throw KeplerNonConvergence("Kepler solve failed for M=" + std::to_string(mean_anomaly) +
                               " e=" + std::to_string(e));
  return ecc_anom + branch;
}

double true_from_mean(double mean_anomaly, double e) {
  const double ecc_anom = solve_kepler(mean_anomaly, e);
  return 2.0 * std::atan2(std::sqrt(1.0 + e) * std::sin(0.5 * ecc_anom),
                          std::sqrt(1.0 - e) * std::cos(0.5 * ecc_anom));
}

double mean_from_true(double true_anomaly, double e) {
  const double ecc_anom = 2.0 * std::atan2(std::sqrt(1.0 - e) * std::sin(0.5 * true_anomaly),
                                           std::sqrt(1.0 + e) * std::cos(0.5 * true_anomaly));
  return ecc_anom - e * std::sin(ecc_anom);
}

CartesianState mean_to_cartesian(const MeanElements& el, const Constants& c) {
  const double f = true_from_mean(el.mean_anomaly, el.e);
  const double p = el.a * (1.0 - el.e * el.e);
  const double r = p / (1.0 + el.e * std::cos(f));
  const double u = el.argp + f;

  const double cu = std::cos(u), su = std::sin(u);
  const double co = std::cos(el.raan), so = std::sin(el.raan);
  const double ci = std::cos(el.i), si = std::sin(el.i);

  const Vec3 radial(co * cu - so * su * ci, so * cu + co * su * ci, su * si);
  const Vec3 transverse(-co * su - so * cu * ci, -so * su + co * cu * ci, cu * si);

  const double h_over_p = std::sqrt(c.mu / p);
  CartesianState out;
  out.position = r * radial;
  out.velocity = h_over_p * el.e * std::sin(f) * radial + h_over_p * (1.0 + el.e * std::cos(f)) * transverse;
  out.epoch = el.epoch;
  return out;
}

MeanElements cartesian_to_mean(const CartesianState& state, const Constants& c) {
  const Vec3& r = state.position;
  const Vec3& v = state.velocity;
  const double rn = r.norm();
  const double v2 = v.squaredNorm();
  const Vec3 h = r.cross(v);
  const double hn = h.norm();
  const Vec3 h_hat = h / hn;

  MeanElements el;
  el.epoch = state.epoch;
  el.a = 1.0 / (2.0 / rn - v2 / c.mu);
  const Vec3 e_vec = ((v2 - c.mu / rn) * r - r.dot(v) * v) / c.mu;
  el.e = e_vec.norm();
  el.i = std::atan2(std::hypot(h_hat.x(), h_hat.y()), h_hat.z());

  Vec3 node_hat(1.0, 0.0, 0.0);
  if (std::hypot(h_hat.x(), h_hat.y()) > 1e-12) {
    el.raan = std::atan2(h_hat.x(), -h_hat.y());
    node_hat = Vec3(std::cos(el.raan), std::sin(el.raan), 0.0);
  }
  const Vec3 in_plane = h_hat.cross(node_hat);
  const double u = std::atan2(r.dot(in_plane), r.dot(node_hat));

  if (el.e > 1e-13) {
    el.argp = std::atan2(e_vec.dot(in_plane), e_vec.dot(node_hat));
    el.mean_anomaly = mean_from_true(u - el.argp, el.e);
  } else {
    el.e = 0.0;
    el.argp = 0.0;
    el.mean_anomaly = u;
  }
  el.raan = wrap_pi(el.raan);
  el.argp = wrap_pi(el.argp);
  el.mean_anomaly = wrap_pi(el.mean_anomaly);
  return el;
}

void validate(const MeanElements& el, const Constants& c) {
  if (!(el.a > c.re)) throw InvalidElements("semi-major axis below Earth radius");
  if (!(el.e >= 0.0 && el.e < 1.0)) throw InvalidElements("eccentricity outside [0, 1)");
  if (!(el.i > 0.0 && el.i < kPi)) throw InvalidElements("inclination outside (0, pi)");
  if (!std::isfinite(el.raan) || !std::isfinite(el.argp) || !std::isfinite(el.mean_anomaly) ||
      !std::isfinite(el.epoch))
    throw InvalidElements("non-finite angle or epoch");
}

}  // namespace plane_sweep
