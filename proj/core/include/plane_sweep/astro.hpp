#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace plane_sweep {

using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kSecondsPerDay = 86400.0;

struct Constants {
  double mu = 398600.4418;  // km^3/s^2
  double re = 6378.137;     // km
  double j2 = 1.08262668e-3;
};

inline constexpr Constants kEarth{};

/// Mean classical elements. Angles in rad, epoch in s since mission start.
struct MeanElements {
  double a = 0.0;
  double e = 0.0;
  double i = 0.0;
  double raan = 0.0;
  double argp = 0.0;
  double mean_anomaly = 0.0;
  double epoch = 0.0;

  [[nodiscard]] double arg_latitude() const { return argp + mean_anomaly; }
  friend bool operator==(const MeanElements&, const MeanElements&) = default;
};

struct CartesianState {
  Vec3 position = Vec3::Zero();  // km
  Vec3 velocity = Vec3::Zero();  // km/s
  double epoch = 0.0;
};

/// Secular drift rates under J2 (rad/s).
struct SecularRates {
  double raan = 0.0;
  double argp = 0.0;
  double mean_anomaly = 0.0;  // includes Keplerian n

  [[nodiscard]] double arg_latitude() const { return argp + mean_anomaly; }
};

/// Wraps to (-pi, pi].
[[nodiscard]] double wrap_pi(double angle);
/// Wraps to [0, 2pi).
[[nodiscard]] double wrap_two_pi(double angle);
/// Shortest signed arc from `to` to `from`, in (-pi, pi].
[[nodiscard]] double angle_diff(double from, double to);

[[nodiscard]] double mean_motion(double a, const Constants& c = kEarth);
[[nodiscard]] double orbital_period(double a, const Constants& c = kEarth);
[[nodiscard]] double circular_speed(double a, const Constants& c = kEarth);

[[nodiscard]] SecularRates secular_rates(const MeanElements& el, const Constants& c = kEarth);

/// Linear secular propagation; a, e, i untouched, angles re-normalized.
[[nodiscard]] MeanElements propagate_mean(const MeanElements& el, double dt,
                                          const Constants& c = kEarth);
/// Same as propagate_mean with precomputed rates (hot loops).
[[nodiscard]] MeanElements propagate_with(const MeanElements& el, const SecularRates& rates,
                                          double dt);

/// Solves E - e sin E = M. Throws KeplerNonConvergence.
[[nodiscard]] double solve_kepler(double mean_anomaly, double e);
[[nodiscard]] double true_from_mean(double mean_anomaly, double e);
[[nodiscard]] double mean_from_true(double true_anomaly, double e);

[[nodiscard]] CartesianState mean_to_cartesian(const MeanElements& el, const Constants& c = kEarth);
[[nodiscard]] MeanElements cartesian_to_mean(const CartesianState& state,
                                             const Constants& c = kEarth);

/// Throws InvalidElements when outside the documented domain.
void validate(const MeanElements& el, const Constants& c = kEarth);

}  // namespace plane_sweep
