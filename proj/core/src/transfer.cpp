#include "plane_sweep/transfer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "plane_sweep/errors.hpp"

namespace plane_sweep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ecc_x(const MeanElements& el) { return el.e * std::cos(el.argp); }
double ecc_y(const MeanElements& el) { return el.e * std::sin(el.argp); }

/// Distance from `phase` (mod 2pi) to [lo, hi].
double phase_gap(double phase, double lo, double hi) {
  if (hi - lo >= kTwoPi) return 0.0;
  double best = kInf;
  const double base = std::floor((lo - phase) / kTwoPi);
  for (double m = base - 1.0; m <= base + 2.0; m += 1.0) {
    const double p = phase + kTwoPi * m;
    best = std::min(best, p < lo ? lo - p : (p > hi ? p - hi : 0.0));
  }
  return best;
}

/// Nearest value to `target` of the form phase + 2 pi m.
double nearest_branch(double phase, double target) {
  return phase + kTwoPi * std::round((target - phase) / kTwoPi);
}

/// True argument of latitude.
double true_arg_latitude(const MeanElements& el) {
  return el.argp + true_from_mean(el.mean_anomaly, el.e);
}

/// First epoch >= el.epoch at which the orbit reaches argument of latitude `theta`.
double next_crossing(const MeanElements& el, const SecularRates& rates, double theta) {
  double t = el.epoch;
  const double rate = rates.arg_latitude();
  double dt = wrap_two_pi(theta - true_arg_latitude(el)) / rate;
  for (int iter = 0; iter < 3; ++iter) {
    const MeanElements at = propagate_with(el, rates, dt);
    dt += angle_diff(theta, true_arg_latitude(at)) / rate;
  }
  return t + std::max(dt, 0.0);
}

struct Residual {
  std::array<double, 6> r{};
  [[nodiscard]] Eigen::Matrix<double, 6, 1> vec() const {
    return Eigen::Map<const Eigen::Matrix<double, 6, 1>>(r.data());
  }
};

Residual arrival_residual(const MeanElements& got, const MeanElements& want) {
  return Residual{{(got.a - want.a) / want.a, ecc_x(got) - ecc_x(want), ecc_y(got) - ecc_y(want),
                   got.i - want.i, angle_diff(got.raan, want.raan) * std::sin(want.i),
                   angle_diff(got.arg_latitude(), want.arg_latitude())}};
}

bool converged(const Residual& res, double a) {
  return std::abs(res.r[0] * a) < 1e-4 && std::abs(res.r[1]) < 1e-7 && std::abs(res.r[2]) < 1e-7 &&
         std::abs(res.r[3]) < 1e-8 && std::abs(res.r[4]) < 1e-8 && std::abs(res.r[5]) < 1e-7;
}

/// Impulse pattern. Free variables are every main-burn component, a common time shift of
/// the main burns, and the tangential magnitude of an optional whole-revolution phasing
/// loop flown before them.
/// Main-burn epochs slide with the phase the loop adds beyond its planned value, so the
/// loop does not move them off their planned arguments of latitude.
struct Plan {
  std::vector<ImpulseManeuver> burns;
  double loop_start = 0.0;
  double loop_end = 0.0;
  double loop_dv = 0.0;
  double planned_loop_dv = 0.0;
  double slide_per_dv = 0.0;  // s of main-burn delay per km/s of extra loop dv
  bool has_loop = false;
  double unabsorbed = 0.0;  // km/s, rough cost of phase left to the main burns
  double shift = 0.0;       // common main-burn delay, in units of kShiftScale seconds

  // Makes timing cheap relative to dv in the minimum-norm step.
  static constexpr double kShiftScale = 1.0e4;

  [[nodiscard]] int unknowns() const {
    return static_cast<int>(burns.size()) * 3 + 1 + (has_loop ? 1 : 0);
  }

  [[nodiscard]] Eigen::VectorXd pack() const {
    Eigen::VectorXd z(unknowns());
    const auto m = static_cast<Eigen::Index>(3 * burns.size());
    for (std::size_t k = 0; k < burns.size(); ++k) z.segment<3>(3 * k) = burns[k].dv_rtn;
    z[m] = shift;
    if (has_loop) z[m + 1] = loop_dv;
    return z;
  }

  void unpack(const Eigen::VectorXd& z) {
    const auto m = static_cast<Eigen::Index>(3 * burns.size());
    for (std::size_t k = 0; k < burns.size(); ++k) burns[k].dv_rtn = z.segment<3>(3 * k);
    shift = z[m];
    if (has_loop) loop_dv = z[m + 1];
  }

  [[nodiscard]] ImpulseSchedule schedule() const {
    ImpulseSchedule out;
    if (has_loop && loop_dv != 0.0) {
      out.push_back({loop_start, Vec3(0.0, loop_dv, 0.0)});
      out.push_back({loop_end, Vec3(0.0, -loop_dv, 0.0)});
    }
    double slide = shift * kShiftScale;
    if (has_loop) slide += slide_per_dv * (loop_dv - planned_loop_dv);
    for (const auto& b : burns)
      if (b.dv_rtn.norm() > 0.0) out.push_back({b.epoch + slide, b.dv_rtn});
    return out;
  }
};

/// Element gaps between the natural departure orbit and the target at one epoch.
struct Gap {
  double d_a, d_ex, d_ey, d_i, d_raan_sin, v;
};

Gap gap_at(const MeanElements& dep, const MeanElements& target, double t, const Constants& c) {
  const MeanElements s = propagate_mean(dep, t - dep.epoch, c);
  const MeanElements g = propagate_mean(target, t - target.epoch, c);
  const double a_mean = 0.5 * (s.a + g.a);
  return Gap{g.a - s.a,
             ecc_x(g) - ecc_x(s),
             ecc_y(g) - ecc_y(s),
             g.i - s.i,
             angle_diff(g.raan, s.raan) * std::sin(0.5 * (s.i + g.i)),
             circular_speed(a_mean, c)};
}

/// Two-burn split at arguments of latitude theta and theta + pi (near-circular Gauss form).
std::pair<Vec3, Vec3> pair_components(const Gap& g, double a, double theta, bool with_plane) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double along = g.d_ex * ct + g.d_ey * st;
  const double across = g.d_ex * st - g.d_ey * ct;
  const double sum = g.v * g.d_a / (2.0 * a);
  const double diff = g.v * along / 2.0;
  const double radial = g.v * across / 2.0;
  double normal = 0.0;
  if (with_plane) normal = 0.5 * g.v * (g.d_i * ct + g.d_raan_sin * st);
  return {Vec3(radial, 0.5 * (sum + diff), normal), Vec3(-radial, 0.5 * (sum - diff), -normal)};
}

struct Attempt {
  ImpulseSchedule schedule;
  double dv = kInf;
};

std::optional<Attempt> solve_plan_unguarded(Plan plan, const MeanElements& dep,
                                            const MeanElements& target, double t_final,
                                            const Constants& c) {
  auto evaluate = [&](const Plan& p) {
    return arrival_residual(fly_schedule(dep, p.schedule(), t_final, c), target);
  };
  Eigen::VectorXd z = plan.pack();
  Residual res = evaluate(plan);
  for (int iter = 0; iter < 25 && !converged(res, target.a); ++iter) {
    const int n = plan.unknowns();
    Eigen::Matrix<double, 6, Eigen::Dynamic> jac(6, n);
    constexpr double kStep = 1e-6;  // km/s
    for (int k = 0; k < n; ++k) {
      Plan probe = plan;
      Eigen::VectorXd zk = z;
      zk[k] += kStep;
      probe.unpack(zk);
      jac.col(k) = (evaluate(probe).vec() - res.vec()) / kStep;
    }
    // Minimum-norm Gauss-Newton step.
    const Eigen::Matrix<double, 6, 6> normal = jac * jac.transpose();
    const Eigen::VectorXd step = jac.transpose() * normal.ldlt().solve(res.vec());
    if (!step.allFinite()) return std::nullopt;
    double scale = 1.0;
    Residual trial;
    for (int halving = 0; halving < 8; ++halving) {
      Plan next = plan;
      next.unpack(z - scale * step);
      trial = evaluate(next);
      if (trial.vec().norm() < res.vec().norm() || halving == 7) break;
      scale *= 0.5;
    }
    z -= scale * step;
    plan.unpack(z);
    res = trial;
  }
  if (!converged(res, target.a)) return std::nullopt;
  Attempt out;
  out.schedule = plan.schedule();
  for (std::size_t k = 1; k < out.schedule.size(); ++k)
    if (out.schedule[k].epoch <= out.schedule[k - 1].epoch) return std::nullopt;
  if (!out.schedule.empty() &&
      (out.schedule.front().epoch <= dep.epoch || out.schedule.back().epoch > t_final))
    return std::nullopt;
  out.dv = schedule_dv(out.schedule);
  return out;
}

/// Newton can wander into hyperbolic or sub-surface trials; those plans are discarded.
std::optional<Attempt> solve_plan(const Plan& plan, const MeanElements& dep,
                                  const MeanElements& target, double t_final, const Constants& c) {
  try {
    return solve_plan_unguarded(plan, dep, target, t_final, c);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

TransferEstimate estimate_transfer_dv(const MeanElements& dep, const MeanElements& arr, double dt,
                                      const Constants& c) {
  const SecularRates dep_rates = secular_rates(dep, c);
  const MeanElements d = propagate_with(dep, dep_rates, dt);
  const double a_mean = 0.5 * (d.a + arr.a);
  const double v_mean = circular_speed(a_mean, c);
  const double i_mean = 0.5 * (d.i + arr.i);

  TransferEstimate est;
  est.dt = dt;
  est.raan_residual = angle_diff(arr.raan, d.raan);
  est.dv_plane = v_mean * std::hypot(arr.i - d.i, est.raan_residual * std::sin(i_mean));
  const double de = std::hypot(ecc_x(arr) - ecc_x(d), ecc_y(arr) - ecc_y(d));
  const double da = (arr.a - d.a) / a_mean;
  est.dv_inplane = 0.25 * v_mean * (std::abs(da + de) + std::abs(da - de));

  if (dt > 0.0) {
    const double rel_rate = secular_rates(arr, c).arg_latitude() - dep_rates.arg_latitude();
    const double phase = angle_diff(arr.arg_latitude(), d.arg_latitude());
    const double drift = rel_rate * dt;
    const double gap = phase_gap(phase, std::min(0.0, drift), std::max(0.0, drift));
    est.dv_phase = 2.0 * v_mean * gap / (3.0 * mean_motion(a_mean, c) * dt);
  }
  est.dv_total = std::hypot(est.dv_inplane, est.dv_plane) + est.dv_phase;
  return est;
}

double transfer_time_from_raan_gaps(double gap_at_min, double gap_at_max, double dt_min,
                                    double dt_max) {
  if (gap_at_min == 0.0) return dt_min;
  if (gap_at_max == 0.0) return dt_max;
  if ((gap_at_min > 0.0) == (gap_at_max > 0.0))
    return std::abs(gap_at_max) < std::abs(gap_at_min) ? dt_max : dt_min;
  const double rate = (gap_at_max - gap_at_min) / (dt_max - dt_min);
  return std::clamp(dt_min - gap_at_min / rate, dt_min, dt_max);
}

double select_transfer_time(const MeanElements& dep_at_end, const OrbitalPlane& next_plane,
                            const InspectionShape& next_shape, double dt_min, double dt_max,
                            const Constants& c) {
  const double dep_rate = secular_rates(dep_at_end, c).raan;
  // The next orbit is anchored to its plane at dt_min and then drifts at its own rate.
  const MeanElements next_orbit{next_shape.a, next_shape.e, next_plane.i0 + next_shape.offsets.d_i,
                                0.0, 0.0, 0.0, 0.0};
  const double next_rate = secular_rates(next_orbit, c).raan;
  const double t_min = dep_at_end.epoch + dt_min;
  const double next_raan = plane_raan(next_plane, t_min, c) + next_shape.offsets.d_raan0;
  const double dep_raan = dep_at_end.raan + dep_rate * dt_min;
  const double gap_min = angle_diff(next_raan, dep_raan);
  const double gap_max = gap_min + (next_rate - dep_rate) * (dt_max - dt_min);
  return transfer_time_from_raan_gaps(gap_min, gap_max, dt_min, dt_max);
}

double select_transfer_time(const InspectionOrbit& prev, const OrbitalPlane& next_plane,
                            double k_i_next, double dt_min, double dt_max,
                            const InspectionLimits& limits, const Constants& c) {
  const InspectionShape shape = design_inspection(next_plane, k_i_next, 0.0, limits, c);
  const MeanElements dep = propagate_mean(prev.elements, prev.dt_stay, c);
  return select_transfer_time(dep, next_plane, shape, dt_min, dt_max, c);
}

MeanElements apply_impulse(const MeanElements& el, const Vec3& dv_rtn, const Constants& c) {
  CartesianState s = mean_to_cartesian(el, c);
  const Vec3 r_hat = s.position.normalized();
  const Vec3 n_hat = s.position.cross(s.velocity).normalized();
  const Vec3 t_hat = n_hat.cross(r_hat);
  s.velocity += dv_rtn.x() * r_hat + dv_rtn.y() * t_hat + dv_rtn.z() * n_hat;
  return cartesian_to_mean(s, c);
}

MeanElements fly_schedule(const MeanElements& dep, const ImpulseSchedule& schedule,
                          double t_final, const Constants& c) {
  MeanElements el = dep;
  for (const auto& burn : schedule) {
    el = propagate_mean(el, burn.epoch - el.epoch, c);
    el = apply_impulse(el, burn.dv_rtn, c);
  }
  return propagate_mean(el, t_final - el.epoch, c);
}

bool arrival_matches(const MeanElements& achieved, const MeanElements& target,
                     const ArrivalTolerance& tol) {
  return std::abs(achieved.a - target.a) <= tol.a && std::abs(achieved.e - target.e) <= tol.e &&
         std::abs(achieved.i - target.i) <= tol.i &&
         std::abs(angle_diff(achieved.raan, target.raan)) <= tol.raan &&
         std::abs(angle_diff(achieved.arg_latitude(), target.arg_latitude())) <= tol.arg_latitude;
}

double schedule_dv(const ImpulseSchedule& schedule) {
  double total = 0.0;
  for (const auto& burn : schedule) total += burn.dv_rtn.norm();
  return total;
}

ImpulseSchedule realize_transfer(const MeanElements& dep, const MeanElements& arr_target,
                                 double dt, const Constants& c) {
  if (!(dt > 0.0)) throw TargetUnreachable("transfer duration must be positive");
  const double t0 = dep.epoch;
  const double t1 = t0 + dt;
  const MeanElements target = propagate_mean(arr_target, t1 - arr_target.epoch, c);
  const SecularRates dep_rates = secular_rates(dep, c);
  const MeanElements natural = propagate_with(dep, dep_rates, dt);
  if (converged(arrival_residual(natural, target), target.a)) return {};

  const double period = kTwoPi / dep_rates.arg_latitude();
  constexpr double kGuard = 60.0;  // s between distinct burns
  const double lead = 0.25 * period;
  if (dt < lead + 0.5 * period + 3.0 * kGuard)
    throw TargetUnreachable("transfer window shorter than half a revolution plus margin");

  const double rel_rate = secular_rates(target, c).arg_latitude() - dep_rates.arg_latitude();
  const double phase = angle_diff(target.arg_latitude(), natural.arg_latitude());

  // Burn angles: the relative node for the plane change, the relative perigee otherwise.
  auto burn_angle = [&](const Gap& g, bool combined) {
    return combined ? std::atan2(g.d_raan_sin, g.d_i) : std::atan2(g.d_ey, g.d_ex);
  };

  // A pair whose first burn is the first crossing of the burn angle after `earliest`.
  // The loop shifts the phase of the orbit the pair is flown from, so the crossing is
  // searched on that shifted orbit.
  auto build = [&](bool combined, double earliest) -> std::optional<Plan> {
    double shift = 0.0;
    double b1 = earliest, b2 = earliest;
    MeanElements from = dep;
    for (int pass = 0; pass < 3; ++pass) {
      from = dep;
      from.mean_anomaly += shift;
      const MeanElements at_earliest = propagate_with(from, dep_rates, earliest - t0);
      const double theta = burn_angle(gap_at(from, target, earliest, c), combined);
      b1 = std::min(next_crossing(at_earliest, dep_rates, theta),
                    next_crossing(at_earliest, dep_rates, theta + kPi));
      const double u1 = true_arg_latitude(propagate_with(from, dep_rates, b1 - t0));
      b2 = next_crossing(propagate_with(from, dep_rates, b1 - t0 + kGuard), dep_rates, u1 + kPi);
      const double drift = rel_rate * (t1 - 0.5 * (b1 + b2));
      shift = nearest_branch(phase, drift) - drift;
    }
    const bool with_loop = b1 - kGuard - (t0 + kGuard) >= period;

    const MeanElements at = propagate_with(from, dep_rates, b1 - t0);
    const Gap g = gap_at(from, target, b1, c);
    const double u_here = true_arg_latitude(at);
    Plan plan;
    auto [dv1, dv2] = pair_components(g, at.a, u_here, combined);
    plan.burns.push_back({b1, dv1});
    plan.burns.push_back({b2, dv2});
    if (!combined) {
      const MeanElements after = propagate_with(from, dep_rates, b2 - t0 + kGuard);
      const double node = burn_angle(g, true);
      const double bn = next_crossing(after, dep_rates, node);
      const double bn_alt = next_crossing(after, dep_rates, node + kPi);
      const double sign = bn_alt < bn ? -1.0 : 1.0;
      const double plane_dv = g.v * std::hypot(g.d_i, g.d_raan_sin);
      plan.burns.push_back({std::min(bn, bn_alt), Vec3(0.0, 0.0, sign * plane_dv)});
    }
    if (plan.burns.back().epoch > t1) return std::nullopt;

    if (with_loop) {
      // Whole loop revolutions so the exit burn undoes the entry burn's eccentricity kick.
      const double v = circular_speed(dep.a, c);
      const double n = mean_motion(dep.a, c);
      const double available = b1 - kGuard - (t0 + kGuard);
      double loop_dv = -v * shift / (3.0 * n * available);
      double loop_len = available;
      for (int pass = 0; pass < 4; ++pass) {
        MeanElements loop_orbit = dep;
        loop_orbit.a = dep.a * (1.0 + 2.0 * loop_dv / v);
        if (loop_orbit.a * (1.0 - dep.e) < c.re + 150.0) return std::nullopt;
        const double loop_period = kTwoPi / secular_rates(loop_orbit, c).arg_latitude();
        const double revs = std::floor(available / loop_period);
        if (revs < 1.0) return std::nullopt;  // unreachable: available >= period
        loop_len = revs * loop_period;
        loop_dv = -v * shift / (3.0 * n * loop_len);
      }
      plan.has_loop = true;
      plan.loop_start = t0 + kGuard;
      plan.loop_end = plan.loop_start + loop_len;
      plan.loop_dv = loop_dv;
      plan.planned_loop_dv = loop_dv;
      plan.slide_per_dv = 3.0 * n * loop_len / (v * dep_rates.arg_latitude());
    } else {
      plan.unabsorbed = circular_speed(dep.a, c) * std::abs(shift);
    }
    return plan;
  };

  struct Candidate {
    Plan plan;
    double score;
  };
  std::vector<Candidate> candidates;
  for (bool combined : {true, false}) {
    for (double earliest = t0 + 2.0 * kGuard + lead; earliest < t1; earliest += 0.5 * period) {
      if (auto plan = build(combined, earliest)) {
        // Without a loop the phase is closed by the pair itself, roughly V |shift| / 2.
        double cost = plan->has_loop ? 2.0 * std::abs(plan->loop_dv) : 0.5 * plan->unabsorbed;
        for (const auto& b : plan->burns) cost += b.dv_rtn.norm();
        candidates.push_back({std::move(*plan), cost});
      }
    }
  }
  if (candidates.empty()) throw TargetUnreachable("no burn opportunity absorbs the phasing");
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.score < y.score; });

  std::optional<Attempt> best;
  int tried = 0;
  for (const auto& cand : candidates) {
    if (tried == 6 || (best && tried >= 2)) break;
    ++tried;
    auto attempt = solve_plan(cand.plan, dep, target, t1, c);
    if (attempt && (!best || attempt->dv < best->dv)) best = std::move(attempt);
  }
  if (!best) throw TargetUnreachable("impulse schedule did not converge onto the target orbit");
  return best->schedule;
}

}  // namespace plane_sweep
