#pragma once

#include <vector>

#include "plane_sweep/astro.hpp"
#include "plane_sweep/inspection.hpp"

namespace plane_sweep {

struct TransferEstimate {
  double dv_total = 0.0;    // km/s, sqrt(inplane^2 + plane^2) + phase
  double dv_inplane = 0.0;  // km/s
  double dv_plane = 0.0;    // km/s
  double dv_phase = 0.0;    // km/s, phasing not absorbed by natural drift
  double dt = 0.0;          // s
  double raan_residual = 0.0;  // rad at arrival
};

struct ImpulseManeuver {
  double epoch = 0.0;          // s
  Vec3 dv_rtn = Vec3::Zero();  // km/s in the spacecraft's own (R, T, N) axes

  friend bool operator==(const ImpulseManeuver& a, const ImpulseManeuver& b) {
    return a.epoch == b.epoch && a.dv_rtn == b.dv_rtn;
  }
};

using ImpulseSchedule = std::vector<ImpulseManeuver>;

/// Arrival tolerances the realizer guarantees.
struct ArrivalTolerance {
  double a = 0.5;       // km
  double e = 5e-4;
  double i = 1e-4;      // rad
  double raan = 2e-3;   // rad
  double arg_latitude = 2e-2;  // rad
};

/// Cheap transfer cost: `dep` at departure, `arr` at departure + dt.
[[nodiscard]] TransferEstimate estimate_transfer_dv(const MeanElements& dep, const MeanElements& arr,
                                                    double dt, const Constants& c = kEarth);

/// Picks the transfer duration from the RAAN gap at both ends of [dt_min, dt_max].
/// Gaps are unwrapped, so `gap_at_max` may leave (-pi, pi].
[[nodiscard]] double transfer_time_from_raan_gaps(double gap_at_min, double gap_at_max,
                                                  double dt_min, double dt_max);

/// RAAN-alignment transfer duration from a departure state to the inspection orbit
/// `next_shape` of `next_plane`. The gap is exact at dt_min and then follows both orbits'
/// own drift rates.
[[nodiscard]] double select_transfer_time(const MeanElements& dep_at_end,
                                          const OrbitalPlane& next_plane,
                                          const InspectionShape& next_shape, double dt_min,
                                          double dt_max, const Constants& c = kEarth);

/// As above, designing the next plane's centered inspection orbit with `k_i_next`.
[[nodiscard]] double select_transfer_time(const InspectionOrbit& prev,
                                          const OrbitalPlane& next_plane, double k_i_next,
                                          double dt_min, double dt_max,
                                          const InspectionLimits& limits,
                                          const Constants& c = kEarth);

/// Applies one impulse given in the spacecraft's RTN axes.
[[nodiscard]] MeanElements apply_impulse(const MeanElements& el, const Vec3& dv_rtn,
                                         const Constants& c = kEarth);

/// Propagates `dep` through `schedule` to `t_final`.
[[nodiscard]] MeanElements fly_schedule(const MeanElements& dep, const ImpulseSchedule& schedule,
                                        double t_final, const Constants& c = kEarth);

[[nodiscard]] bool arrival_matches(const MeanElements& achieved, const MeanElements& target,
                                   const ArrivalTolerance& tol = {});

[[nodiscard]] double schedule_dv(const ImpulseSchedule& schedule);

/// Impulse schedule taking `dep` onto `arr_target` at dep.epoch + dt.
/// Throws TargetUnreachable when the window cannot absorb the phasing.
[[nodiscard]] ImpulseSchedule realize_transfer(const MeanElements& dep,
                                               const MeanElements& arr_target, double dt,
                                               const Constants& c = kEarth);

}  // namespace plane_sweep
