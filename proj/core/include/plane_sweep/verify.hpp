#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plane_sweep/relative_motion.hpp"
#include "plane_sweep/scenario.hpp"
#include "plane_sweep/sequence.hpp"
#include "plane_sweep/transfer.hpp"

namespace plane_sweep {

struct SatelliteId {
  int constellation_id = 0;
  int plane_id = 0;
  int index = 0;

  friend bool operator==(const SatelliteId&, const SatelliteId&) = default;
};

struct FlybyRecord {
  SatelliteId sat;
  double epoch = 0.0;  // s, satellite ascending-node crossing
  RtnState relative;   // spacecraft w.r.t. satellite
  double range = 0.0;  // km
  double speed = 0.0;  // km/s
  bool pass = false;
};

/// Flybys of one inspection leg from absolute propagation of both bodies, one per
/// satellite in visiting order.
[[nodiscard]] std::vector<FlybyRecord> simulate_inspection_leg(const InspectionOrbit& orbit,
                                                               const InspectionLimits& limits,
                                                               const Constants& c = kEarth);

struct LegReport {
  int plane_index = 0;
  bool arrival_ok = true;
  double dv_actual = 0.0;  // km/s, transfer into this leg
  std::vector<FlybyRecord> flybys;
};

struct VerificationReport {
  std::vector<LegReport> legs;
  int satellites_passed = 0;
  int satellites_failed = 0;
  double dv_actual = 0.0;  // km/s
  double end_time = 0.0;   // s
  std::vector<std::string> violations;

  [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Flies every transfer schedule and leg under the secular model. One schedule per
/// transfer: visits - 1 without `origin`, one per visit with it. Throws ScheduleMismatch.
[[nodiscard]] VerificationReport verify_solution(
    const SequenceSolution& solution, const std::vector<ImpulseSchedule>& schedules,
    const Scenario& scenario, const std::optional<MeanElements>& origin = std::nullopt);

/// One trace line. Sampled rows carry no pass flag.
struct TraceRow {
  double t = 0.0;
  RtnState relative;
  double range = 0.0;
  double speed = 0.0;
  std::optional<bool> pass;

  friend bool operator==(const TraceRow& a, const TraceRow& b) {
    return a.t == b.t && a.relative.r_t == b.relative.r_t && a.relative.r_n == b.relative.r_n &&
           a.relative.r_r == b.relative.r_r && a.relative.v_t == b.relative.v_t &&
           a.relative.v_n == b.relative.v_n && a.relative.v_r == b.relative.v_r &&
           a.range == b.range && a.speed == b.speed && a.pass == b.pass;
  }
};

[[nodiscard]] TraceRow trace_row(const FlybyRecord& record);

/// Relative state w.r.t. the satellite due next, `per_orbit` samples per spacecraft period.
[[nodiscard]] std::vector<TraceRow> sample_leg(const InspectionOrbit& orbit, int per_orbit = 60,
                                               const Constants& c = kEarth);

/// Tab-separated trace with a one-line header, rows ordered by time (records first on ties).
[[nodiscard]] std::string emit_trace(const std::vector<FlybyRecord>& records,
                                     const std::vector<TraceRow>& samples = {});
/// Inverse of emit_trace. Throws ParseError.
[[nodiscard]] std::vector<TraceRow> parse_trace(std::string_view text);

}  // namespace plane_sweep
