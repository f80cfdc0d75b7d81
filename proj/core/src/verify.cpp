#include "plane_sweep/verify.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "plane_sweep/errors.hpp"
#include "text_util.hpp"

namespace plane_sweep {

namespace {

constexpr std::string_view kTraceHeader = "t\tr_t\tr_n\tr_r\tv_t\tv_n\tv_r\trange\tspeed\tpass";

int sat_index(const InspectionOrbit& orbit, int k) {
  const int n = orbit.plane.n_sats;
  return ((orbit.start_sat - k) % n + n) % n;
}

/// Epoch of the k-th spacecraft perigee passage after the leg starts.
double perigee_passage(const InspectionOrbit& orbit, int k, const Constants& c) {
  const double n_m = secular_rates(orbit.elements, c).mean_anomaly;
  const double first = orbit.t_start - wrap_pi(orbit.elements.mean_anomaly) / n_m;
  return first + k * kTwoPi / n_m;
}

/// Ascending-node crossing of satellite `sat` nearest `t`.
double node_crossing(const OrbitalPlane& plane, int sat, double t, const Constants& c) {
  const double rate = plane_rates(plane, c).arg_latitude();
  return t - wrap_pi(satellite_elements(plane, sat, t, c).mean_anomaly) / rate;
}

RtnState relative_at(const MeanElements& spacecraft, const OrbitalPlane& plane, int sat,
                     double t, const Constants& c) {
  const auto sc = mean_to_cartesian(propagate_mean(spacecraft, t - spacecraft.epoch, c), c);
  const auto target = mean_to_cartesian(satellite_elements(plane, sat, t, c), c);
  return relative_rtn(sc, target);
}

}  // namespace

std::vector<FlybyRecord> simulate_inspection_leg(const InspectionOrbit& orbit,
                                                 const InspectionLimits& limits,
                                                 const Constants& c) {
  const OrbitalPlane& plane = orbit.plane;
  std::vector<FlybyRecord> out;
  out.reserve(static_cast<std::size_t>(plane.n_sats));
  for (int k = 0; k < plane.n_sats; ++k) {
    const int sat = sat_index(orbit, k);
    FlybyRecord r;
    r.sat = {plane.constellation_id, plane.plane_id, sat};
    r.epoch = node_crossing(plane, sat, perigee_passage(orbit, k, c), c);
    r.relative = relative_at(orbit.elements, plane, sat, r.epoch, c);
    r.range = r.relative.range();
    r.speed = r.relative.speed();
    r.pass = r.range < limits.dr_flyby && r.speed < limits.dv_flyby;
    out.push_back(r);
  }
  return out;
}

VerificationReport verify_solution(const SequenceSolution& solution,
                                   const std::vector<ImpulseSchedule>& schedules,
                                   const Scenario& scenario,
                                   const std::optional<MeanElements>& origin) {
  const Constants& c = scenario.constants;
  const std::size_t legs = solution.visits.size();
  const std::size_t transfers = origin ? legs : (legs == 0 ? 0 : legs - 1);
  if (schedules.size() != transfers)
    throw ScheduleMismatch("expected " + std::to_string(transfers) + " schedules, got " +
                           std::to_string(schedules.size()));

  const InspectionLimits limits = scenario.mission.limits();
  VerificationReport report;
  report.end_time = scenario.mission.t0;
  std::optional<MeanElements> state;  // spacecraft at the end of the previous leg
  if (origin) state = propagate_mean(*origin, scenario.mission.t0 - origin->epoch, c);

  std::size_t next_schedule = 0;
  for (std::size_t j = 0; j < legs; ++j) {
    const PlaneVisit& visit = solution.visits[j];
    LegReport leg;
    leg.plane_index = visit.plane_index;
    InspectionOrbit flown = visit.inspection;
    if (state) {
      const ImpulseSchedule& schedule = schedules[next_schedule++];
      const MeanElements achieved = fly_schedule(*state, schedule, flown.t_start, c);
      leg.dv_actual = schedule_dv(schedule);
      leg.arrival_ok = arrival_matches(achieved, flown.elements);
      if (!leg.arrival_ok)
        report.violations.push_back("leg " + std::to_string(j) + ": arrival off the inspection orbit");
      flown.elements = achieved;
    }
    leg.flybys = simulate_inspection_leg(flown, limits, c);
    for (const auto& f : leg.flybys) (f.pass ? report.satellites_passed : report.satellites_failed)++;
    if (const auto failed = std::count_if(leg.flybys.begin(), leg.flybys.end(),
                                          [](const FlybyRecord& f) { return !f.pass; });
        failed > 0)
      report.violations.push_back("leg " + std::to_string(j) + ": " + std::to_string(failed) +
                                  " flybys outside the limits");
    report.dv_actual += leg.dv_actual;
    report.end_time = flown.t_end();
    state = propagate_mean(flown.elements, flown.dt_stay, c);
    report.legs.push_back(std::move(leg));
  }
  if (report.dv_actual > scenario.mission.dv_max)
    report.violations.push_back("actual dv " + std::to_string(report.dv_actual) +
                                " km/s exceeds the budget");
  if (report.end_time > scenario.mission.t_f)
    report.violations.push_back("mission ends after the horizon");
  return report;
}

TraceRow trace_row(const FlybyRecord& record) {
  return {record.epoch, record.relative, record.range, record.speed, record.pass};
}

std::vector<TraceRow> sample_leg(const InspectionOrbit& orbit, int per_orbit, const Constants& c) {
  const OrbitalPlane& plane = orbit.plane;
  const double period = kTwoPi / secular_rates(orbit.elements, c).mean_anomaly;
  const double step = period / per_orbit;
  std::vector<TraceRow> out;
  for (double t = orbit.t_start; t <= orbit.t_end(); t += step) {
    const int k = std::clamp(static_cast<int>(std::lround((t - orbit.t_start) / period)), 0,
                             plane.n_sats - 1);
    TraceRow row;
    row.t = t;
    row.relative = relative_at(orbit.elements, plane, sat_index(orbit, k), t, c);
    row.range = row.relative.range();
    row.speed = row.relative.speed();
    out.push_back(row);
  }
  return out;
}

std::string emit_trace(const std::vector<FlybyRecord>& records,
                       const std::vector<TraceRow>& samples) {
  std::vector<TraceRow> rows;
  rows.reserve(records.size() + samples.size());
  for (const auto& r : records) rows.push_back(trace_row(r));
  rows.insert(rows.end(), samples.begin(), samples.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const TraceRow& a, const TraceRow& b) { return a.t < b.t; });

  std::string out(kTraceHeader);
  out += '\n';
  for (const auto& row : rows) {
    const auto& s = row.relative;
    for (double v : {row.t, s.r_t, s.r_n, s.r_r, s.v_t, s.v_n, s.v_r, row.range, row.speed}) {
      out += textio::format_number(v);
      out += '\t';
    }
    out += row.pass ? (*row.pass ? "1" : "0") : "-";
    out += '\n';
  }
  return out;
}

std::vector<TraceRow> parse_trace(std::string_view text) {
  std::vector<TraceRow> rows;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto stop = text.find('\n', pos);
    if (stop == std::string_view::npos) stop = text.size();
    const std::string_view line = text.substr(pos, stop - pos);
    pos = stop + 1;
    ++line_no;
    if (line_no == 1) {
      if (line != kTraceHeader) throw ParseError(line_no, "unexpected trace header");
      continue;
    }
    std::array<double, 9> v{};
    std::size_t at = 0;
    for (double& field : v) {
      const auto tab = line.find('\t', at);
      if (tab == std::string_view::npos) throw ParseError(line_no, "expected 10 columns");
      const auto [ptr, ec] = std::from_chars(line.data() + at, line.data() + tab, field);
      if (ec != std::errc() || ptr != line.data() + tab) throw ParseError(line_no, "bad number");
      at = tab + 1;
    }
    TraceRow row{v[0], RtnState{v[1], v[2], v[3], v[4], v[5], v[6]}, v[7], v[8], std::nullopt};
    const std::string_view flag = line.substr(at);
    if (flag == "1") row.pass = true;
    else if (flag == "0") row.pass = false;
    else if (flag != "-") throw ParseError(line_no, "pass column must be 1, 0 or -");
    rows.push_back(row);
  }
  if (line_no == 0) throw ParseError(1, "empty trace");
  return rows;
}

}  // namespace plane_sweep
