#include <gtest/gtest.h>

#include "plane_sweep/errors.hpp"
#include "plane_sweep/scenario.hpp"
#include "plane_sweep/verify.hpp"

namespace ps = plane_sweep;

namespace {

const ps::Scenario& table1() {
  static const ps::Scenario s = ps::load_scenario(PLANE_SWEEP_DATA_DIR "/table1.scn");
  return s;
}

const ps::PlaneCatalog& catalog() {
  static const ps::PlaneCatalog c(table1().planes, table1().mission.limits(), table1().constants);
  return c;
}

struct TwoLegs {
  ps::SequenceSolution solution;
  std::vector<ps::ImpulseSchedule> schedules;
};

const TwoLegs& two_legs() {
  static const TwoLegs legs = [] {
    TwoLegs out;
    out.solution = ps::evaluate_sequence({0, 1}, catalog(), ps::sequence_params(table1(), 3.75));
    const auto& first = out.solution.visits[0].inspection;
    const auto& second = out.solution.visits[1].inspection;
    const auto dep = ps::propagate_mean(first.elements, first.dt_stay);
    out.schedules.push_back(ps::realize_transfer(dep, second.elements, second.t_start - dep.epoch));
    return out;
  }();
  return legs;
}

TEST(Verify, RealizedSolutionPasses) {
  const auto& legs = two_legs();
  const auto report = ps::verify_solution(legs.solution, legs.schedules, table1());
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.satellites_passed, legs.solution.total_sats);
  EXPECT_EQ(report.satellites_failed, 0);
  ASSERT_EQ(report.legs.size(), 2u);
  EXPECT_TRUE(report.legs[1].arrival_ok);
  EXPECT_NEAR(report.dv_actual, ps::schedule_dv(legs.schedules[0]), 1e-15);
  EXPECT_EQ(report.end_time, legs.solution.end_time);
}

TEST(Verify, MissingBurnsAreFlagged) {
  const auto& legs = two_legs();
  ASSERT_FALSE(legs.schedules[0].empty());
  const auto report = ps::verify_solution(legs.solution, {ps::ImpulseSchedule{}}, table1());
  EXPECT_FALSE(report.ok());
  EXPECT_FALSE(report.legs[1].arrival_ok);
}

TEST(Verify, ScheduleCountMustMatch) {
  const auto& legs = two_legs();
  EXPECT_THROW((void)ps::verify_solution(legs.solution, {}, table1()), ps::ScheduleMismatch);
  EXPECT_THROW((void)ps::verify_solution(legs.solution, legs.schedules, table1(),
                                         legs.solution.visits[0].inspection.elements),
               ps::ScheduleMismatch);
}

TEST(Verify, BudgetAndHorizonViolations) {
  const auto& legs = two_legs();
  ps::Scenario tight = table1();
  tight.mission.dv_max = 1e-6;
  tight.mission.t_f = 1.0;
  const auto report = ps::verify_solution(legs.solution, legs.schedules, tight);
  EXPECT_EQ(report.violations.size(), 2u);
}

TEST(Verify, FlybyRecordsRespectLimits) {
  const auto limits = table1().mission.limits();
  const auto orbit = ps::compute_inspection_orbit(table1().planes[0], 0, 0.0, 1.0, -1.0, limits);
  for (const auto& f : ps::simulate_inspection_leg(orbit, limits)) {
    EXPECT_EQ(f.pass, f.range < limits.dr_flyby && f.speed < limits.dv_flyby);
    EXPECT_DOUBLE_EQ(f.range, f.relative.range());
    EXPECT_EQ(f.sat.constellation_id, 1);
    EXPECT_EQ(f.sat.plane_id, 1);
  }
}

TEST(Verify, TraceRoundTrip) {
  const auto limits = table1().mission.limits();
  const auto orbit = ps::compute_inspection_orbit(table1().planes[3], 2, 500.0, 0.0, 0.0, limits);
  const auto flybys = ps::simulate_inspection_leg(orbit, limits);
  const auto samples = ps::sample_leg(orbit, 12);
  EXPECT_GE(samples.size(), static_cast<std::size_t>(12 * (orbit.plane.n_sats - 1)));
  const auto text = ps::emit_trace(flybys, samples);
  EXPECT_EQ(text.rfind("t\tr_t\tr_n\tr_r\tv_t\tv_n\tv_r\trange\tspeed\tpass\n", 0), 0u);
  const auto rows = ps::parse_trace(text);
  ASSERT_EQ(rows.size(), flybys.size() + samples.size());
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_LE(rows[k - 1].t, rows[k].t);
  std::size_t flagged = 0;
  for (const auto& r : rows) flagged += r.pass.has_value();
  EXPECT_EQ(flagged, flybys.size());
  EXPECT_EQ(ps::emit_trace(flybys, samples), text);
  for (const auto& f : flybys)
    EXPECT_NE(std::find(rows.begin(), rows.end(), ps::trace_row(f)), rows.end());
}

TEST(Verify, TraceParseErrors) {
  EXPECT_THROW((void)ps::parse_trace(""), ps::ParseError);
  EXPECT_THROW((void)ps::parse_trace("time\tx\n"), ps::ParseError);
  const std::string header = "t\tr_t\tr_n\tr_r\tv_t\tv_n\tv_r\trange\tspeed\tpass\n";
  EXPECT_THROW((void)ps::parse_trace(header + "1\t2\t3\n"), ps::ParseError);
  EXPECT_THROW((void)ps::parse_trace(header + "1\t2\t3\t4\t5\t6\t7\t8\t9\tyes\n"), ps::ParseError);
  EXPECT_EQ(ps::parse_trace(header + "1\t2\t3\t4\t5\t6\t7\t8\t9\t-\n").size(), 1u);
}

}  // namespace
