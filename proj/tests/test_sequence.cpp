#include <gtest/gtest.h>

#include <cmath>

#include "plane_sweep/scenario.hpp"
#include "plane_sweep/sequence.hpp"

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

ps::SequenceParams params() { return ps::sequence_params(table1(), 3.75); }

TEST(Sequence, AdaptiveInclinationBranches) {
  const auto& plane = table1().planes[0];
  EXPECT_DOUBLE_EQ(ps::adaptive_k_i(plane, plane.i0 + 1.0, 0.01), 1.0);
  EXPECT_DOUBLE_EQ(ps::adaptive_k_i(plane, plane.i0 - 1.0, 0.01), -1.0);
  EXPECT_EQ(ps::adaptive_k_i(plane, plane.i0 + 1.0, 0.0), 0.0);
  const double k = ps::adaptive_k_i(plane, plane.i0 + 0.004, 0.01);
  EXPECT_DOUBLE_EQ(plane.i0 + k * 0.01, plane.i0 + 0.004);
}

TEST(Sequence, FitnessWeighting) {
  EXPECT_DOUBLE_EQ(ps::sequence_fitness(22, 0.0, 3.75), 23.0);
  EXPECT_DOUBLE_EQ(ps::sequence_fitness(100, 3.75, 3.75), 100.0);
}

TEST(Sequence, SinglePlaneIsFree) {
  const auto sol = ps::evaluate_sequence({0}, catalog(), params());
  ASSERT_EQ(sol.visits.size(), 1u);
  EXPECT_EQ(sol.total_sats, 22);
  EXPECT_EQ(sol.total_dv, 0.0);
  EXPECT_DOUBLE_EQ(sol.fitness, 23.0);
  EXPECT_FALSE(sol.truncated_at);
}

TEST(Sequence, DuplicatesAreSkipped) {
  const auto a = ps::evaluate_sequence({0, 1, 0, 1, 2}, catalog(), params());
  const auto b = ps::evaluate_sequence({0, 1, 2}, catalog(), params());
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.visits.size(), 3u);
}

TEST(Sequence, HorizonTruncates) {
  auto p = params();
  p.t_f = 2.0 * ps::kSecondsPerDay;
  const auto sol = ps::evaluate_sequence({0, 1, 2}, catalog(), p);
  EXPECT_EQ(sol.truncated_at, 1);
  EXPECT_EQ(sol.total_sats, 22);
  EXPECT_DOUBLE_EQ(sol.fitness, ps::sequence_fitness(22, sol.total_dv, p.dv_budget));
}

TEST(Sequence, BudgetTruncates) {
  auto p = params();
  p.dv_budget = 1e-4;
  const auto sol = ps::evaluate_sequence({0, 100, 200}, catalog(), p);
  EXPECT_EQ(sol.truncated_at, 1);
  EXPECT_LE(sol.total_dv, p.dv_budget);
}

TEST(Sequence, TimelineAndTotals) {
  const auto sol = ps::evaluate_sequence({0, 5, 80, 81, 300}, catalog(), params());
  double dv = 0.0;
  int sats = 0;
  double t = params().t0;
  for (const auto& v : sol.visits) {
    dv += v.dv;
    sats += v.inspection.plane.n_sats;
    EXPECT_GE(v.t_arrive, t);
    EXPECT_EQ(v.t_arrive, v.inspection.t_start);
    EXPECT_GE(v.start_sat, 0);
    EXPECT_LT(v.start_sat, v.inspection.plane.n_sats);
    EXPECT_EQ(v.inspection.k_omega, 0.0);
    t = v.inspection.t_end();
  }
  EXPECT_NEAR(sol.total_dv, dv, 1e-12);
  EXPECT_EQ(sol.total_sats, sats);
  EXPECT_EQ(sol.end_time, t);
}

TEST(Sequence, ImpliedPlanReproducesSolution) {
  const auto p = params();
  const auto sol = ps::evaluate_sequence({0, 5, 80, 81, 300, 150}, catalog(), p);
  const auto plan = ps::implied_plan(sol, p);
  ASSERT_EQ(plan.size(), sol.visits.size());
  const auto again = ps::evaluate_plan(plan, catalog(), p);
  EXPECT_EQ(again.violations, 0);
  EXPECT_NEAR(again.solution.total_dv, sol.total_dv, 1e-12);
  EXPECT_EQ(again.solution.total_sats, sol.total_sats);
  for (std::size_t k = 0; k < plan.size(); ++k)
    EXPECT_EQ(again.solution.visits[k].start_sat, sol.visits[k].start_sat);
}

TEST(Sequence, ResumedBuilderMatchesFresh) {
  const auto p = params();
  ps::SequenceBuilder fresh(catalog(), p);
  for (int g : {0, 5, 80}) fresh.add_adaptive(g);
  ps::SequenceBuilder resumed(catalog(), p, {fresh.visits().begin(), fresh.visits().begin() + 2});
  resumed.add_adaptive(80);
  EXPECT_EQ(resumed.solution(), fresh.solution());
}

TEST(Sequence, ExplicitHorizonViolation) {
  auto p = params();
  p.t_f = 2.0 * ps::kSecondsPerDay;
  ps::SequenceBuilder builder(catalog(), p);
  EXPECT_EQ(builder.add_explicit(0, 0.0, 0.0, 0.0), 0);
  EXPECT_GE(builder.add_explicit(1, 0.0, 0.0, ps::kSecondsPerDay), 1);
}

}  // namespace
