#include <gtest/gtest.h>

#include <atomic>
#include <set>
#include <stdexcept>

#include "plane_sweep/scenario.hpp"
#include "plane_sweep/search.hpp"

namespace ps = plane_sweep;

namespace {

constexpr double kDeg = ps::kPi / 180.0;

// Three small constellations keep each GA run well under a second.
ps::Scenario small_scenario() {
  return ps::make_scenario({{1, 8, 22, 550.0, 53.0 * kDeg, 0.0, 0.0},
                            {2, 6, 30, 600.0, 55.0 * kDeg, 0.02, 0.0},
                            {3, 6, 32, 700.0, 55.0 * kDeg, 0.01, 0.0}});
}

ps::GaParams quick() {
  ps::GaParams p;
  p.pop_size = 16;
  p.max_gen = 30;
  p.chromosome_len = 12;
  return p;
}

TEST(Search, ValidateRejectsBadSettings) {
  auto p = quick();
  EXPECT_NO_THROW(ps::validate(p));
  p.pop_size = 1;
  EXPECT_THROW(ps::validate(p), std::invalid_argument);
  p = quick();
  p.mutation_prob = 1.5;
  EXPECT_THROW(ps::validate(p), std::invalid_argument);
  p = quick();
  p.dt_max = p.dt_min;
  EXPECT_THROW(ps::validate(p), std::invalid_argument);
}

TEST(Search, ParallelForCoversEveryIndexOnce) {
  for (int threads : {1, 2, 5}) {
    std::vector<std::atomic<int>> hits(37);
    ps::parallel_for(37, threads, [&](int k) { hits[static_cast<std::size_t>(k)]++; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  EXPECT_EQ(ps::resolve_threads(3), 3);
}

TEST(Search, SeededRunIsDeterministic) {
  const auto s = small_scenario();
  const auto a = ps::ga_search(s, quick());
  const auto b = ps::ga_search(s, quick());
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.best_genes, b.best_genes);
  EXPECT_EQ(a.best_fitness_history, b.best_fitness_history);
}

TEST(Search, ThreadCountDoesNotChangeResult) {
  const auto s = small_scenario();
  auto p = quick();
  const auto one = ps::ga_search(s, p);
  p.threads = 3;
  const auto three = ps::ga_search(s, p);
  EXPECT_EQ(one.best, three.best);
  EXPECT_EQ(one.best_fitness_history, three.best_fitness_history);
}

TEST(Search, ElitismKeepsBestFitnessMonotone) {
  const auto s = small_scenario();
  auto p = quick();
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    p.rng_seed = seed;
    const auto r = ps::ga_search(s, p);
    ASSERT_EQ(r.best_fitness_history.size(), static_cast<std::size_t>(p.max_gen + 1));
    for (std::size_t g = 1; g < r.best_fitness_history.size(); ++g)
      EXPECT_GE(r.best_fitness_history[g], r.best_fitness_history[g - 1]);
    EXPECT_EQ(r.best.fitness, r.best_fitness_history.back());
    EXPECT_LE(r.best.total_dv, p.dv_budget_relaxed);
  }
}

TEST(Search, SingleCandidatePlane) {
  const auto s = ps::make_scenario({{1, 1, 22, 550.0, 53.0 * kDeg, 0.0, 0.0}});
  const auto r = ps::ga_search(s, quick());
  ASSERT_EQ(r.best.visits.size(), 1u);
  EXPECT_EQ(r.best.total_sats, 22);
}

TEST(Search, TabuPlanesAreNeverVisited) {
  const auto s = small_scenario();
  const std::vector<int> tabu{0, 1, 2, 3, 8, 9};
  const auto r = ps::ga_search(s, quick(), tabu);
  for (const auto& v : r.best.visits)
    for (int t : tabu) EXPECT_NE(v.plane_index, t);
}

TEST(Search, GreedyCraftAreDisjoint) {
  const auto s = ps::load_scenario(PLANE_SWEEP_DATA_DIR "/table1.scn");
  const auto craft = ps::multi_spacecraft_greedy(s, 3, {{0, 1}}, quick());
  ASSERT_EQ(craft.size(), 3u);
  std::set<int> seen;
  for (const auto& sol : craft)
    for (const auto& v : sol.visits) EXPECT_TRUE(seen.insert(v.plane_index).second) << v.plane_index;
  // The paired craft pays a transfer into its first plane.
  ASSERT_FALSE(craft[1].visits.empty());
  EXPECT_GT(craft[1].visits.front().dv, 0.0);
  EXPECT_THROW((void)ps::multi_spacecraft_greedy(s, 2, {{1, 0}}, quick()), std::invalid_argument);
}

}  // namespace
