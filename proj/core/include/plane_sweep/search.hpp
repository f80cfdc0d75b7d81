#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "plane_sweep/scenario.hpp"
#include "plane_sweep/sequence.hpp"

namespace plane_sweep {

struct GaParams {
  int pop_size = 60;
  int max_gen = 1500;
  int chromosome_len = 40;
  double crossover_prob = 0.7;
  double mutation_prob = 0.3;
  std::uint64_t rng_seed = 42;
  double dv_budget_relaxed = 3.75;  // km/s
  double dt_min = 0.1 * kSecondsPerDay;
  double dt_max = 4.0 * kSecondsPerDay;
  int threads = 1;  // 0: hardware concurrency
};

/// Throws std::invalid_argument on out-of-range settings.
void validate(const GaParams& params);

struct GaResult {
  SequenceSolution best;
  std::vector<int> best_genes;
  std::vector<double> best_fitness_history;  // per generation, generation 0 first
};

/// Runs `body(k)` for k in [0, n) on up to `threads` workers. `body` must not depend on
/// execution order.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

/// Worker count from `requested`, falling back to PLANE_SWEEP_THREADS and then 1.
[[nodiscard]] int resolve_threads(std::optional<int> requested);

/// Sequence parameters for searching `scenario` under `params`.
[[nodiscard]] SequenceParams search_sequence_params(const Scenario& scenario,
                                                    const GaParams& params);

/// Seeded GA over plane-index chromosomes. Planes in `tabu` are never drawn.
/// `origin` charges the first leg as a transfer from that state.
[[nodiscard]] GaResult ga_search(const Scenario& scenario, const GaParams& params,
                                 const std::vector<int>& tabu = {},
                                 const std::optional<MeanElements>& origin = std::nullopt);

/// Sequential searches with a growing tabu set. For each (first, second) pair the second
/// craft pays the transfer from the first craft's initial inspection orbit.
[[nodiscard]] std::vector<SequenceSolution> multi_spacecraft_greedy(
    const Scenario& scenario, int n_craft, const std::vector<std::pair<int, int>>& pairing,
    const GaParams& params);

}  // namespace plane_sweep
