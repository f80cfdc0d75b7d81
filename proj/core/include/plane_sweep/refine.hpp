#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "plane_sweep/sequence.hpp"

namespace plane_sweep {

struct DeParams {
  int pop_size = 0;  // 0: 10 per dimension, at most 200
  int max_gen = 500;
  double weight = 0.7;     // differential weight F
  double crossover = 0.3;  // CR
  std::uint64_t rng_seed = 42;
  int threads = 1;
  /// Ablation: keep the incumbent's k_omega and k_i, move only order and durations.
  bool freeze_offsets = false;
};

/// Throws std::invalid_argument on out-of-range settings.
void validate(const DeParams& params);

/// Unit-cube genome of an m-visit sequence, four blocks of m: order keys, k_omega, k_i and
/// transfer durations. Gene j of each block belongs to `planes[j]`.
struct RefineSpace {
  std::vector<int> planes;
  std::vector<CoefficientRange> k_i;  // feasible k_i per plane
  double dt_min = 0.0;
  double dt_max = 0.0;

  [[nodiscard]] std::size_t size() const { return planes.size(); }
};

/// Throws InfeasiblePlane if a plane has no feasible design.
[[nodiscard]] RefineSpace refine_space(const std::vector<int>& planes, const PlaneCatalog& catalog,
                                       const SequenceParams& params);

struct Decoded {
  std::vector<int> order;  // gene indices in visiting order
  std::vector<double> k_omega;
  std::vector<double> k_i;
  std::vector<double> dt;  // s
};

/// Order is the stable argsort of the keys; the other blocks map affinely from [0, 1] onto
/// [-1, 1], the plane's feasible k_i range and [dt_min, dt_max].
[[nodiscard]] Decoded decode(std::span<const double> x, const RefineSpace& space);

/// Visit plans in decoded order.
[[nodiscard]] std::vector<VisitPlan> decoded_plan(const Decoded& d, const RefineSpace& space);

/// Inverse of decode for a plan visiting `space.planes` in order.
[[nodiscard]] std::vector<double> encode(const std::vector<VisitPlan>& plan,
                                         const RefineSpace& space);

/// Estimated total dv of the decoded plan plus 10 km/s per constraint violation.
[[nodiscard]] double de_objective(std::span<const double> x, const RefineSpace& space,
                                  const PlaneCatalog& catalog, const SequenceParams& params);

struct RefineResult {
  SequenceSolution best;
  std::vector<VisitPlan> plan;
  double objective = 0.0;
  std::vector<double> best_history;  // per generation, generation 0 first
};

/// DE/rand/1/bin over the seed's plane set, with the seed in the initial population. The
/// returned total_dv never exceeds the seed's.
[[nodiscard]] RefineResult de_refine(const SequenceSolution& seed, const PlaneCatalog& catalog,
                                     const SequenceParams& params, const DeParams& de);

}  // namespace plane_sweep
