#pragma once

#include <optional>
#include <vector>

#include "plane_sweep/refine.hpp"
#include "plane_sweep/scenario.hpp"
#include "plane_sweep/search.hpp"
#include "plane_sweep/transfer.hpp"
#include "plane_sweep/verify.hpp"

namespace plane_sweep {

struct RealizedSolution {
  SequenceSolution solution;
  std::vector<ImpulseSchedule> schedules;  // one per transfer
  double dv_actual = 0.0;                  // km/s
};

/// Realizes each transfer of `solution` in order and keeps the longest prefix whose burns
/// fit in `dv_max` and whose transfers all converge. `params.origin` adds a first transfer.
[[nodiscard]] RealizedSolution realize_solution(const SequenceSolution& solution,
                                                const PlaneCatalog& catalog,
                                                const SequenceParams& params, double dv_max);

struct PipelineConfig {
  GaParams ga;
  DeParams de;
  bool refine = true;
};

struct PipelineResult {
  GaResult search;
  RefineResult refined;
  RealizedSolution realized;
  VerificationReport report;
};

/// Search, refine, realize within the mission budget, verify.
[[nodiscard]] PipelineResult run_pipeline(const Scenario& scenario, const PipelineConfig& config);

}  // namespace plane_sweep
