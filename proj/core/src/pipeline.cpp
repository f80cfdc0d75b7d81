#include "plane_sweep/pipeline.hpp"

#include "plane_sweep/errors.hpp"

namespace plane_sweep {

RealizedSolution realize_solution(const SequenceSolution& solution, const PlaneCatalog& catalog,
                                  const SequenceParams& params, double dv_max) {
  const Constants& c = params.constants;
  RealizedSolution out;
  std::vector<PlaneVisit> kept;
  std::optional<MeanElements> state;
  if (params.origin) state = propagate_mean(*params.origin, params.t0 - params.origin->epoch, c);
  for (const auto& visit : solution.visits) {
    const InspectionOrbit& o = visit.inspection;
    if (state) {
      ImpulseSchedule schedule;
      try {
        schedule = realize_transfer(*state, o.elements, o.t_start - state->epoch, c);
      } catch (const TargetUnreachable&) {
        break;
      }
      const double dv = schedule_dv(schedule);
      if (out.dv_actual + dv > dv_max) break;
      out.dv_actual += dv;
      out.schedules.push_back(std::move(schedule));
    }
    kept.push_back(visit);
    state = propagate_mean(o.elements, o.dt_stay, c);
  }

  const std::size_t n_kept = kept.size();
  if (n_kept == solution.visits.size()) {
    out.solution = solution;
    return out;
  }
  out.solution = SequenceBuilder(catalog, params, std::move(kept)).solution();
  out.solution.truncated_at = static_cast<int>(n_kept);
  return out;
}

PipelineResult run_pipeline(const Scenario& scenario, const PipelineConfig& config) {
  PipelineResult r;
  r.search = ga_search(scenario, config.ga);
  const SequenceParams params = search_sequence_params(scenario, config.ga);
  const PlaneCatalog catalog(scenario.planes, scenario.mission.limits(), scenario.constants);
  DeParams de = config.de;
  if (!config.refine) de.max_gen = 0;
  r.refined = de_refine(r.search.best, catalog, params, de);
  r.realized = realize_solution(r.refined.best, catalog, params, scenario.mission.dv_max);
  r.report = verify_solution(r.realized.solution, r.realized.schedules, scenario);
  return r;
}

}  // namespace plane_sweep
