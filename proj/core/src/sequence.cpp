#include "plane_sweep/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plane_sweep/errors.hpp"
#include "plane_sweep/transfer.hpp"

namespace plane_sweep {

SequenceParams sequence_params(const Scenario& scenario, double dv_budget) {
  SequenceParams p;
  p.dv_budget = dv_budget;
  p.t0 = scenario.mission.t0;
  p.t_f = scenario.mission.t_f;
  p.dt_min = scenario.mission.dt_min;
  p.dt_max = scenario.mission.dt_max;
  p.limits = scenario.mission.limits();
  p.constants = scenario.constants;
  return p;
}

double adaptive_k_i(const OrbitalPlane& plane, double prev_incl, double d_i_max) {
  if (!(d_i_max > 0.0)) return 0.0;
  const double d_i = std::clamp(prev_incl - plane.i0, -d_i_max, d_i_max);
  return d_i / d_i_max;
}

double sequence_fitness(int total_sats, double total_dv, double dv_budget) {
  return total_sats + (1.0 - total_dv / dv_budget);
}

PlaneCatalog::PlaneCatalog(const std::vector<OrbitalPlane>& planes, const InspectionLimits& limits,
                           const Constants& c)
    : planes_(planes), limits_(limits), constants_(c) {
  base_.reserve(planes_.size());
  for (const auto& p : planes_) {
    try {
      base_.emplace_back(design_inspection(p, 0.0, 0.0, limits_, constants_));
    } catch (const InfeasiblePlane&) {
      base_.emplace_back(std::nullopt);
    }
  }
}

SequenceBuilder::SequenceBuilder(const PlaneCatalog& catalog, const SequenceParams& params)
    : catalog_(&catalog), params_(params), used_(static_cast<std::size_t>(catalog.size()), false) {}

SequenceBuilder::SequenceBuilder(const PlaneCatalog& catalog, const SequenceParams& params,
                                 std::vector<PlaneVisit> visits)
    : SequenceBuilder(catalog, params) {
  for (auto& v : visits) append(std::move(v));
}

void SequenceBuilder::append(PlaneVisit visit) {
  used_[static_cast<std::size_t>(visit.plane_index)] = true;
  total_dv_ += visit.dv;
  visits_.push_back(std::move(visit));
}

std::optional<SequenceBuilder::Departure> SequenceBuilder::departure() const {
  const Constants& c = catalog_->constants();
  if (!visits_.empty()) {
    const InspectionOrbit& last = visits_.back().inspection;
    return Departure{propagate_mean(last.elements, last.dt_stay, c), last.t_end()};
  }
  if (params_.origin)
    return Departure{propagate_mean(*params_.origin, params_.t0 - params_.origin->epoch, c),
                     params_.t0};
  return std::nullopt;
}

PlaneVisit SequenceBuilder::best_start(int plane_index, const InspectionShape& shape,
                                       double t_ready, const std::optional<Departure>& dep) const {
  const OrbitalPlane& plane = catalog_->plane(plane_index);
  const Constants& c = catalog_->constants();
  PlaneVisit best;
  best.plane_index = plane_index;
  double best_key = std::numeric_limits<double>::infinity();
  for (int s = 0; s < plane.n_sats; ++s) {
    InspectionOrbit orbit = place_inspection(shape, plane, s, t_ready, catalog_->limits(), c);
    double dv = 0.0;
    double key = orbit.t_start;  // free first leg: earliest start
    if (dep) {
      dv = estimate_transfer_dv(dep->state, orbit.elements, orbit.t_start - dep->time, c).dv_total;
      key = dv;
    }
    if (key < best_key) {
      best_key = key;
      best.start_sat = s;
      best.t_arrive = orbit.t_start;
      best.dv = dv;
      best.inspection = std::move(orbit);
    }
  }
  best.dt_transfer = dep ? t_ready - dep->time : 0.0;
  return best;
}

SequenceBuilder::Outcome SequenceBuilder::add_adaptive(int plane_index) {
  if (truncated_at_) return Outcome::Truncated;
  if (used_[static_cast<std::size_t>(plane_index)]) return Outcome::Skipped;
  const auto& base = catalog_->base(plane_index);
  if (!base) return Outcome::Skipped;
  const OrbitalPlane& plane = catalog_->plane(plane_index);
  const Constants& c = catalog_->constants();

  const auto dep = departure();
  double k_i = 0.0;
  if (dep && params_.adaptive_inclination) k_i = adaptive_k_i(plane, dep->state.i, base->d_i_max);
  InspectionShape shape = *base;
  if (k_i != 0.0) {
    try {
      shape = design_inspection(plane, k_i, 0.0, catalog_->limits(), c);
    } catch (const InfeasiblePlane&) {
      return Outcome::Skipped;
    }
  }

  double t_ready = params_.t0;
  if (dep)
    t_ready = dep->time + select_transfer_time(dep->state, plane, shape,
                                               params_.dt_min, params_.dt_max, c);
  PlaneVisit visit = best_start(plane_index, shape, t_ready, dep);
  if (total_dv_ + visit.dv > params_.dv_budget || visit.inspection.t_end() > params_.t_f) {
    truncated_at_ = static_cast<int>(visits_.size());
    return Outcome::Truncated;
  }
  append(std::move(visit));
  return Outcome::Added;
}

int SequenceBuilder::add_explicit(int plane_index, double k_omega, double k_i, double dt) {
  const OrbitalPlane& plane = catalog_->plane(plane_index);
  const Constants& c = catalog_->constants();
  InspectionShape shape;
  try {
    shape = design_inspection(plane, k_i, k_omega, catalog_->limits(), c);
  } catch (const InfeasiblePlane&) {
    return 1;
  }
  const auto dep = departure();
  const double t_ready = dep ? dep->time + dt : params_.t0;
  PlaneVisit visit = best_start(plane_index, shape, t_ready, dep);
  const int violations = visit.inspection.t_end() > params_.t_f ? 1 : 0;
  append(std::move(visit));
  return violations;
}

SequenceSolution SequenceBuilder::solution() const {
  SequenceSolution sol;
  sol.visits = visits_;
  sol.total_dv = total_dv_;
  for (const auto& v : visits_) sol.total_sats += v.inspection.plane.n_sats;
  sol.end_time = visits_.empty() ? params_.t0 : visits_.back().inspection.t_end();
  sol.fitness = sequence_fitness(sol.total_sats, sol.total_dv, params_.dv_budget);
  sol.truncated_at = truncated_at_;
  return sol;
}

SequenceSolution evaluate_sequence(const std::vector<int>& genes, const PlaneCatalog& catalog,
                                   const SequenceParams& params) {
  SequenceBuilder builder(catalog, params);
  for (int g : genes)
    if (builder.add_adaptive(g) == SequenceBuilder::Outcome::Truncated) break;
  return builder.solution();
}

ExplicitResult evaluate_plan(const std::vector<VisitPlan>& plan, const PlaneCatalog& catalog,
                             const SequenceParams& params) {
  SequenceBuilder builder(catalog, params);
  ExplicitResult out;
  for (const auto& v : plan)
    out.violations += builder.add_explicit(v.plane_index, v.k_omega, v.k_i, v.dt);
  out.solution = builder.solution();
  return out;
}

std::vector<VisitPlan> implied_plan(const SequenceSolution& solution, const SequenceParams& params) {
  std::vector<VisitPlan> plan;
  plan.reserve(solution.visits.size());
  for (const auto& v : solution.visits) {
    double dt = v.dt_transfer;
    if (plan.empty() && !params.origin) dt = params.dt_min;  // unused by a free first leg
    plan.push_back({v.plane_index, v.inspection.k_omega, v.inspection.k_i, dt});
  }
  return plan;
}

}  // namespace plane_sweep
