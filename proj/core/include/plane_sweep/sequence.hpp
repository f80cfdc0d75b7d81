#pragma once

#include <optional>
#include <vector>

#include "plane_sweep/inspection.hpp"
#include "plane_sweep/scenario.hpp"

namespace plane_sweep {

struct PlaneVisit {
  int plane_index = 0;  // into Scenario::planes
  int start_sat = 0;
  double dt_transfer = 0.0;  // s, selected duration; the leg then waits for start_sat's node
  double t_arrive = 0.0;     // s, first flyby
  double dv = 0.0;           // km/s, estimated
  InspectionOrbit inspection;

  friend bool operator==(const PlaneVisit&, const PlaneVisit&) = default;
};

struct SequenceSolution {
  std::vector<PlaneVisit> visits;
  double total_dv = 0.0;  // km/s
  int total_sats = 0;
  double end_time = 0.0;  // s
  double fitness = 0.0;
  std::optional<int> truncated_at;  // visit index that broke the budget or horizon

  friend bool operator==(const SequenceSolution&, const SequenceSolution&) = default;
};

struct SequenceParams {
  double dv_budget = 3.75;  // km/s, truncation and fitness normalization
  double t0 = 0.0;
  double t_f = 90.0 * kSecondsPerDay;
  double dt_min = 0.1 * kSecondsPerDay;
  double dt_max = 4.0 * kSecondsPerDay;
  InspectionLimits limits;
  Constants constants = kEarth;
  /// Spacecraft state before the first leg. Without it the first leg starts at t0 for free.
  std::optional<MeanElements> origin;
  /// Off: the search rule keeps k_i = 0 (ablation).
  bool adaptive_inclination = true;
};

[[nodiscard]] SequenceParams sequence_params(const Scenario& scenario, double dv_budget);

/// k_i that brings the plane's inspection inclination closest to `prev_incl`.
[[nodiscard]] double adaptive_k_i(const OrbitalPlane& plane, double prev_incl, double d_i_max);

/// Per-plane designs at k_i = k_omega = 0, shared by every evaluation of a scenario.
class PlaneCatalog {
 public:
  PlaneCatalog(const std::vector<OrbitalPlane>& planes, const InspectionLimits& limits,
               const Constants& c);

  [[nodiscard]] const OrbitalPlane& plane(int index) const { return planes_[static_cast<std::size_t>(index)]; }
  [[nodiscard]] int size() const { return static_cast<int>(planes_.size()); }
  /// Empty for planes whose inspection orbit is infeasible.
  [[nodiscard]] const std::optional<InspectionShape>& base(int index) const {
    return base_[static_cast<std::size_t>(index)];
  }
  [[nodiscard]] const InspectionLimits& limits() const { return limits_; }
  [[nodiscard]] const Constants& constants() const { return constants_; }

 private:
  std::vector<OrbitalPlane> planes_;
  std::vector<std::optional<InspectionShape>> base_;
  InspectionLimits limits_;
  Constants constants_;
};

/// Incremental sequence evaluation. Visits are appended one plane at a time.
class SequenceBuilder {
 public:
  enum class Outcome { Added, Skipped, Truncated };

  SequenceBuilder(const PlaneCatalog& catalog, const SequenceParams& params);
  /// Resumes from visits already evaluated with the same catalog and params.
  SequenceBuilder(const PlaneCatalog& catalog, const SequenceParams& params,
                  std::vector<PlaneVisit> visits);

  /// Search rule: k_omega = 0, adaptive k_i, RAAN-aligned transfer time, budget and horizon
  /// truncation. Duplicate and infeasible planes are skipped.
  Outcome add_adaptive(int plane_index);
  /// Fixed offsets and transfer duration, no truncation. Returns the number of constraint
  /// violations (infeasible plane, horizon) incurred.
  int add_explicit(int plane_index, double k_omega, double k_i, double dt);

  [[nodiscard]] bool truncated() const { return truncated_at_.has_value(); }
  [[nodiscard]] const std::vector<PlaneVisit>& visits() const { return visits_; }
  [[nodiscard]] double total_dv() const { return total_dv_; }
  [[nodiscard]] SequenceSolution solution() const;

 private:
  struct Departure {
    MeanElements state;  // at `time`
    double time = 0.0;
  };

  [[nodiscard]] std::optional<Departure> departure() const;
  [[nodiscard]] PlaneVisit best_start(int plane_index, const InspectionShape& shape,
                                      double t_ready, const std::optional<Departure>& dep) const;
  void append(PlaneVisit visit);

  const PlaneCatalog* catalog_;
  SequenceParams params_;
  std::vector<PlaneVisit> visits_;
  std::vector<bool> used_;
  double total_dv_ = 0.0;
  std::optional<int> truncated_at_;
};

[[nodiscard]] double sequence_fitness(int total_sats, double total_dv, double dv_budget);

/// Fitness and solution of a plane-index chromosome under the search rule.
[[nodiscard]] SequenceSolution evaluate_sequence(const std::vector<int>& genes,
                                                 const PlaneCatalog& catalog,
                                                 const SequenceParams& params);

/// One visit of an explicitly parameterized sequence.
struct VisitPlan {
  int plane_index = 0;
  double k_omega = 0.0;
  double k_i = 0.0;
  double dt = 0.0;  // s, transfer duration before the leg (ignored for a free first leg)
};

struct ExplicitResult {
  SequenceSolution solution;
  int violations = 0;
};

[[nodiscard]] ExplicitResult evaluate_plan(const std::vector<VisitPlan>& plan,
                                           const PlaneCatalog& catalog,
                                           const SequenceParams& params);

/// The parameters a solution implicitly used, in visit order.
[[nodiscard]] std::vector<VisitPlan> implied_plan(const SequenceSolution& solution,
                                                  const SequenceParams& params);

}  // namespace plane_sweep
