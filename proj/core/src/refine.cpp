#include "plane_sweep/refine.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "plane_sweep/search.hpp"

namespace plane_sweep {

namespace {

constexpr double kPenalty = 10.0;  // km/s per violation
constexpr double kKeySpread = 0.3;   // in units of the key spacing
constexpr double kGeneSpread = 0.05;

double to_unit(double value, double lo, double hi) {
  if (!(hi > lo)) return 0.5;
  return std::clamp((value - lo) / (hi - lo), 0.0, 1.0);
}

double from_unit(double x, double lo, double hi) { return lo + x * (hi - lo); }

}  // namespace

void validate(const DeParams& p) {
  if (p.pop_size != 0 && p.pop_size < 4) throw std::invalid_argument("DE needs at least 4 members");
  if (p.max_gen < 0) throw std::invalid_argument("max_gen must be non-negative");
  if (!(p.weight > 0.0 && p.weight < 2.0)) throw std::invalid_argument("F must be in (0, 2)");
  if (!(p.crossover >= 0.0 && p.crossover <= 1.0))
    throw std::invalid_argument("CR must be in [0, 1]");
}

RefineSpace refine_space(const std::vector<int>& planes, const PlaneCatalog& catalog,
                         const SequenceParams& params) {
  RefineSpace space;
  space.planes = planes;
  space.dt_min = params.dt_min;
  space.dt_max = params.dt_max;
  for (int p : planes)
    space.k_i.push_back(feasible_k_i_range(catalog.plane(p), catalog.limits(), catalog.constants()));
  return space;
}

Decoded decode(std::span<const double> x, const RefineSpace& space) {
  const std::size_t m = space.size();
  if (x.size() != 4 * m) throw std::invalid_argument("refine vector must have 4 genes per plane");
  Decoded d;
  d.order.resize(m);
  std::iota(d.order.begin(), d.order.end(), 0);
  std::stable_sort(d.order.begin(), d.order.end(), [&](int a, int b) {
    return x[static_cast<std::size_t>(a)] < x[static_cast<std::size_t>(b)];
  });
  d.k_omega.resize(m);
  d.k_i.resize(m);
  d.dt.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    d.k_omega[j] = from_unit(x[m + j], -1.0, 1.0);
    d.k_i[j] = from_unit(x[2 * m + j], space.k_i[j].lo, space.k_i[j].hi);
    d.dt[j] = from_unit(x[3 * m + j], space.dt_min, space.dt_max);
  }
  return d;
}

std::vector<VisitPlan> decoded_plan(const Decoded& d, const RefineSpace& space) {
  std::vector<VisitPlan> plan;
  plan.reserve(d.order.size());
  for (int gene : d.order) {
    const auto g = static_cast<std::size_t>(gene);
    plan.push_back({space.planes[g], d.k_omega[g], d.k_i[g], d.dt[g]});
  }
  return plan;
}

std::vector<double> encode(const std::vector<VisitPlan>& plan, const RefineSpace& space) {
  const std::size_t m = space.size();
  if (plan.size() != m) throw std::invalid_argument("plan and refine space differ in length");
  std::vector<double> x(4 * m);
  for (std::size_t j = 0; j < m; ++j) {
    if (plan[j].plane_index != space.planes[j])
      throw std::invalid_argument("plan must visit the refine space's planes in order");
    x[j] = (static_cast<double>(j) + 0.5) / static_cast<double>(m);
    x[m + j] = to_unit(plan[j].k_omega, -1.0, 1.0);
    x[2 * m + j] = to_unit(plan[j].k_i, space.k_i[j].lo, space.k_i[j].hi);
    x[3 * m + j] = to_unit(plan[j].dt, space.dt_min, space.dt_max);
  }
  return x;
}

double de_objective(std::span<const double> x, const RefineSpace& space,
                    const PlaneCatalog& catalog, const SequenceParams& params) {
  const auto r = evaluate_plan(decoded_plan(decode(x, space), space), catalog, params);
  return r.solution.total_dv + kPenalty * r.violations;
}

RefineResult de_refine(const SequenceSolution& seed, const PlaneCatalog& catalog,
                       const SequenceParams& params, const DeParams& de) {
  validate(de);
  RefineResult result;
  result.best = seed;
  result.plan = implied_plan(seed, params);
  result.objective = seed.total_dv;
  const std::size_t m = seed.visits.size();
  if (m < 2) {
    result.best_history.assign(static_cast<std::size_t>(de.max_gen) + 1, result.objective);
    return result;
  }

  std::vector<int> planes;
  for (const auto& v : seed.visits) planes.push_back(v.plane_index);
  const RefineSpace space = refine_space(planes, catalog, params);
  const std::vector<double> incumbent = encode(result.plan, space);
  const std::size_t dim = 4 * m;
  const std::size_t pop =
      de.pop_size > 0 ? static_cast<std::size_t>(de.pop_size) : std::min<std::size_t>(10 * dim, 200);
  auto freeze = [&](std::vector<double>& x) {
    if (de.freeze_offsets)
      std::copy(incumbent.begin() + static_cast<std::ptrdiff_t>(m),
                incumbent.begin() + static_cast<std::ptrdiff_t>(3 * m),
                x.begin() + static_cast<std::ptrdiff_t>(m));
  };

  // Draw order: initial members, then per generation donors, crossover mask, j_rand.
  std::mt19937_64 rng(de.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_member(0, pop - 1);
  std::uniform_int_distribution<std::size_t> pick_dim(0, dim - 1);

  std::vector<std::vector<double>> members(pop, std::vector<double>(dim));
  members[0] = incumbent;
  // Members start around the incumbent. Order keys get a spread below their spacing, so
  // most perturbations swap neighbors only.
  std::normal_distribution<double> key_jitter(0.0, kKeySpread / static_cast<double>(m));
  std::normal_distribution<double> gene_jitter(0.0, kGeneSpread);
  for (std::size_t k = 1; k < pop; ++k) {
    auto& x = members[k];
    for (std::size_t j = 0; j < dim; ++j)
      x[j] = std::clamp(incumbent[j] + (j < m ? key_jitter(rng) : gene_jitter(rng)), 0.0, 1.0);
    freeze(x);
  }
  std::vector<double> cost(pop);
  auto evaluate = [&](const std::vector<std::vector<double>>& xs, std::vector<double>& out) {
    parallel_for(static_cast<int>(xs.size()), de.threads, [&](int k) {
      const auto idx = static_cast<std::size_t>(k);
      out[idx] = de_objective(xs[idx], space, catalog, params);
    });
  };
  evaluate(members, cost);
  auto best_index = [&] {
    return static_cast<std::size_t>(std::min_element(cost.begin(), cost.end()) - cost.begin());
  };
  result.best_history.push_back(cost[best_index()]);

  std::vector<std::vector<double>> trials(pop, std::vector<double>(dim));
  std::vector<double> trial_cost(pop);
  for (int gen = 0; gen < de.max_gen; ++gen) {
    for (std::size_t k = 0; k < pop; ++k) {
      std::size_t r1 = 0, r2 = 0, r3 = 0;
      do r1 = pick_member(rng); while (r1 == k);
      do r2 = pick_member(rng); while (r2 == k || r2 == r1);
      do r3 = pick_member(rng); while (r3 == k || r3 == r1 || r3 == r2);
      const std::size_t j_rand = pick_dim(rng);
      auto& t = trials[k];
      for (std::size_t j = 0; j < dim; ++j) {
        const bool cross = unit(rng) < de.crossover || j == j_rand;
        t[j] = cross ? std::clamp(members[r1][j] + de.weight * (members[r2][j] - members[r3][j]),
                                  0.0, 1.0)
                     : members[k][j];
      }
      freeze(t);
    }
    evaluate(trials, trial_cost);
    for (std::size_t k = 0; k < pop; ++k) {
      if (trial_cost[k] <= cost[k]) {
        std::swap(members[k], trials[k]);
        cost[k] = trial_cost[k];
      }
    }
    result.best_history.push_back(cost[best_index()]);
  }

  const std::size_t best = best_index();
  const auto plan = decoded_plan(decode(members[best], space), space);
  auto r = evaluate_plan(plan, catalog, params);
  if (r.violations == 0 && r.solution.total_dv < seed.total_dv) {
    result.best = std::move(r.solution);
    result.plan = plan;
    result.objective = cost[best];
  }
  return result;
}

}  // namespace plane_sweep
