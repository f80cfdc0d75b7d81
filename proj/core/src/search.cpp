#include "plane_sweep/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>

namespace plane_sweep {

namespace {

struct Evaluation {
  SequenceSolution solution;
  int live_genes = 0;  // genes read before evaluation stopped, the truncating one included
};

/// Memo of sequence evaluation keyed by chromosome prefix. Evaluation is a pure function
/// of the prefix, so hits never change results.
class PrefixCache {
 public:
  PrefixCache(const PlaneCatalog& catalog, const SequenceParams& params)
      : catalog_(catalog), params_(params) {}

  Evaluation evaluate(const std::vector<int>& genes) {
    std::vector<PlaneVisit> visits;
    int node = kRoot;
    std::size_t pos = 0;
    std::uint64_t epoch = 0;
    bool truncated = false;
    {
      std::lock_guard lock(mutex_);
      epoch = epoch_;
      for (; pos < genes.size(); ++pos) {
        const auto it = children_.find(key(node, genes[pos]));
        if (it == children_.end()) break;
        node = it->second;
        truncated = nodes_[static_cast<std::size_t>(node)].outcome ==
                    SequenceBuilder::Outcome::Truncated;
        if (truncated) break;
      }
      for (int n = node; n != kRoot; n = nodes_[static_cast<std::size_t>(n)].parent)
        if (const auto& v = nodes_[static_cast<std::size_t>(n)].visit) visits.push_back(*v);
    }
    std::reverse(visits.begin(), visits.end());
    SequenceBuilder builder(catalog_, params_, std::move(visits));

    if (truncated) {
      builder.add_adaptive(genes[pos]);  // re-derives the truncation marker
      return {builder.solution(), static_cast<int>(pos) + 1};
    }

    std::vector<Node> fresh;
    const int first_parent = node;
    for (; pos < genes.size(); ++pos) {
      const std::size_t before = builder.visits().size();
      const auto outcome = builder.add_adaptive(genes[pos]);
      Node n{kRoot, genes[pos], outcome, std::nullopt};
      if (outcome == SequenceBuilder::Outcome::Added) n.visit = builder.visits()[before];
      fresh.push_back(std::move(n));
      if (outcome == SequenceBuilder::Outcome::Truncated) {
        ++pos;
        break;
      }
    }
    insert(first_parent, std::move(fresh), epoch);
    return {builder.solution(), static_cast<int>(pos)};
  }

 private:
  static constexpr int kRoot = -1;
  static constexpr std::size_t kMaxNodes = 400000;

  struct Node {
    int parent;
    int gene;
    SequenceBuilder::Outcome outcome;
    std::optional<PlaneVisit> visit;
  };

  static std::uint64_t key(int parent, int gene) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(parent + 1)) << 32) |
           static_cast<std::uint32_t>(gene);
  }

  void insert(int parent, std::vector<Node> fresh, std::uint64_t epoch) {
    std::lock_guard lock(mutex_);
    if (epoch != epoch_) return;  // cache was reset while evaluating
    if (nodes_.size() + fresh.size() > kMaxNodes) {
      nodes_.clear();
      children_.clear();
      ++epoch_;
      return;
    }
    for (auto& n : fresh) {
      const auto k = key(parent, n.gene);
      if (const auto it = children_.find(k); it != children_.end()) {
        parent = it->second;  // another worker got here first
        continue;
      }
      n.parent = parent;
      nodes_.push_back(std::move(n));
      parent = static_cast<int>(nodes_.size()) - 1;
      children_.emplace(k, parent);
    }
  }

  const PlaneCatalog& catalog_;
  const SequenceParams& params_;
  std::mutex mutex_;
  std::vector<Node> nodes_;
  std::unordered_map<std::uint64_t, int> children_;
  std::uint64_t epoch_ = 0;
};

using Rng = std::mt19937_64;

/// Mutation proposals near the preceding visit: planes ranked by a rough transfer cost
/// (best RAAN gap over the transfer window, inclination beyond the offset band, SMA gap).
class NeighborProposer {
 public:
  static constexpr std::size_t kPool = 6;

  NeighborProposer(const PlaneCatalog& catalog, const std::vector<int>& candidates,
                   const SequenceParams& sp)
      : catalog_(catalog), sp_(sp) {
    for (int p : candidates) {
      const auto& base = catalog.base(p);
      if (!base) continue;
      const OrbitalPlane& plane = catalog.plane(p);
      const MeanElements orbit{base->a, base->e, plane.i0, 0.0, 0.0, 0.0, 0.0};
      entries_.push_back({p, secular_rates(orbit, catalog.constants()).raan, base->offsets.d_raan0,
                          base->d_i_max, base->a});
    }
  }

  [[nodiscard]] bool empty() const { return entries_.empty(); }

  int propose(const MeanElements& dep_at_end, Rng& rng) const {
    const Constants& c = catalog_.constants();
    const double dep_rate = secular_rates(dep_at_end, c).raan;
    const double v = circular_speed(dep_at_end.a, c);
    const double t_min = dep_at_end.epoch + sp_.dt_min;
    const double dep_raan = dep_at_end.raan + dep_rate * sp_.dt_min;
    std::vector<std::pair<double, int>> ranked;
    ranked.reserve(entries_.size());
    for (const auto& e : entries_) {
      const OrbitalPlane& plane = catalog_.plane(e.index);
      const double gap1 = angle_diff(plane_raan(plane, t_min, c) + e.d_raan0, dep_raan);
      const double gap2 = gap1 + (e.raan_rate - dep_rate) * (sp_.dt_max - sp_.dt_min);
      const double gap = (gap1 > 0.0) != (gap2 > 0.0) ? 0.0 : std::min(std::abs(gap1), std::abs(gap2));
      const double d_i = std::max(0.0, std::abs(plane.i0 - dep_at_end.i) - e.d_i_max);
      const double cost = v * std::hypot(gap * std::sin(plane.i0), d_i) +
                          0.5 * v * std::abs(e.a - dep_at_end.a) / e.a;
      ranked.emplace_back(cost, e.index);
    }
    const std::size_t pool = std::min(kPool, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(pool),
                      ranked.end());
    std::uniform_int_distribution<std::size_t> pick(0, pool - 1);
    return ranked[pick(rng)].second;
  }

 private:
  struct Entry {
    int index;
    double raan_rate;
    double d_raan0;
    double d_i_max;
    double a;
  };
  const PlaneCatalog& catalog_;
  const SequenceParams& sp_;
  std::vector<Entry> entries_;
};

/// Visit whose gene sits last before `locus`, or nullptr.
const PlaneVisit* visit_before(const std::vector<int>& genes, const SequenceSolution& sol,
                               int locus) {
  const PlaneVisit* found = nullptr;
  std::size_t v = 0;
  for (int g = 0; g < locus && v < sol.visits.size(); ++g) {
    if (genes[static_cast<std::size_t>(g)] == sol.visits[v].plane_index) found = &sol.visits[v++];
  }
  return found;
}

int roulette(const std::vector<double>& weights, double total, Rng& rng) {
  std::uniform_real_distribution<double> pick(0.0, total);
  double r = pick(rng);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    r -= weights[k];
    if (r < 0.0) return static_cast<int>(k);
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace

void validate(const GaParams& p) {
  if (p.pop_size < 2) throw std::invalid_argument("pop_size must be at least 2");
  if (p.max_gen < 0) throw std::invalid_argument("max_gen must be non-negative");
  if (p.chromosome_len < 1) throw std::invalid_argument("chromosome_len must be positive");
  if (!(p.crossover_prob >= 0.0 && p.crossover_prob <= 1.0))
    throw std::invalid_argument("crossover_prob must be in [0, 1]");
  if (!(p.mutation_prob >= 0.0 && p.mutation_prob <= 1.0))
    throw std::invalid_argument("mutation_prob must be in [0, 1]");
  if (!(p.dv_budget_relaxed > 0.0)) throw std::invalid_argument("dv budget must be positive");
  if (!(p.dt_min >= 0.0 && p.dt_min < p.dt_max))
    throw std::invalid_argument("need 0 <= dt_min < dt_max");
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int k = 0; k < n; ++k) body(k);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (int k = w; k < n; k += threads) body(k);
    });
  for (auto& t : pool) t.join();
}

int resolve_threads(std::optional<int> requested) {
  if (requested) return *requested;
  if (const char* env = std::getenv("PLANE_SWEEP_THREADS")) {
    try {
      return std::max(0, std::stoi(env));
    } catch (const std::exception&) {
      return 1;
    }
  }
  return 1;
}

SequenceParams search_sequence_params(const Scenario& scenario, const GaParams& params) {
  SequenceParams sp = sequence_params(scenario, params.dv_budget_relaxed);
  sp.dt_min = params.dt_min;
  sp.dt_max = params.dt_max;
  return sp;
}

GaResult ga_search(const Scenario& scenario, const GaParams& params, const std::vector<int>& tabu,
                   const std::optional<MeanElements>& origin) {
  validate(params);
  std::vector<bool> banned(scenario.planes.size(), false);
  for (int t : tabu) banned.at(static_cast<std::size_t>(t)) = true;
  std::vector<int> candidates;
  for (std::size_t k = 0; k < scenario.planes.size(); ++k)
    if (!banned[k]) candidates.push_back(static_cast<int>(k));
  if (candidates.empty()) throw std::invalid_argument("no candidate planes left");

  const PlaneCatalog catalog(scenario.planes, scenario.mission.limits(), scenario.constants);
  SequenceParams sp = search_sequence_params(scenario, params);
  sp.origin = origin;
  PrefixCache cache(catalog, sp);
  const NeighborProposer neighbors(catalog, candidates, sp);

  // Draw order: initial genes, then per generation selection, crossover, mutation.
  Rng rng(params.rng_seed);
  std::uniform_int_distribution<std::size_t> pick_candidate(0, candidates.size() - 1);
  std::uniform_int_distribution<int> pick_locus(0, params.chromosome_len - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto pop = static_cast<std::size_t>(params.pop_size);
  const auto len = static_cast<std::size_t>(params.chromosome_len);

  std::vector<std::vector<int>> population(pop, std::vector<int>(len));
  for (auto& genes : population)
    for (auto& g : genes) g = candidates[pick_candidate(rng)];

  std::vector<SequenceSolution> solutions(pop);
  std::vector<int> live(pop, params.chromosome_len);
  auto evaluate_all = [&] {
    parallel_for(params.pop_size, params.threads, [&](int k) {
      const auto idx = static_cast<std::size_t>(k);
      auto e = cache.evaluate(population[idx]);
      solutions[idx] = std::move(e.solution);
      live[idx] = e.live_genes;
    });
  };

  GaResult result;
  auto track_best = [&] {
    std::size_t best = 0;
    for (std::size_t k = 1; k < pop; ++k)
      if (solutions[k].fitness > solutions[best].fitness) best = k;  // lowest index wins ties
    if (result.best_genes.empty() || solutions[best].fitness > result.best.fitness) {
      result.best = solutions[best];
      result.best_genes = population[best];
    }
    result.best_fitness_history.push_back(result.best.fitness);
  };

  evaluate_all();
  track_best();
  for (int gen = 0; gen < params.max_gen; ++gen) {
    // Roulette weights relative to the worst individual keep selection pressure when all
    // fitness values sit close together.
    double worst = solutions[0].fitness;
    for (const auto& s : solutions) worst = std::min(worst, s.fitness);
    std::vector<double> weights(pop);
    double total = 0.0;
    for (std::size_t k = 0; k < pop; ++k) {
      weights[k] = solutions[k].fitness - worst + 1.0;
      total += weights[k];
    }

    std::vector<std::vector<int>> next;
    next.reserve(pop);
    next.push_back(result.best_genes);  // elitism
    while (next.size() < pop) {
      const auto ia = static_cast<std::size_t>(roulette(weights, total, rng));
      const auto ib = static_cast<std::size_t>(roulette(weights, total, rng));
      auto a = population[ia];
      auto b = population[ib];
      if (unit(rng) < params.crossover_prob) {
        auto lo = static_cast<std::size_t>(pick_locus(rng));
        auto hi = static_cast<std::size_t>(pick_locus(rng));
        if (lo > hi) std::swap(lo, hi);
        std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(lo),
                         a.begin() + static_cast<std::ptrdiff_t>(hi) + 1,
                         b.begin() + static_cast<std::ptrdiff_t>(lo));
      }
      // Genes past the truncation point do not affect fitness, so mutation targets the
      // parent's live prefix, half the time the gene that truncated it. Half of the
      // replacements come from the preceding visit's cheapest neighbors.
      for (auto [child, parent] : {std::pair{&a, ia}, std::pair{&b, ib}}) {
        if (unit(rng) >= params.mutation_prob) continue;
        std::uniform_int_distribution<int> pick_live(0, std::max(1, live[parent]) - 1);
        int locus = pick_live(rng);
        if (unit(rng) < 0.5) locus = std::max(1, live[parent]) - 1;  // the gene that truncated
        const bool local = unit(rng) < 0.75;
        const PlaneVisit* prev =
            local ? visit_before(population[parent], solutions[parent], locus) : nullptr;
        int replacement = 0;
        if (prev && !neighbors.empty()) {
          const InspectionOrbit& o = prev->inspection;
          replacement = neighbors.propose(propagate_mean(o.elements, o.dt_stay, sp.constants), rng);
        } else {
          replacement = candidates[pick_candidate(rng)];
        }
        auto& genes = *child;
        const auto at = genes.begin() + locus;
        const double move = unit(rng);
        if (move < 1.0 / 3.0) {
          *at = replacement;
        } else if (move < 2.0 / 3.0) {
          std::rotate(at, genes.end() - 1, genes.end());  // insert, dropping the last gene
          *at = replacement;
        } else {
          std::rotate(at, at + 1, genes.end());  // delete, refilling the tail
          genes.back() = replacement;
        }
      }
      next.push_back(std::move(a));
      if (next.size() < pop) next.push_back(std::move(b));
    }
    population = std::move(next);
    evaluate_all();
    track_best();
  }
  return result;
}

std::vector<SequenceSolution> multi_spacecraft_greedy(
    const Scenario& scenario, int n_craft, const std::vector<std::pair<int, int>>& pairing,
    const GaParams& params) {
  if (n_craft < 1) throw std::invalid_argument("need at least one craft");
  std::vector<int> partner_of(static_cast<std::size_t>(n_craft), -1);
  for (const auto& [first, second] : pairing) {
    if (first < 0 || second < 0 || first >= n_craft || second >= n_craft || first >= second)
      throw std::invalid_argument("pairs must name craft (first, second) with first < second");
    if (partner_of[static_cast<std::size_t>(second)] != -1)
      throw std::invalid_argument("craft paired twice");
    partner_of[static_cast<std::size_t>(second)] = first;
  }

  std::vector<SequenceSolution> out;
  std::vector<int> tabu;
  for (int craft = 0; craft < n_craft; ++craft) {
    GaParams p = params;
    p.rng_seed = params.rng_seed + static_cast<std::uint64_t>(craft);
    std::optional<MeanElements> origin;
    if (const int first = partner_of[static_cast<std::size_t>(craft)]; first >= 0) {
      const auto& lead = out[static_cast<std::size_t>(first)];
      if (!lead.visits.empty()) origin = lead.visits.front().inspection.elements;
    }
    if (tabu.size() >= scenario.planes.size()) {
      out.emplace_back();
      continue;
    }
    GaResult r = ga_search(scenario, p, tabu, origin);
    for (const auto& v : r.best.visits) tabu.push_back(v.plane_index);
    out.push_back(std::move(r.best));
  }
  return out;
}

}  // namespace plane_sweep
