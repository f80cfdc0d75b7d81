// Command-line front end: inspect-orbit, search, refine, verify, multi.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plane_sweep/errors.hpp"
#include "plane_sweep/pipeline.hpp"
#include "plane_sweep/refine.hpp"
#include "plane_sweep/scenario.hpp"
#include "plane_sweep/search.hpp"
#include "plane_sweep/solution_io.hpp"
#include "plane_sweep/verify.hpp"

namespace ps = plane_sweep;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kInfeasible = 2, kViolation = 3 };

constexpr double kDeg = 180.0 / ps::kPi;
constexpr int kFullGenerations = 6000;

struct Options {
  std::string scenario = "data/table1.scn";
  std::string out;
  std::string in;
  std::string schedules;
  std::string trace;
  std::uint64_t seed = 42;
  std::optional<int> threads;
  std::optional<int> gens;
  std::optional<int> pop;
  std::optional<double> dt_min;  // days
  std::optional<double> dt_max;  // days
  std::optional<double> dv_budget;
  bool full = false;
  // inspect-orbit
  std::string plane = "1-1";
  int start_sat = 0;
  double k_i = 0.0;
  double k_omega = 0.0;
  // refine
  bool freeze_offsets = false;
  // multi
  int craft = 1;
  std::vector<std::string> pairs;
};

class Stopwatch {
 public:
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ps::GaParams ga_params(const Options& o, const ps::Scenario& scenario) {
  ps::GaParams p;
  p.rng_seed = o.seed;
  p.threads = ps::resolve_threads(o.threads);
  if (o.full) p.max_gen = kFullGenerations;
  if (o.gens) p.max_gen = *o.gens;
  if (o.pop) p.pop_size = *o.pop;
  p.dt_min = o.dt_min ? *o.dt_min * ps::kSecondsPerDay : scenario.mission.dt_min;
  p.dt_max = o.dt_max ? *o.dt_max * ps::kSecondsPerDay : scenario.mission.dt_max;
  if (o.dv_budget) p.dv_budget_relaxed = *o.dv_budget;
  ps::validate(p);
  return p;
}

ps::DeParams de_params(const Options& o) {
  ps::DeParams p;
  p.rng_seed = o.seed;
  p.threads = ps::resolve_threads(o.threads);
  if (o.gens) p.max_gen = *o.gens;
  if (o.pop) p.pop_size = *o.pop;
  p.freeze_offsets = o.freeze_offsets;
  ps::validate(p);
  return p;
}

/// "C-P" plane selector.
int resolve_plane(const ps::Scenario& scenario, const std::string& selector) {
  const auto dash = selector.find('-');
  if (dash == std::string::npos) throw CLI::ValidationError("--plane", "expected C-P");
  int c = 0, p = 0;
  try {
    c = std::stoi(selector.substr(0, dash));
    p = std::stoi(selector.substr(dash + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--plane", "expected C-P");
  }
  const int index = scenario.find_plane(c, p);
  if (index < 0) throw CLI::ValidationError("--plane", "no plane " + selector + " in scenario");
  return index;
}

/// Status lines go to stderr when the solution itself may be on stdout.
void print_totals(std::FILE* to, const char* label, const ps::SequenceSolution& s) {
  std::fprintf(to, "%s: %d satellites on %zu planes, estimated dv %.4f km/s, ends day %.3f\n", label,
              s.total_sats, s.visits.size(), s.total_dv, s.end_time / ps::kSecondsPerDay);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  ps::write_file(path, text);
}

int cmd_inspect_orbit(const Options& o) {
  const auto scenario = ps::load_scenario(o.scenario);
  const int index = resolve_plane(scenario, o.plane);
  const ps::OrbitalPlane& plane = scenario.planes[static_cast<std::size_t>(index)];
  if (o.start_sat < 0 || o.start_sat >= plane.n_sats)
    throw CLI::ValidationError("--start-sat", "outside the plane's satellites");
  const auto orbit = ps::compute_inspection_orbit(plane, o.start_sat, scenario.mission.t0, o.k_i,
                                                  o.k_omega, scenario.mission.limits(),
                                                  scenario.constants);
  const auto& e = orbit.elements;
  std::printf("plane %d-%d, %d satellites, start satellite %d\n", plane.constellation_id,
              plane.plane_id, plane.n_sats, orbit.start_sat);
  std::printf("a %.6f km (delta %.3f km)\ne %.6f\ni %.6f deg\nraan %.6f deg\nargp %.6f deg\n"
              "mean anomaly %.6f deg\nepoch %.3f s\n",
              e.a, e.a - plane.a0, e.e, e.i * kDeg, e.raan * kDeg, e.argp * kDeg,
              e.mean_anomaly * kDeg, e.epoch);
  std::printf("raan offset %.6f rad, inclination offset %.6f rad\n", orbit.offsets.d_raan0,
              orbit.offsets.d_i);
  std::printf("max inclination offset %.6f rad, raan slack %.6f rad\n", orbit.d_i_max,
              orbit.raan_slack);
  std::printf("stay %.6f days\n", orbit.dt_stay / ps::kSecondsPerDay);
  if (!o.trace.empty()) {
    const auto records = ps::simulate_inspection_leg(orbit, scenario.mission.limits(),
                                                     scenario.constants);
    ps::write_file(o.trace,
                   ps::emit_trace(records, ps::sample_leg(orbit, 60, scenario.constants)));
  }
  return kOk;
}

int cmd_search(const Options& o) {
  const Stopwatch clock;
  const auto scenario = ps::load_scenario(o.scenario);
  const auto params = ga_params(o, scenario);
  std::fprintf(stderr, "search seed %llu, pop %d, generations %d\n",
              static_cast<unsigned long long>(params.rng_seed), params.pop_size, params.max_gen);
  const auto result = ps::ga_search(scenario, params);
  print_totals(stderr, "best", result.best);
  write_output(o.out, ps::serialize_solution(
                          {result.best, params.rng_seed, params.dv_budget_relaxed, {}, {}}));
  std::fprintf(stderr, "wall %.2f s\n", clock.seconds());
  return kOk;
}

int cmd_refine(const Options& o) {
  const Stopwatch clock;
  const auto scenario = ps::load_scenario(o.scenario);
  const auto input = ps::parse_solution(ps::read_file(o.in), scenario);
  const auto de = de_params(o);
  std::fprintf(stderr, "refine seed %llu, generations %d\n", static_cast<unsigned long long>(de.rng_seed),
              de.max_gen);
  ps::GaParams ga;
  ga.dt_min = o.dt_min ? *o.dt_min * ps::kSecondsPerDay : scenario.mission.dt_min;
  ga.dt_max = o.dt_max ? *o.dt_max * ps::kSecondsPerDay : scenario.mission.dt_max;
  ga.dv_budget_relaxed = input.dv_budget;
  ps::SequenceParams params = ps::search_sequence_params(scenario, ga);
  params.origin = input.origin;
  const ps::PlaneCatalog catalog(scenario.planes, scenario.mission.limits(), scenario.constants);

  print_totals(stderr, "input", input.solution);
  const auto refined = ps::de_refine(input.solution, catalog, params, de);
  print_totals(stderr, "refined", refined.best);
  const auto realized = ps::realize_solution(refined.best, catalog, params, scenario.mission.dv_max);
  print_totals(stderr, "realized", realized.solution);
  std::fprintf(stderr, "actual dv %.4f km/s\n", realized.dv_actual);
  write_output(o.out, ps::serialize_solution(
                          {realized.solution, de.rng_seed, input.dv_budget, input.origin, {}}));
  if (!o.schedules.empty()) ps::write_file(o.schedules, ps::serialize_schedules(realized.schedules));
  std::fprintf(stderr, "wall %.2f s\n", clock.seconds());
  return kOk;
}

int cmd_verify(const Options& o) {
  const Stopwatch clock;
  const auto scenario = ps::load_scenario(o.scenario);
  auto file = ps::parse_solution(ps::read_file(o.in), scenario);
  const auto schedules = ps::parse_schedules(ps::read_file(o.schedules));
  const auto report = ps::verify_solution(file.solution, schedules, scenario, file.origin);
  print_totals(stdout, "claimed", file.solution);
  std::printf("verified: %d passed, %d failed, actual dv %.4f km/s, ends day %.3f\n",
              report.satellites_passed, report.satellites_failed, report.dv_actual,
              report.end_time / ps::kSecondsPerDay);
  for (const auto& v : report.violations) std::printf("violation: %s\n", v.c_str());
  if (!o.trace.empty()) {
    std::vector<ps::FlybyRecord> records;
    std::vector<ps::TraceRow> samples;
    for (std::size_t j = 0; j < report.legs.size(); ++j) {
      const auto& leg = report.legs[j];
      records.insert(records.end(), leg.flybys.begin(), leg.flybys.end());
      const auto s = ps::sample_leg(file.solution.visits[j].inspection, 60, scenario.constants);
      samples.insert(samples.end(), s.begin(), s.end());
    }
    ps::write_file(o.trace, ps::emit_trace(records, samples));
  }
  if (!o.out.empty()) {
    file.verification = report;
    ps::write_file(o.out, ps::serialize_solution(file));
  }
  std::printf("wall %.2f s\n", clock.seconds());
  return report.ok() ? kOk : kViolation;
}

std::vector<std::pair<int, int>> parse_pairs(const std::vector<std::string>& specs) {
  std::vector<std::pair<int, int>> out;
  for (const auto& s : specs) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--pairs", "expected FIRST:SECOND");
    try {
      out.emplace_back(std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1)));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--pairs", "expected FIRST:SECOND");
    }
  }
  return out;
}

int cmd_multi(const Options& o) {
  const Stopwatch clock;
  const auto scenario = ps::load_scenario(o.scenario);
  const auto params = ga_params(o, scenario);
  std::fprintf(stderr, "multi seed %llu, %d craft\n", static_cast<unsigned long long>(params.rng_seed),
              o.craft);
  const auto pairs = parse_pairs(o.pairs);
  const auto craft = ps::multi_spacecraft_greedy(scenario, o.craft, pairs, params);
  int total = 0;
  for (std::size_t k = 0; k < craft.size(); ++k) {
    const std::string label = "craft " + std::to_string(k);
    print_totals(stderr, label.c_str(), craft[k]);
    total += craft[k].total_sats;
    if (!o.out.empty()) {
      std::optional<ps::MeanElements> origin;
      for (const auto& [first, second] : pairs)
        if (second == static_cast<int>(k) && !craft[static_cast<std::size_t>(first)].visits.empty())
          origin = craft[static_cast<std::size_t>(first)].visits.front().inspection.elements;
      ps::write_file(o.out + "." + std::to_string(k) + ".sol",
                     ps::serialize_solution({craft[k], params.rng_seed + k,
                                             params.dv_budget_relaxed, origin, {}}));
    }
  }
  std::fprintf(stderr, "total %d satellites\nwall %.2f s\n", total, clock.seconds());
  return kOk;
}

void add_search_flags(CLI::App& cmd, Options& o) {
  cmd.add_option("--seed", o.seed, "RNG seed");
  cmd.add_option("--threads", o.threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  cmd.add_option("--gens", o.gens, "Generations")->check(CLI::NonNegativeNumber);
  cmd.add_option("--pop", o.pop, "Population size")->check(CLI::PositiveNumber);
  cmd.add_option("--dt-min", o.dt_min, "Shortest transfer, days")->check(CLI::NonNegativeNumber);
  cmd.add_option("--dt-max", o.dt_max, "Longest transfer, days")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inspection tours of constellation orbital planes"};
  app.require_subcommand(1);
  Options o;

  auto* inspect = app.add_subcommand("inspect-orbit", "Design one plane's inspection orbit");
  inspect->add_option("--scenario", o.scenario, "Scenario file");
  inspect->add_option("--plane", o.plane, "Plane as CONSTELLATION-PLANE");
  inspect->add_option("--start-sat", o.start_sat, "Satellite inspected first");
  inspect->add_option("--k-i", o.k_i, "Inclination offset coefficient")->check(CLI::Range(-1.0, 1.0));
  inspect->add_option("--k-omega", o.k_omega, "RAAN offset coefficient")->check(CLI::Range(-1.0, 1.0));
  inspect->add_option("--trace", o.trace, "Write the leg's relative-motion trace");

  auto* search = app.add_subcommand("search", "GA over plane sequences");
  search->add_option("--scenario", o.scenario, "Scenario file");
  search->add_option("--out", o.out, "Solution file (default stdout)");
  add_search_flags(*search, o);
  search->add_option("--dv-budget", o.dv_budget, "Relaxed search budget, km/s")->check(CLI::PositiveNumber);
  search->add_flag("--full", o.full, "Run 6000 generations");

  auto* refine = app.add_subcommand("refine", "DE refinement and impulse realization");
  refine->add_option("--scenario", o.scenario, "Scenario file");
  refine->add_option("--in", o.in, "Solution to refine")->required();
  refine->add_option("--out", o.out, "Refined solution file (default stdout)");
  refine->add_option("--schedules", o.schedules, "Impulse schedule file");
  add_search_flags(*refine, o);
  refine->add_flag("--freeze-offsets", o.freeze_offsets, "Keep k_omega and k_i fixed");

  auto* verify = app.add_subcommand("verify", "Fly a solution and audit its flybys");
  verify->add_option("--scenario", o.scenario, "Scenario file");
  verify->add_option("--in", o.in, "Solution file")->required();
  verify->add_option("--schedules", o.schedules, "Impulse schedule file")->required();
  verify->add_option("--out", o.out, "Solution with the verification block");
  verify->add_option("--trace", o.trace, "Relative-motion trace of every leg");

  auto* multi = app.add_subcommand("multi", "Greedy multi-craft search with a growing tabu list");
  multi->add_option("--scenario", o.scenario, "Scenario file");
  multi->add_option("--out", o.out, "Output prefix, one PREFIX.K.sol per craft");
  add_search_flags(*multi, o);
  multi->add_option("--dv-budget", o.dv_budget, "Relaxed search budget, km/s")->check(CLI::PositiveNumber);
  multi->add_flag("--full", o.full, "Run 6000 generations");
  multi->add_option("--craft", o.craft, "Number of craft")->check(CLI::PositiveNumber);
  multi->add_option("--pairs", o.pairs, "FIRST:SECOND craft pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kUsage;
  }

  try {
    if (*inspect) return cmd_inspect_orbit(o);
    if (*search) return cmd_search(o);
    if (*refine) return cmd_refine(o);
    if (*verify) return cmd_verify(o);
    if (*multi) return cmd_multi(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ps::InfeasiblePlane& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const ps::TargetUnreachable& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const ps::ScheduleMismatch& e) {
    std::cerr << "violation: " << e.what() << '\n';
    return kViolation;
  } catch (const ps::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
