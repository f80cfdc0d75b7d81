#include "plane_sweep/solution_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "plane_sweep/errors.hpp"
#include "text_util.hpp"

namespace plane_sweep {

namespace {

constexpr std::string_view kSolutionMagic = "plane_sweep solution 1";
constexpr std::string_view kScheduleMagic = "plane_sweep schedules 1";
constexpr double kDeg = 180.0 / kPi;

using textio::format_number;

void put(std::string& out, std::string_view key, double v) {
  out.append(key);
  out += ' ';
  out += format_number(v);
  out += '\n';
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : lines_(textio::lines(text)) {}

  /// Next non-blank, non-comment line split on whitespace; empty at end of input.
  std::vector<std::string_view> next() {
    while (index_ < lines_.size()) {
      std::string_view line = lines_[index_++];
      if (const auto hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
      auto fields = textio::split_ws(line);
      if (!fields.empty()) return fields;
    }
    return {};
  }
  [[nodiscard]] int line() const { return static_cast<int>(index_); }

  template <typename T>
  T number(std::string_view token) const {
    const auto v = textio::parse_number<T>(token);
    if (!v) throw ParseError(line(), "bad number '" + std::string(token) + "'");
    return *v;
  }

  /// `key value` line with the given key.
  double keyed(std::string_view key) {
    const auto f = next();
    if (f.size() != 2 || f[0] != key) throw ParseError(line(), "expected '" + std::string(key) + "'");
    return number<double>(f[1]);
  }

 private:
  std::vector<std::string_view> lines_;
  std::size_t index_ = 0;
};

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

std::string serialize_solution(const SolutionFile& file) {
  const SequenceSolution& sol = file.solution;
  std::string out(kSolutionMagic);
  out += '\n';
  if (file.seed) out += "seed " + std::to_string(*file.seed) + '\n';
  put(out, "dv_budget", file.dv_budget);
  if (const auto& o = file.origin) {
    out += "origin";
    for (double v : {o->a, o->e, o->i, o->raan, o->argp, o->mean_anomaly, o->epoch})
      out += ' ' + format_number(v);
    out += '\n';
  }
  out += "visits " + std::to_string(sol.visits.size()) + '\n';
  out += "# constellation plane start_sat dv_m_s transfer_days raan_offset_deg "
         "incl_offset_deg k_omega k_i dt_s\n";
  double prev_end = 0.0;
  for (std::size_t j = 0; j < sol.visits.size(); ++j) {
    const PlaneVisit& v = sol.visits[j];
    const InspectionOrbit& o = v.inspection;
    const double transfer = j == 0 && !file.origin ? 0.0 : o.t_start - prev_end;
    out += std::to_string(o.plane.constellation_id) + ' ' + std::to_string(o.plane.plane_id) + ' ' +
           std::to_string(v.start_sat);
    for (double x : {v.dv * 1e3, transfer / kSecondsPerDay, o.offsets.d_raan0 * kDeg,
                     o.offsets.d_i * kDeg, o.k_omega, o.k_i, v.dt_transfer})
      out += ' ' + format_number(x);
    out += '\n';
    prev_end = o.t_end();
  }
  out += "satellites " + std::to_string(sol.total_sats) + '\n';
  put(out, "dv_km_s", sol.total_dv);
  put(out, "end_days", sol.end_time / kSecondsPerDay);
  if (sol.truncated_at) out += "truncated_at " + std::to_string(*sol.truncated_at) + '\n';
  if (const auto& r = file.verification) {
    out += "[verification]\n";
    out += "passed " + std::to_string(r->satellites_passed) + '\n';
    out += "failed " + std::to_string(r->satellites_failed) + '\n';
    put(out, "dv_actual_km_s", r->dv_actual);
    put(out, "end_s", r->end_time);
    for (const auto& v : r->violations) out += "violation " + v + '\n';
  }
  return out;
}

SolutionFile parse_solution(std::string_view text, const Scenario& scenario) {
  LineReader in(text);
  {
    const auto lines = textio::lines(text);
    if (lines.empty() || textio::trim(lines.front()) != kSolutionMagic)
      throw ParseError(1, "not a solution file");
    in.next();
  }
  SolutionFile file;
  auto f = in.next();
  if (!f.empty() && f[0] == "seed") {
    if (f.size() != 2) throw ParseError(in.line(), "expected 'seed N'");
    file.seed = in.number<std::uint64_t>(f[1]);
    f = in.next();
  }
  if (f.size() != 2 || f[0] != "dv_budget") throw ParseError(in.line(), "expected 'dv_budget'");
  file.dv_budget = in.number<double>(f[1]);

  f = in.next();
  if (!f.empty() && f[0] == "origin") {
    if (f.size() != 8) throw ParseError(in.line(), "origin needs 7 elements");
    MeanElements o;
    double* slots[] = {&o.a, &o.e, &o.i, &o.raan, &o.argp, &o.mean_anomaly, &o.epoch};
    for (std::size_t k = 0; k < 7; ++k) *slots[k] = in.number<double>(f[k + 1]);
    file.origin = o;
    f = in.next();
  }
  if (f.size() != 2 || f[0] != "visits") throw ParseError(in.line(), "expected 'visits'");
  const int n_visits = in.number<int>(f[1]);
  if (n_visits < 0) throw ParseError(in.line(), "negative visit count");

  const PlaneCatalog catalog(scenario.planes, scenario.mission.limits(), scenario.constants);
  SequenceParams params = sequence_params(scenario, file.dv_budget);
  params.origin = file.origin;
  SequenceBuilder builder(catalog, params);
  for (int j = 0; j < n_visits; ++j) {
    f = in.next();
    if (f.size() != 10) throw ParseError(in.line(), "visit rows have 10 columns");
    const int plane = scenario.find_plane(in.number<int>(f[0]), in.number<int>(f[1]));
    if (plane < 0) throw ParseError(in.line(), "plane not in scenario");
    const int start_sat = in.number<int>(f[2]);
    const double dv = in.number<double>(f[3]) * 1e-3;
    if (builder.add_explicit(plane, in.number<double>(f[7]), in.number<double>(f[8]),
                             in.number<double>(f[9])) != 0 &&
        builder.visits().size() != static_cast<std::size_t>(j + 1))
      throw ParseError(in.line(), "visit is infeasible in this scenario");
    const PlaneVisit& v = builder.visits().back();
    if (v.start_sat != start_sat || !close(v.dv * 1e3, dv * 1e3))
      throw ParseError(in.line(), "visit does not match the scenario");
  }
  file.solution = builder.solution();

  const auto sats = in.keyed("satellites");
  const auto dv = in.keyed("dv_km_s");
  in.keyed("end_days");
  if (sats != file.solution.total_sats || !close(file.solution.total_dv, dv))
    throw ParseError(in.line(), "totals do not match the visits");

  f = in.next();
  if (!f.empty() && f[0] == "truncated_at") {
    if (f.size() != 2) throw ParseError(in.line(), "expected 'truncated_at N'");
    file.solution.truncated_at = in.number<int>(f[1]);
    f = in.next();
  }
  if (!f.empty() && f[0] == "[verification]") {
    VerificationReport r;
    r.satellites_passed = static_cast<int>(in.keyed("passed"));
    r.satellites_failed = static_cast<int>(in.keyed("failed"));
    r.dv_actual = in.keyed("dv_actual_km_s");
    r.end_time = in.keyed("end_s");
    // Violation texts keep their inner spacing, so read them from the raw line.
    const auto raw = textio::lines(text);
    for (f = in.next(); !f.empty() && f[0] == "violation"; f = in.next()) {
      const std::string_view line = textio::trim(raw[static_cast<std::size_t>(in.line() - 1)]);
      r.violations.emplace_back(textio::trim(line.substr(std::string_view("violation").size())));
    }
    file.verification = std::move(r);
  }
  if (!f.empty()) throw ParseError(in.line(), "unexpected trailing content");
  file.solution.fitness =
      sequence_fitness(file.solution.total_sats, file.solution.total_dv, file.dv_budget);
  return file;
}

std::string serialize_schedules(const std::vector<ImpulseSchedule>& schedules) {
  std::string out(kScheduleMagic);
  out += "\ntransfers " + std::to_string(schedules.size()) + '\n';
  out += "# transfer epoch_s dv_r dv_t dv_n (km/s)\n";
  for (std::size_t j = 0; j < schedules.size(); ++j)
    for (const auto& burn : schedules[j]) {
      out += std::to_string(j);
      for (double v : {burn.epoch, burn.dv_rtn.x(), burn.dv_rtn.y(), burn.dv_rtn.z()})
        out += ' ' + format_number(v);
      out += '\n';
    }
  return out;
}

std::vector<ImpulseSchedule> parse_schedules(std::string_view text) {
  const auto lines = textio::lines(text);
  if (lines.empty() || textio::trim(lines.front()) != kScheduleMagic)
    throw ParseError(1, "not a schedule file");
  LineReader in(text);
  in.next();
  const double count = in.keyed("transfers");
  if (count < 0 || count != std::floor(count)) throw ParseError(in.line(), "bad transfer count");
  std::vector<ImpulseSchedule> out(static_cast<std::size_t>(count));
  std::size_t last = 0;
  for (auto f = in.next(); !f.empty(); f = in.next()) {
    if (f.size() != 5) throw ParseError(in.line(), "burn rows have 5 columns");
    const int j = in.number<int>(f[0]);
    if (j < 0 || static_cast<std::size_t>(j) >= out.size() || static_cast<std::size_t>(j) < last)
      throw ParseError(in.line(), "transfer index out of order");
    last = static_cast<std::size_t>(j);
    out[last].push_back({in.number<double>(f[1]),
                         Vec3(in.number<double>(f[2]), in.number<double>(f[3]),
                              in.number<double>(f[4]))});
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed for " + path);
}

}  // namespace plane_sweep
