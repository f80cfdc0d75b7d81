#include "plane_sweep/scenario.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "plane_sweep/errors.hpp"
#include "text_util.hpp"

namespace plane_sweep {

namespace {

constexpr double kDeg = kPi / 180.0;

ConstellationSpec parse_constellation(std::string_view line, int line_no) {
  const auto fields = textio::split_ws(line);
  if (fields.size() != 6 && fields.size() != 7)
    throw MalformedLine(line_no, "expected 6 or 7 fields, found " + std::to_string(fields.size()));
  ConstellationSpec spec;
  const auto id = textio::parse_number<int>(fields[0]);
  const auto n_planes = textio::parse_number<int>(fields[1]);
  const auto sats = textio::parse_number<int>(fields[2]);
  const auto alt = textio::parse_number<double>(fields[3]);
  const auto inc = textio::parse_number<double>(fields[4]);
  const auto raan0 = textio::parse_number<double>(fields[5]);
  if (!id || !n_planes || !sats || !alt || !inc || !raan0)
    throw MalformedLine(line_no, "non-numeric field");
  if (*n_planes < 1 || *sats < 1) throw MalformedLine(line_no, "plane and satellite counts must be positive");
  if (*alt <= 0.0) throw MalformedLine(line_no, "altitude must be positive");
  spec.id = *id;
  spec.n_planes = *n_planes;
  spec.sats_per_plane = *sats;
  spec.altitude = *alt;
  spec.inclination = *inc * kDeg;
  spec.raan0 = *raan0 * kDeg;
  if (fields.size() == 7) {
    const auto phase = textio::parse_number<double>(fields[6]);
    if (!phase) throw MalformedLine(line_no, "non-numeric phase");
    spec.phase0 = *phase * kDeg;
  }
  return spec;
}

}  // namespace

InspectionLimits Mission::limits() const {
  InspectionLimits lim;
  lim.dr_flyby = dr_flyby;
  lim.dv_flyby = dv_flyby;
  lim.delta_r0 = delta_r0;
  return lim;
}

int Scenario::total_sats() const {
  int total = 0;
  for (const auto& p : planes) total += p.n_sats;
  return total;
}

int Scenario::find_plane(int constellation_id, int plane_id) const {
  for (std::size_t k = 0; k < planes.size(); ++k)
    if (planes[k].constellation_id == constellation_id && planes[k].plane_id == plane_id)
      return static_cast<int>(k);
  return -1;
}

std::vector<OrbitalPlane> expand_planes(const ConstellationSpec& spec, const Constants& c) {
  std::vector<OrbitalPlane> out;
  out.reserve(static_cast<std::size_t>(spec.n_planes));
  const double spacing = kTwoPi / spec.n_planes;
  for (int k = 0; k < spec.n_planes; ++k) {
    OrbitalPlane p;
    p.constellation_id = spec.id;
    p.plane_id = k + 1;
    p.a0 = c.re + spec.altitude;
    p.i0 = spec.inclination;
    p.raan0 = wrap_pi(spec.raan0 + k * spacing);
    p.n_sats = spec.sats_per_plane;
    p.phase0 = spec.phase0;
    out.push_back(p);
  }
  return out;
}

Scenario make_scenario(std::vector<ConstellationSpec> constellations, const Mission& mission,
                       const Constants& c) {
  Scenario s;
  s.constellations = std::move(constellations);
  s.mission = mission;
  s.constants = c;
  for (const auto& spec : s.constellations) {
    auto planes = expand_planes(spec, c);
    s.planes.insert(s.planes.end(), planes.begin(), planes.end());
  }
  return s;
}

Scenario parse_scenario(std::string_view text, const Constants& c) {
  std::vector<ConstellationSpec> rows;
  std::map<std::string, double, std::less<>> mission_keys;
  bool in_mission = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto stop = text.find('\n', pos);
    if (stop == std::string_view::npos) stop = text.size();
    std::string_view line = text.substr(pos, stop - pos);
    pos = stop + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = textio::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line != "[mission]") throw MalformedLine(line_no, "unknown section " + std::string(line));
      if (in_mission) throw MalformedLine(line_no, "duplicate [mission] block");
      in_mission = true;
      continue;
    }
    if (!in_mission) {
      rows.push_back(parse_constellation(line, line_no));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw MalformedLine(line_no, "expected key = value");
    const std::string key(textio::trim(line.substr(0, eq)));
    const auto value = textio::parse_number<double>(textio::trim(line.substr(eq + 1)));
    if (!value) throw MalformedLine(line_no, "non-numeric value for " + key);
    static constexpr std::string_view kKnown[] = {"t_f",      "dv_max", "dr_flyby", "dv_flyby",
                                                  "delta_r0", "dt_min", "dt_max"};
    bool known = false;
    for (auto k : kKnown) known = known || k == key;
    if (!known) throw MalformedLine(line_no, "unknown mission key " + key);
    if (mission_keys.count(key) != 0) throw MalformedLine(line_no, "duplicate mission key " + key);
    mission_keys.emplace(key, *value);
  }
  if (rows.empty()) throw MalformedLine(line_no, "no constellation rows");

  Mission mission;
  if (in_mission) {
    for (std::string_view required : {"t_f", "dv_max", "dr_flyby", "dv_flyby", "delta_r0"})
      if (mission_keys.find(required) == mission_keys.end())
        throw MissingMissionKey("missing mission key: " + std::string(required));
    mission.t_f = mission_keys.at("t_f") * kSecondsPerDay;
    mission.dv_max = mission_keys.at("dv_max");
    mission.dr_flyby = mission_keys.at("dr_flyby");
    mission.dv_flyby = mission_keys.at("dv_flyby");
    mission.delta_r0 = mission_keys.at("delta_r0");
    if (auto it = mission_keys.find("dt_min"); it != mission_keys.end())
      mission.dt_min = it->second * kSecondsPerDay;
    if (auto it = mission_keys.find("dt_max"); it != mission_keys.end())
      mission.dt_max = it->second * kSecondsPerDay;
    if (!(mission.dt_min < mission.dt_max))
      throw MalformedLine(line_no, "dt_min must be below dt_max");
  }
  return make_scenario(std::move(rows), mission, c);
}

Scenario load_scenario(const std::string& path, const Constants& c) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), c);
}

}  // namespace plane_sweep
