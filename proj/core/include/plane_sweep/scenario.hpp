#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "plane_sweep/astro.hpp"
#include "plane_sweep/inspection.hpp"

namespace plane_sweep {

/// One constellation row: `id n_planes sats_per_plane altitude_km inclination_deg raan0_deg`.
struct ConstellationSpec {
  int id = 0;
  int n_planes = 0;
  int sats_per_plane = 0;
  double altitude = 0.0;     // km above the reference radius
  double inclination = 0.0;  // rad
  double raan0 = 0.0;        // rad, first plane at t = 0
  double phase0 = 0.0;       // rad, satellite 0 of every plane at t = 0

  friend bool operator==(const ConstellationSpec&, const ConstellationSpec&) = default;
};

/// Mission constraints, internal units (s, km, km/s).
struct Mission {
  double t0 = 0.0;
  double t_f = 90.0 * kSecondsPerDay;
  double dv_max = 3.0;
  double dr_flyby = 50.0;
  double dv_flyby = 0.150;
  double delta_r0 = 5.0;
  double dt_min = 0.1 * kSecondsPerDay;
  double dt_max = 4.0 * kSecondsPerDay;

  [[nodiscard]] InspectionLimits limits() const;
  friend bool operator==(const Mission&, const Mission&) = default;
};

struct Scenario {
  std::vector<ConstellationSpec> constellations;
  Mission mission;
  Constants constants = kEarth;
  std::vector<OrbitalPlane> planes;  // expanded, constellation order then plane order

  [[nodiscard]] int total_sats() const;
  /// Index into `planes`, or -1.
  [[nodiscard]] int find_plane(int constellation_id, int plane_id) const;
};

/// Uniform RAAN spacing over 360 deg within the constellation.
[[nodiscard]] std::vector<OrbitalPlane> expand_planes(const ConstellationSpec& spec,
                                                      const Constants& c = kEarth);

/// Builds a scenario (planes expanded) from constellation rows.
[[nodiscard]] Scenario make_scenario(std::vector<ConstellationSpec> constellations,
                                     const Mission& mission = {}, const Constants& c = kEarth);

/// Constellation rows plus an optional `[mission]` block of `key = value` lines.
/// Mission keys: t_f (d), dv_max (km/s), dr_flyby (km), dv_flyby (km/s), delta_r0 (km),
/// and optionally dt_min, dt_max (d). Without a block the defaults above apply.
/// Throws MalformedLine or MissingMissionKey.
[[nodiscard]] Scenario parse_scenario(std::string_view text, const Constants& c = kEarth);
[[nodiscard]] Scenario load_scenario(const std::string& path, const Constants& c = kEarth);

}  // namespace plane_sweep
