#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plane_sweep/scenario.hpp"
#include "plane_sweep/sequence.hpp"
#include "plane_sweep/transfer.hpp"
#include "plane_sweep/verify.hpp"

namespace plane_sweep {

struct SolutionFile {
  SequenceSolution solution;
  std::optional<std::uint64_t> seed;  // of the run that produced the solution
  double dv_budget = 3.75;  // km/s, the fitness normalization the solution was scored with
  std::optional<MeanElements> origin;
  /// Totals only; per-leg flyby records are not stored.
  std::optional<VerificationReport> verification;
};

/// Text form: one row per visit with constellation, plane, start satellite, dv (m/s),
/// transfer duration (days), RAAN and inclination offsets (deg), then the exact k_omega,
/// k_i and selected duration (s); a totals block; an optional [verification] block.
[[nodiscard]] std::string serialize_solution(const SolutionFile& file);

/// Rebuilds every visit against `scenario` and checks it against the stored columns.
/// Throws ParseError with the offending line.
[[nodiscard]] SolutionFile parse_solution(std::string_view text, const Scenario& scenario);

/// One row per impulse: transfer index, epoch (s), dv along R, T, N (km/s).
[[nodiscard]] std::string serialize_schedules(const std::vector<ImpulseSchedule>& schedules);
/// Inverse of serialize_schedules; transfers without burns survive the round trip.
[[nodiscard]] std::vector<ImpulseSchedule> parse_schedules(std::string_view text);

[[nodiscard]] std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace plane_sweep
