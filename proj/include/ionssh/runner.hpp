#pragma once

// Pipeline orchestration behind the command-line verbs: trap -> coupling ->
// dressing -> dynamics -> analysis, scans over a worker pool, result bundles.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ionssh/coupling.hpp"
#include "ionssh/dynamics.hpp"
#include "ionssh/floquet.hpp"
#include "ionssh/scenario.hpp"

namespace ionssh {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Bare coupling matrix of a scenario; `modes` receives the trap spectrum
/// when the source is a trap.
CouplingMatrix bare_matrix(const Scenario& s, ModeSpectrum* modes = nullptr);

/// Drive of a scenario with B0 and omega in units of the bare J.
FloquetDrive scenario_drive(const Scenario& s, double j_unit);

/// Initial product state as a bit pattern (bit j-1 = site j up).
std::uint64_t initial_bits(const Scenario& s, int n_sites);

/// Trajectory of one scenario point under its model.
Trajectory simulate(const Scenario& s, const CouplingMatrix& bare);

struct PointResult {
  std::size_t index = 0;
  std::string dir;
  nlohmann::json params = nlohmann::json::object();
  bool ok = true;
  int exit_code = kExitOk;
  std::string error;
  nlohmann::json analysis = nlohmann::json::object();
  std::vector<double> late_time;  // empty unless requested
  double seconds = 0.0;
};

/// Runs one point and writes its directory. Never throws for errors raised by
/// the pipeline; they are recorded in the result and a FAILED marker file.
PointResult run_point(const Scenario& s, const ScanPoint& p, const std::filesystem::path& dir);

struct RunOptions {
  std::filesystem::path out_dir;
  int workers = 0;  // 0: hardware concurrency
};

struct RunResult {
  std::vector<PointResult> points;
  int exit_code = kExitOk;
};

/// Writes manifest.json (config, config hash, version, point statuses; no
/// wall-clock data), timings.json, summary tables and one point_NNN
/// directory per scan point. Output is independent of the worker count.
RunResult run_scenario(const Scenario& s, const RunOptions& opt);

/// Hex FNV-1a of the canonical (sorted-key, compact) config dump.
std::string config_hash(const nlohmann::json& config);

// Single-purpose verbs. Each writes its files under `out` and returns the
// JSON record it wrote.
nlohmann::json write_modes(const Scenario& s, const std::filesystem::path& out);
nlohmann::json write_coupling(const Scenario& s, const std::filesystem::path& out);
nlohmann::json write_dressing(const Scenario& s, const std::filesystem::path& out);
nlohmann::json write_tomography(const Scenario& s, const std::filesystem::path& out);
nlohmann::json write_spectrum(const Scenario& s, const std::filesystem::path& out);

/// Export kinds understood by export_bundle.
bool is_export_kind(const std::string& kind);

/// Regenerates plot data from the trajectories of a run bundle:
/// heatmap_svg, csv_wide or csv_long, one file per point. Returns the
/// written paths. Throws ConfigError for an unknown kind or a missing bundle.
std::vector<std::filesystem::path> export_bundle(const std::filesystem::path& bundle, const std::string& kind);

}  // namespace ionssh
