#pragma once

// JSON scenario files: one coupling source, a drive in units of J, a model,
// an initial state, a tau grid, optional scan axes and analyses. Frequencies
// are read in cyclic kHz / MHz and converted to rad/s here and nowhere else.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ionssh/coupling.hpp"
#include "ionssh/floquet.hpp"

namespace ionssh {

enum class Model { xy_effective, full_drive, free_fermion };

std::string to_string(Model m);

struct CouplingSource {
  enum class Kind { preset, profile, matrix };
  Kind kind = Kind::preset;
  ChainPreset preset;     // kind == preset: a named preset or an explicit trap
  double profile_j = 0.0;  // rad/s
  double profile_xi = 1.0;
  int profile_sites = 0;
  RealMatrix matrix;       // rad/s
  std::string label;
};

struct InitialState {
  enum class Kind { single_excitation, neel, domain_wall, bitstring };
  Kind kind = Kind::single_excitation;
  int site = 1;          // single_excitation, 1-based
  std::string bits;      // bitstring, site 1 first, '1' = up
};

struct ScanAxis {
  std::string name;  // eta_bar | phi | phi_over_pi | site | xi
  std::vector<double> values;
};

struct Analyses {
  bool spreading = false;
  bool late_time = false;
  bool heatmap = false;
  bool free_fermion_compare = false;
  bool edge_spectrum = false;
  bool zak = false;
  bool domainwall = false;
  int shots = 0;
};

struct TomographyRequest {
  std::vector<std::pair<int, int>> bonds;  // 1-based; empty: all nearest-neighbour bonds
  double tau_max = 12.0;
  int n_samples = 400;
};

struct Scenario {
  std::string name;
  nlohmann::json config;  // as read, for the manifest
  CouplingSource coupling;
  double eta_bar = 0.0;
  double phi = 0.0;
  double b0_over_j = 18.0;
  double omega_over_j = 6.0;
  Model model = Model::xy_effective;
  InitialState initial;
  double tau_max = 2.0;
  int n_times = 201;
  double tol = 1e-9;
  std::vector<ScanAxis> scan;
  Analyses analyses;
  TomographyRequest tomography;
  std::uint64_t seed = 0;
  std::string output_dir;
};

/// Parses a scenario document; a manifest (object with "config" and
/// "config_hash") is unwrapped to its embedded config. Throws ConfigError
/// naming the offending field.
Scenario parse_scenario(const nlohmann::json& doc);

/// Reads and parses a file. JSON syntax errors are reported as ConfigError
/// with line and column.
Scenario load_scenario(const std::string& path);
nlohmann::json load_json(const std::string& path);

/// One point of the scan grid: the axis values in axis order.
struct ScanPoint {
  std::size_t index = 0;
  std::vector<std::pair<std::string, double>> params;
};

/// Cartesian product of the scan axes, first axis slowest. A scenario without
/// scan axes has a single point.
std::vector<ScanPoint> scan_points(const Scenario& s);

/// The scenario with a scan point's values substituted.
Scenario at_point(const Scenario& s, const ScanPoint& p);

/// Number of spins of the coupling source (solves no trap).
int chain_length(const Scenario& s);

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  nlohmann::json estimates;
  bool ok() const noexcept { return errors.empty(); }
  nlohmann::json to_json() const;
};

/// Schema and physics checks without side effects: RWA warning when
/// B0 < 10 J or omega < 4 J, sector dimension and memory estimate, the
/// full-drive size policy.
ValidationReport validate_scenario(const Scenario& s);
ValidationReport validate_file(const std::string& path);

/// Thresholds of the RWA sanity warning.
inline constexpr double kRwaMinB0 = 10.0;
inline constexpr double kRwaMinOmega = 4.0;

}  // namespace ionssh
