#pragma once

// Serialization of the library's value types. Numbers are written in the
// shortest form that round-trips, so identical inputs give identical files.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ionssh/analysis.hpp"
#include "ionssh/coupling.hpp"
#include "ionssh/dynamics.hpp"
#include "ionssh/floquet.hpp"
#include "ionssh/trap.hpp"

namespace ionssh::io {

using json = nlohmann::json;

/// Shortest round-trip decimal; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);
/// Inverse of format_number. Throws ConfigError on malformed text.
double parse_number(std::string_view text);

/// {"positions_m", "freqs_rad_s", "participation" (row-major N x N)}
json to_json(const ModeSpectrum& spec);

/// {"size", "values" (row-major), "mean_nn_rad_s", "label"}
json to_json(const CouplingMatrix& cm);
CouplingMatrix coupling_from_json(const json& j);

/// Header row of 1-based site indices, then one row per site.
std::string coupling_csv(const CouplingMatrix& cm);

json to_json(const FloquetDrive& drive);
json to_json(const Dimerization& dim);
json to_json(const BandFit& fit);
json to_json(const OdeStats& stats);
json to_json(const SpreadFit& fit);
json to_json(const TomographyResult& t);
json to_json(const EdgeSpectrum& es);
json to_json(const DomainWallTable& dw);

/// Columns tau, m_1..m_L.
std::string trajectory_csv(const Trajectory& traj);
/// Columns tau, site, m.
std::string trajectory_csv_long(const Trajectory& traj);
/// Reads the wide format back. label/model are left empty.
Trajectory read_trajectory_csv(const std::string& text);

/// Metadata sidecar: label, model, coupling unit, tolerances, step statistics.
json trajectory_metadata(const Trajectory& traj);

/// Columns phi, eta_bar, zak_phase, min_gap.
std::string zak_sweep_csv(const std::vector<ZakSweepRow>& rows);

/// Columns tau, then up_j and sigma_j per site.
std::string shots_csv(const ShotTable& shots);

/// Site (rows, site 1 on top) versus tau (columns) raster of m_j on the
/// diverging map blue (-1) / white (0) / red (+1).
std::string heatmap_svg(const Trajectory& traj, const std::string& title = {});

void write_text(const std::filesystem::path& path, std::string_view text);
void write_json(const std::filesystem::path& path, const json& j);
std::string read_text(const std::filesystem::path& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);

}  // namespace ionssh::io
