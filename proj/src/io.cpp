#include "ionssh/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ionssh/error.hpp"

namespace ionssh::io {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

double parse_number(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), x);
  if (r.ec != std::errc{} || r.ptr != text.data() + text.size())
    throw ConfigError("malformed number '" + std::string(text) + "'");
  return x;
}

namespace {

json matrix_rows(const RealMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  return out;
}

// NaN is not representable in JSON; nlohmann writes it as null.
json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json to_json(const ModeSpectrum& spec) {
  json j;
  j["positions_m"] = spec.positions;
  j["freqs_rad_s"] = spec.frequencies;
  j["participation"] = std::vector<double>(spec.participation.data().begin(), spec.participation.data().end());
  return j;
}

json to_json(const CouplingMatrix& cm) {
  json j;
  j["size"] = cm.size();
  j["values"] = std::vector<double>(cm.values.data().begin(), cm.values.data().end());
  j["mean_nn_rad_s"] = cm.mean_nn;
  j["label"] = cm.label;
  return j;
}

CouplingMatrix coupling_from_json(const json& j) {
  try {
    const std::size_t n = j.at("size").get<std::size_t>();
    const auto v = j.at("values").get<std::vector<double>>();
    if (v.size() != n * n) throw ConfigError("coupling: values must hold size^2 entries");
    RealMatrix m(n, n);
    std::copy(v.begin(), v.end(), m.data().begin());
    return CouplingMatrix::from_values(std::move(m), j.value("label", std::string{}));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("coupling: ") + e.what());
  }
}

std::string coupling_csv(const CouplingMatrix& cm) {
  std::string out = "site";
  for (std::size_t j = 0; j < cm.size(); ++j) out += "," + std::to_string(j + 1);
  out += '\n';
  for (std::size_t i = 0; i < cm.size(); ++i) {
    out += std::to_string(i + 1);
    for (std::size_t j = 0; j < cm.size(); ++j) out += "," + format_number(cm.values(i, j));
    out += '\n';
  }
  return out;
}

json to_json(const FloquetDrive& drive) {
  return {{"b0_rad_s", drive.b0},
          {"omega_rad_s", drive.omega},
          {"eta_bar", drive.eta_bar},
          {"phi", drive.phi},
          {"z0", FloquetDrive::z0}};
}

json to_json(const Dimerization& dim) {
  json cross = json::object();
  for (int d = dim.cross_min; d <= dim.cross_max(); ++d) cross[std::to_string(d)] = dim.cross(d);
  return {{"same_a", dim.same_a}, {"same_b", dim.same_b}, {"cross", cross}};
}

json to_json(const BandFit& fit) {
  return {{"amplitude", fit.amplitude},
          {"decay", fit.decay},
          {"rms", fit.rms},
          {"max_distance", fit.max_distance}};
}

json to_json(const OdeStats& s) {
  return {{"accepted", s.accepted},
          {"rejected", s.rejected},
          {"evaluations", s.evaluations},
          {"min_step", s.min_step},
          {"max_step", s.max_step}};
}

json to_json(const SpreadFit& fit) {
  json times = json::array();
  for (double t : fit.crossing_times) times.push_back(number_or_null(t));
  return {{"v_s", fit.v_s},
          {"ci_low", fit.ci_low},
          {"ci_high", number_or_null(fit.ci_high)},
          {"n_crossed", fit.n_crossed},
          {"threshold", fit.threshold},
          {"crossing_times", times}};
}

json to_json(const TomographyResult& t) {
  return {{"i", t.i},
          {"j", t.j},
          {"j_fit_rad_s", t.j_fit},
          {"gamma_fit_rad_s", t.gamma_fit},
          {"rms", t.rms},
          {"suppressed", t.suppressed},
          {"n_samples", t.tau.size()}};
}

json to_json(const EdgeSpectrum& es) {
  json states = json::array();
  for (const auto& s : es.midgap)
    states.push_back({{"energy", s.energy},
                      {"edge_weight", s.edge_weight},
                      {"localization_length", number_or_null(s.localization_length)}});
  return {{"eigenvalues", es.eigenvalues},
          {"gapless", es.gapless},
          {"gap_low", es.gap_low},
          {"gap_high", es.gap_high},
          {"edge_sites", es.edge_sites},
          {"midgap_count", es.midgap.size()},
          {"midgap", states}};
}

json to_json(const DomainWallTable& dw) {
  return {{"energy_left", dw.energy_left},
          {"energy_right", dw.energy_right},
          {"g", matrix_rows(dw.g)}};
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "tau";
  for (std::size_t j = 0; j < traj.n_sites(); ++j) out += ",m_" + std::to_string(j + 1);
  out += '\n';
  for (std::size_t k = 0; k < traj.n_times(); ++k) {
    out += format_number(traj.tau[k]);
    for (std::size_t j = 0; j < traj.n_sites(); ++j) out += "," + format_number(traj.m(k, j));
    out += '\n';
  }
  return out;
}

std::string trajectory_csv_long(const Trajectory& traj) {
  std::string out = "tau,site,m\n";
  for (std::size_t k = 0; k < traj.n_times(); ++k)
    for (std::size_t j = 0; j < traj.n_sites(); ++j)
      out += format_number(traj.tau[k]) + "," + std::to_string(j + 1) + "," + format_number(traj.m(k, j)) + "\n";
  return out;
}

Trajectory read_trajectory_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("tau", 0) != 0) throw ConfigError("trajectory csv: missing header");
  const std::size_t l = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
  if (l == 0) throw ConfigError("trajectory csv: no site columns");
  std::vector<double> tau, values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0, fields = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      const double x = parse_number(std::string_view(line).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      (fields == 0 ? tau.push_back(x) : values.push_back(x));
      ++fields;
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (fields != l + 1) throw ConfigError("trajectory csv: ragged row");
  }
  Trajectory traj;
  traj.tau = std::move(tau);
  traj.magnetization = RealMatrix(traj.tau.size(), l);
  std::copy(values.begin(), values.end(), traj.magnetization.data().begin());
  return traj;
}

json trajectory_metadata(const Trajectory& traj) {
  return {{"label", traj.label},
          {"model", traj.model},
          {"coupling_unit_rad_s", traj.coupling_unit},
          {"tol", traj.tol},
          {"max_norm_drift", traj.max_norm_drift},
          {"n_times", traj.n_times()},
          {"n_sites", traj.n_sites()},
          {"stats", to_json(traj.stats)}};
}

std::string zak_sweep_csv(const std::vector<ZakSweepRow>& rows) {
  std::string out = "phi,eta_bar,zak_phase,min_gap\n";
  for (const auto& r : rows)
    out += format_number(r.phi) + "," + format_number(r.eta_bar) + "," + format_number(r.zak_phase) + "," +
           format_number(r.min_gap) + "\n";
  return out;
}

std::string shots_csv(const ShotTable& shots) {
  const std::size_t l = shots.up_counts.cols();
  std::string out = "tau";
  for (std::size_t j = 0; j < l; ++j) out += ",up_" + std::to_string(j + 1) + ",sigma_" + std::to_string(j + 1);
  out += '\n';
  for (std::size_t k = 0; k < shots.tau.size(); ++k) {
    out += format_number(shots.tau[k]);
    for (std::size_t j = 0; j < l; ++j)
      out += "," + std::to_string(shots.up_counts(k, j)) + "," + format_number(shots.sigma(k, j));
    out += '\n';
  }
  return out;
}

namespace {

std::string diverging_color(double m) {
  const double x = std::clamp(std::isfinite(m) ? m : 0.0, -1.0, 1.0);
  // white at 0, (33, 102, 172) at -1, (178, 24, 43) at +1
  const double r0 = x < 0 ? 33 : 178, g0 = x < 0 ? 102 : 24, b0 = x < 0 ? 172 : 43;
  const double a = std::abs(x);
  auto ch = [&](double end) { return static_cast<int>(std::lround(255.0 + a * (end - 255.0))); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", ch(r0), ch(g0), ch(b0));
  return buf;
}

}  // namespace

std::string heatmap_svg(const Trajectory& traj, const std::string& title) {
  const std::size_t nt = traj.n_times(), l = traj.n_sites();
  const int cell_w = nt > 400 ? 1 : (nt > 200 ? 2 : 3);
  const int cell_h = 12, left = 40, top = title.empty() ? 10 : 28, bottom = 30;
  const int width = left + static_cast<int>(nt) * cell_w + 10;
  const int height = top + static_cast<int>(l) * cell_h + bottom;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" shape-rendering=\"crispEdges\">\n";
  if (!title.empty())
    s << "<text x=\"" << left << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"12\">" << title << "</text>\n";
  for (std::size_t j = 0; j < l; ++j) {
    const int y = top + static_cast<int>(j) * cell_h;
    s << "<text x=\"" << left - 4 << "\" y=\"" << y + cell_h - 2
      << "\" font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"end\">" << j + 1 << "</text>\n";
    for (std::size_t k = 0; k < nt; ++k)
      s << "<rect x=\"" << left + static_cast<int>(k) * cell_w << "\" y=\"" << y << "\" width=\"" << cell_w
        << "\" height=\"" << cell_h << "\" fill=\"" << diverging_color(traj.m(k, j)) << "\"/>\n";
  }
  if (nt > 0) {
    const int y = top + static_cast<int>(l) * cell_h + 14;
    s << "<text x=\"" << left << "\" y=\"" << y << "\" font-family=\"sans-serif\" font-size=\"10\">tau = "
      << format_number(traj.tau.front()) << "</text>\n";
    s << "<text x=\"" << width - 10 << "\" y=\"" << y
      << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">tau = " << format_number(traj.tau.back())
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write " + path.string());
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw ConfigError("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace ionssh::io
