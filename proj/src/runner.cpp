#include "ionssh/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>

#include "ionssh/analysis.hpp"
#include "ionssh/error.hpp"
#include "ionssh/fermion.hpp"
#include "ionssh/hamiltonian.hpp"
#include "ionssh/io.hpp"
#include "ionssh/simd/kernels.hpp"
#include "ionssh/trap.hpp"

namespace ionssh {

using nlohmann::json;
namespace fs = std::filesystem;

CouplingMatrix bare_matrix(const Scenario& s, ModeSpectrum* modes) {
  const CouplingSource& c = s.coupling;
  switch (c.kind) {
    case CouplingSource::Kind::preset: {
      PresetResult r = build_preset(c.preset);
      if (modes) *modes = std::move(r.modes);
      return r.matrix;
    }
    case CouplingSource::Kind::profile: {
      CouplingMatrix cm = exponential_profile(c.profile_j, c.profile_xi, c.profile_sites);
      cm.label = "exponential(xi=" + io::format_number(c.profile_xi) + ")";
      return cm;
    }
    case CouplingSource::Kind::matrix:
      return CouplingMatrix::from_values(c.matrix, c.label);
  }
  throw ConfigError("coupling: unknown source");
}

FloquetDrive scenario_drive(const Scenario& s, double j_unit) {
  FloquetDrive d;
  d.b0 = s.b0_over_j * j_unit;
  d.omega = s.omega_over_j * j_unit;
  d.eta_bar = s.eta_bar;
  d.phi = s.phi;
  d.validate();
  return d;
}

std::uint64_t initial_bits(const Scenario& s, int l) {
  switch (s.initial.kind) {
    case InitialState::Kind::single_excitation:
      if (s.initial.site < 1 || s.initial.site > l) throw ConfigError("initial_state.site out of range");
      return std::uint64_t{1} << (s.initial.site - 1);
    case InitialState::Kind::neel: return neel_bits(l);
    case InitialState::Kind::domain_wall: return domain_wall_bits(l);
    case InitialState::Kind::bitstring: {
      if (static_cast<int>(s.initial.bits.size()) != l) throw ConfigError("initial_state.bits: wrong length");
      std::uint64_t b = 0;
      for (int j = 0; j < l; ++j)
        if (s.initial.bits[j] == '1') b |= std::uint64_t{1} << j;
      return b;
    }
  }
  return 0;
}

Trajectory simulate(const Scenario& s, const CouplingMatrix& bare) {
  const int l = static_cast<int>(bare.size());
  const double j_unit = bare.mean_nn;
  if (!(j_unit > 0.0)) throw ConfigError("coupling: vanishing nearest-neighbour bonds, J undefined");
  const FloquetDrive drive = scenario_drive(s, j_unit);
  const std::uint64_t bits = initial_bits(s, l);
  const std::vector<double> grid = tau_grid(s.tau_max, s.n_times);
  EvolveOptions eo;
  eo.tol = s.tol;
  eo.coupling_unit = j_unit;
  switch (s.model) {
    case Model::xy_effective: {
      const CouplingMatrix dressed = dressed_matrix(bare, drive);
      const SpinState psi = SpinState::product(l, bits);
      return evolve(psi, build_xy_hamiltonian(dressed, psi.basis), grid, eo);
    }
    case Model::full_drive: {
      const SpinState psi = SpinState::product(l, bits, true);
      return evolve(psi, build_full_hamiltonian(bare, drive), grid, eo);
    }
    case Model::free_fermion: {
      Trajectory t = evolve_correlations(CorrelationMatrix::product(l, bits), dressed_matrix(bare, drive), grid,
                                         j_unit);
      t.tol = s.tol;
      return t;
    }
  }
  throw ConfigError("unknown model");
}

namespace {

std::string point_dir_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "point_%03zu", index);
  return buf;
}

json params_json(const ScanPoint& p) {
  json j = json::object();
  for (const auto& [k, v] : p.params) j[k] = v;
  return j;
}

std::string point_title(const std::string& name, const json& params) {
  std::string t = name;
  for (const auto& [k, v] : params.items()) t += " " + k + "=" + io::format_number(v.get<double>());
  return t;
}

std::string bits_string(std::uint64_t bits, int l) {
  std::string s(l, '0');
  for (int j = 0; j < l; ++j)
    if ((bits >> j) & 1u) s[j] = '1';
  return s;
}

double max_deviation(const Trajectory& a, const Trajectory& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.n_times(); ++k)
    for (std::size_t j = 0; j < a.n_sites(); ++j) d = std::max(d, std::abs(a.m(k, j) - b.m(k, j)));
  return d;
}

json analyse_point(const Scenario& s, const ScanPoint& p, const CouplingMatrix& bare, const Trajectory& traj,
                   const fs::path& dir, PointResult& res) {
  const int l = static_cast<int>(bare.size());
  const FloquetDrive drive = scenario_drive(s, bare.mean_nn);
  const CouplingMatrix dressed = dressed_matrix(bare, drive);
  const std::uint64_t bits = initial_bits(s, l);
  json a;
  a["params"] = params_json(p);
  a["model"] = to_string(s.model);
  a["n_sites"] = l;
  a["coupling_unit_rad_s"] = bare.mean_nn;
  a["drive"] = io::to_json(drive);
  a["initial_bits"] = bits_string(bits, l);
  const std::size_t last = traj.n_times() - 1;
  a["m_final"] = std::vector<double>(traj.magnetization.row(last).begin(), traj.magnetization.row(last).end());

  if (s.analyses.spreading) {
    try {
      json sp = io::to_json(spreading_rate(traj));
      sp["localized"] = false;
      a["spreading_rate"] = sp;
    } catch (const NumericalError& e) {
      a["spreading_rate"] = {{"localized", true}, {"message", e.what()}, {"n_crossed", e.residual()}};
    }
  }
  if (s.analyses.late_time) {
    res.late_time = late_time_profile(traj);
    json lt = {{"window", {kLateWindowBegin, kLateWindowEnd}}, {"profile", res.late_time}};
    if (s.initial.kind == InitialState::Kind::single_excitation) {
      lt["initial_site"] = s.initial.site;
      lt["s_initial"] = res.late_time[s.initial.site - 1];
      lt["cross_site_mean"] = cross_site_mean(res.late_time, s.initial.site);
    }
    a["late_time"] = lt;
  }
  if (s.analyses.free_fermion_compare && s.model != Model::free_fermion) {
    const Trajectory ff = evolve_correlations(CorrelationMatrix::product(l, bits), dressed, traj.tau, bare.mean_nn);
    io::write_text(dir / "free_fermion.csv", io::trajectory_csv(ff));
    a["free_fermion_compare"] = {{"max_deviation", max_deviation(traj, ff)}};
  }
  if (s.analyses.heatmap) io::write_text(dir / "heatmap.svg", io::heatmap_svg(traj, point_title(s.name, a["params"])));
  if (s.analyses.shots > 0) {
    const ShotTable st = sample_shots(traj, s.analyses.shots, s.seed + p.index);
    io::write_text(dir / "shots.csv", io::shots_csv(st));
    a["shots"] = {{"count", st.shots}, {"seed", st.seed}};
  }
  if (s.analyses.edge_spectrum) a["edge_spectrum"] = io::to_json(edge_state_spectrum(dressed));
  if (s.analyses.zak) {
    const std::vector<double> jbar = band_profile(bare);
    try {
      const ZakResult z = zak_phase(jbar, drive_dimerization(drive.eta_bar, drive.phi, l - 1));
      a["zak"] = {{"phase", z.phase}, {"min_gap", z.min_gap}, {"gapless", false}};
    } catch (const NumericalError& e) {
      a["zak"] = {{"gapless", true}, {"min_gap", e.residual()}};
    }
  }
  if (s.analyses.domainwall) {
    json dw = io::to_json(domainwall_couplings(dressed));
    const int h = l / 2;
    dw["boundary_correlation"] = pearson_correlation(site_series(traj, h), site_series(traj, h + 1));
    if (traj.tau.back() >= kLateWindowEnd) dw["domain_contrast"] = domain_contrast(traj);
    a["domainwall"] = dw;
  }
  return a;
}

}  // namespace

PointResult run_point(const Scenario& base, const ScanPoint& p, const fs::path& dir) {
  const auto t0 = std::chrono::steady_clock::now();
  PointResult res;
  res.index = p.index;
  res.dir = dir.filename().string();
  res.params = params_json(p);
  try {
    fs::create_directories(dir);
    fs::remove(dir / "FAILED");
    const Scenario s = at_point(base, p);
    const CouplingMatrix bare = bare_matrix(s);
    const Trajectory traj = simulate(s, bare);
    io::write_text(dir / "trajectory.csv", io::trajectory_csv(traj));
    json meta = io::trajectory_metadata(traj);
    meta["drive"] = io::to_json(scenario_drive(s, bare.mean_nn));
    meta["params"] = res.params;
    io::write_json(dir / "trajectory.json", meta);
    res.analysis = analyse_point(s, p, bare, traj, dir, res);
    io::write_json(dir / "analysis.json", res.analysis);
  } catch (const ConfigError& e) {
    res.ok = false;
    res.exit_code = kExitConfig;
    res.error = e.what();
  } catch (const NumericalError& e) {
    res.ok = false;
    res.exit_code = kExitNumerical;
    res.error = e.what();
  } catch (const std::exception& e) {
    res.ok = false;
    res.exit_code = kExitNumerical;
    res.error = e.what();
  }
  if (!res.ok) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    io::write_text(dir / "FAILED", res.error + "\n");
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::string config_hash(const json& config) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(io::fnv1a(config.dump())));
  return buf;
}

namespace {

std::string summary_csv(const Scenario& s, const std::vector<PointResult>& pts) {
  std::string out = "point";
  for (const auto& axis : s.scan) out += "," + axis.name;
  out += ",status,m_initial_final,v_s,ci_low,ci_high,s_initial,cross_site_mean,ff_max_deviation,midgap_count,zak_phase\n";
  auto num = [](const json& j, std::initializer_list<const char*> keys) {
    const json* cur = &j;
    for (const char* k : keys) {
      if (!cur->is_object() || !cur->contains(k)) return std::string("nan");
      cur = &cur->at(k);
    }
    return cur->is_number() ? io::format_number(cur->get<double>()) : std::string("nan");
  };
  for (const auto& r : pts) {
    out += std::to_string(r.index);
    for (const auto& axis : s.scan) out += "," + io::format_number(r.params.at(axis.name).get<double>());
    out += r.ok ? ",ok" : ",failed";
    std::string m_init = "nan";
    if (r.ok && s.initial.kind == InitialState::Kind::single_excitation) {
      const int site = r.params.contains("site") ? static_cast<int>(r.params.at("site").get<double>()) : s.initial.site;
      m_init = io::format_number(r.analysis.at("m_final").at(site - 1).get<double>());
    }
    out += "," + m_init;
    out += "," + num(r.analysis, {"spreading_rate", "v_s"}) + "," + num(r.analysis, {"spreading_rate", "ci_low"}) +
           "," + num(r.analysis, {"spreading_rate", "ci_high"});
    out += "," + num(r.analysis, {"late_time", "s_initial"}) + "," + num(r.analysis, {"late_time", "cross_site_mean"});
    out += "," + num(r.analysis, {"free_fermion_compare", "max_deviation"});
    out += "," + num(r.analysis, {"edge_spectrum", "midgap_count"}) + "," + num(r.analysis, {"zak", "phase"});
    out += '\n';
  }
  return out;
}

std::string late_time_csv(const Scenario& s, const std::vector<PointResult>& pts) {
  std::size_t l = 0;
  for (const auto& r : pts) l = std::max(l, r.late_time.size());
  std::string out = "point";
  for (const auto& axis : s.scan) out += "," + axis.name;
  for (std::size_t j = 0; j < l; ++j) out += ",s_" + std::to_string(j + 1);
  out += '\n';
  for (const auto& r : pts) {
    out += std::to_string(r.index);
    for (const auto& axis : s.scan) out += "," + io::format_number(r.params.at(axis.name).get<double>());
    for (std::size_t j = 0; j < l; ++j) out += "," + (j < r.late_time.size() ? io::format_number(r.late_time[j]) : "nan");
    out += '\n';
  }
  return out;
}

}  // namespace

RunResult run_scenario(const Scenario& s, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path out = opt.out_dir.empty() ? fs::path(s.output_dir.empty() ? "out/" + s.name : s.output_dir)
                                           : opt.out_dir;
  fs::create_directories(out);
  const std::vector<ScanPoint> pts = scan_points(s);

  RunResult rr;
  rr.points.resize(pts.size());
  unsigned workers = opt.workers > 0 ? static_cast<unsigned>(opt.workers) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(pts.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < pts.size(); i = next++)
      rr.points[i] = run_point(s, pts[i], out / point_dir_name(i));
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  json manifest;
  manifest["name"] = s.name;
  manifest["version"] = kVersion;
  manifest["simd"] = std::string(simd::active_kernels().name);
  manifest["config"] = s.config;
  manifest["config_hash"] = config_hash(s.config);
  json points = json::array();
  json timings = json::array();
  bool config_fail = false;
  for (const auto& r : rr.points) {
    json pj = {{"index", r.index}, {"dir", r.dir}, {"params", r.params}, {"status", r.ok ? "ok" : "failed"}};
    if (!r.ok) {
      pj["error"] = r.error;
      config_fail = config_fail || r.exit_code == kExitConfig;
      rr.exit_code = config_fail ? kExitConfig : kExitNumerical;
    }
    points.push_back(pj);
    timings.push_back({{"dir", r.dir}, {"seconds", r.seconds}});
  }
  manifest["points"] = points;
  io::write_json(out / "manifest.json", manifest);
  io::write_text(out / "summary.csv", summary_csv(s, rr.points));
  if (s.analyses.late_time) io::write_text(out / "late_time.csv", late_time_csv(s, rr.points));
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  io::write_json(out / "timings.json", {{"total_seconds", total}, {"workers", workers}, {"points", timings}});
  return rr;
}

json write_modes(const Scenario& s, const fs::path& out) {
  if (s.coupling.kind != CouplingSource::Kind::preset) throw ConfigError("modes: the coupling source has no trap");
  const TrapConfig& cfg = s.coupling.preset.trap;
  const std::vector<double> x = equilibrium_positions(cfg);
  const ModeSpectrum spec = radial_modes(cfg, x);
  json j = io::to_json(spec);
  j["n_ions"] = cfg.n_ions;
  j["equilibrium_residual"] = equilibrium_residual(cfg, x);
  io::write_json(out / "modes.json", j);
  return j;
}

json write_coupling(const Scenario& s, const fs::path& out) {
  ModeSpectrum modes;
  const CouplingMatrix bare = bare_matrix(s, &modes);
  io::write_json(out / "coupling.json", io::to_json(bare));
  io::write_text(out / "coupling.csv", io::coupling_csv(bare));
  json fit = io::to_json(fit_band_profile(bare));
  fit["band_profile"] = band_profile(bare);
  fit["mean_nn_rad_s"] = bare.mean_nn;
  io::write_json(out / "band_fit.json", fit);
  return fit;
}

json write_dressing(const Scenario& s, const fs::path& out) {
  const CouplingMatrix bare = bare_matrix(s);
  const FloquetDrive drive = scenario_drive(s, bare.mean_nn);
  const CouplingMatrix dressed = dressed_matrix(bare, drive);
  io::write_json(out / "dressed.json", io::to_json(dressed));
  io::write_text(out / "dressed.csv", io::coupling_csv(dressed));
  json j = {{"drive", io::to_json(drive)}, {"mean_nn_rad_s", dressed.mean_nn}};
  if (bare.size() % 2 == 0) {
    const SublatticeBlocks b = sublattice_blocks(dressed, bare);
    j["aa_bb_mismatch"] = b.aa_bb_mismatch;
    j["dimerization_available"] = b.available;
    if (b.available) j["dimerization"] = io::to_json(b.dimerization);
  } else {
    j["dimerization_available"] = false;
  }
  io::write_json(out / "sublattice.json", j);
  return j;
}

json write_tomography(const Scenario& s, const fs::path& out) {
  const CouplingMatrix bare = bare_matrix(s);
  const FloquetDrive drive = scenario_drive(s, bare.mean_nn);
  const CouplingMatrix dressed = dressed_matrix(bare, drive);
  std::vector<std::pair<int, int>> bonds = s.tomography.bonds;
  if (bonds.empty())
    for (int i = 1; i < static_cast<int>(bare.size()); ++i) bonds.emplace_back(i, i + 1);
  json rows = json::array();
  std::string csv = "i,j,j_fit_rad_s,gamma_fit_rad_s,rms,suppressed,j_rep_bare,j_rep_dressed,status\n";
  for (const auto& [i, j] : bonds) {
    const double rep_bare = bond_rep(std::abs(bare.values(i - 1, j - 1)));
    const double rep_dressed = bond_rep(std::abs(dressed.values(i - 1, j - 1)));
    json r;
    try {
      const TomographyResult t =
          bond_tomography(bare, drive, i, j, s.tomography.tau_max, s.tomography.n_samples, s.tol);
      r = io::to_json(t);
      r["status"] = "ok";
      csv += std::to_string(i) + "," + std::to_string(j) + "," + io::format_number(t.j_fit) + "," +
             io::format_number(t.gamma_fit) + "," + io::format_number(t.rms) + "," + (t.suppressed ? "1" : "0") +
             "," + io::format_number(rep_bare) + "," + io::format_number(rep_dressed) + ",ok\n";
    } catch (const NumericalError& e) {
      r = {{"i", i}, {"j", j}, {"status", "failed"}, {"error", e.what()}, {"rms", e.residual()}};
      csv += std::to_string(i) + "," + std::to_string(j) + ",nan,nan," + io::format_number(e.residual()) +
             ",0," + io::format_number(rep_bare) + "," + io::format_number(rep_dressed) + ",failed\n";
    }
    r["j_rep_bare"] = rep_bare;
    r["j_rep_dressed"] = rep_dressed;
    rows.push_back(r);
  }
  json j = {{"drive", io::to_json(drive)},
            {"tau_max", s.tomography.tau_max},
            {"tol", s.tol},
            {"bonds", rows}};
  io::write_json(out / "tomography.json", j);
  io::write_text(out / "tomography.csv", csv);
  return j;
}

json write_spectrum(const Scenario& s, const fs::path& out) {
  const CouplingMatrix bare = bare_matrix(s);
  const FloquetDrive drive = scenario_drive(s, bare.mean_nn);
  const CouplingMatrix dressed = dressed_matrix(bare, drive);
  json j = io::to_json(edge_state_spectrum(dressed));
  j["drive"] = io::to_json(drive);

  std::vector<double> phis, etas;
  for (const auto& axis : s.scan) {
    if (axis.name == "phi") phis = axis.values;
    if (axis.name == "phi_over_pi")
      for (double v : axis.values) phis.push_back(std::numbers::pi * v);
    if (axis.name == "eta_bar") etas = axis.values;
  }
  if (phis.empty())
    for (int k = 0; k < 8; ++k) phis.push_back(std::numbers::pi * k / 8.0);
  if (etas.empty()) etas.push_back(s.eta_bar);
  const auto rows = zak_sweep(band_profile(bare), phis, etas);
  io::write_text(out / "zak_sweep.csv", io::zak_sweep_csv(rows));
  io::write_json(out / "spectrum.json", j);
  return j;
}

bool is_export_kind(const std::string& kind) {
  return kind == "heatmap_svg" || kind == "csv_wide" || kind == "csv_long";
}

std::vector<fs::path> export_bundle(const fs::path& bundle, const std::string& kind) {
  if (!is_export_kind(kind))
    throw ConfigError("export: unknown kind '" + kind + "' (expected heatmap_svg, csv_wide, csv_long)");
  const fs::path mpath = bundle / "manifest.json";
  if (!fs::exists(mpath)) throw ConfigError("export: no manifest.json in " + bundle.string());
  json manifest;
  try {
    manifest = json::parse(io::read_text(mpath));
  } catch (const json::exception& e) {
    throw ConfigError("export: unreadable manifest: " + std::string(e.what()));
  }
  std::vector<fs::path> written;
  for (const auto& p : manifest.at("points")) {
    if (p.at("status") != "ok") continue;
    const fs::path dir = bundle / p.at("dir").get<std::string>();
    const Trajectory traj = io::read_trajectory_csv(io::read_text(dir / "trajectory.csv"));
    fs::path file;
    if (kind == "heatmap_svg") {
      file = dir / "heatmap.svg";
      io::write_text(file, io::heatmap_svg(traj, point_title(manifest.at("name").get<std::string>(), p.at("params"))));
    } else if (kind == "csv_wide") {
      file = dir / "trajectory_wide.csv";
      io::write_text(file, io::trajectory_csv(traj));
    } else {
      file = dir / "trajectory_long.csv";
      io::write_text(file, io::trajectory_csv_long(traj));
    }
    written.push_back(file);
  }
  return written;
}

}  // namespace ionssh
