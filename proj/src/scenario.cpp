#include "ionssh/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "ionssh/basis.hpp"
#include "ionssh/constants.hpp"
#include "ionssh/error.hpp"
#include "ionssh/hamiltonian.hpp"

namespace ionssh {

using nlohmann::json;

std::string to_string(Model m) {
  switch (m) {
    case Model::xy_effective: return "xy_effective";
    case Model::full_drive: return "full_drive";
    case Model::free_fermion: return "free_fermion";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) fail(where.empty() ? k : where + "." + k, "unknown field");
  }
}

std::string path(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

double number(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) fail(path(where, key), "required");
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path(where, key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path(where, key), "must be finite");
  return x;
}

double number_or(const json& obj, const std::string& where, const std::string& key, double fallback) {
  return obj.contains(key) ? number(obj, where, key) : fallback;
}

int integer(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) fail(path(where, key), "required");
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path(where, key), "expected an integer");
  return v.get<int>();
}

std::string text(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) fail(path(where, key), "required");
  const json& v = obj.at(key);
  if (!v.is_string()) fail(path(where, key), "expected a string");
  return v.get<std::string>();
}

bool flag(const json& obj, const std::string& where, const std::string& key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) fail(path(where, key), "expected true or false");
  return obj.at(key).get<bool>();
}

std::vector<double> numbers(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) fail(path(where, key), "required");
  const json& v = obj.at(key);
  if (!v.is_array()) fail(path(where, key), "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(path(where, key) + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

TrapConfig parse_trap(const json& t, const std::string& where) {
  only_keys(t, where, {"n_ions", "com_radial_mhz", "c2_ev_mm2", "c4_ev_mm4", "mass_amu"});
  TrapConfig cfg;
  cfg.n_ions = integer(t, where, "n_ions");
  cfg.com_radial_freq = mhz_to_rad_s(number(t, where, "com_radial_mhz"));
  cfg.axial_c2 = number(t, where, "c2_ev_mm2");
  cfg.axial_c4 = number_or(t, where, "c4_ev_mm4", 0.0);
  if (t.contains("mass_amu")) cfg.ion_mass = number(t, where, "mass_amu") * cfg.constants.atomic_mass_unit;
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    fail(where, e.what());
  }
  return cfg;
}

CouplingSource parse_coupling(const json& c) {
  const std::string w = "coupling";
  only_keys(c, w,
            {"preset", "trap", "active_sites", "relative_rabi", "detuning_khz", "detuning_reference",
             "mean_nn_khz", "stagger", "profile", "matrix"});
  const int sources = int(c.contains("preset")) + int(c.contains("trap")) + int(c.contains("profile")) +
                      int(c.contains("matrix"));
  if (sources != 1) fail(w, "exactly one of preset, trap, profile, matrix is required");

  CouplingSource src;
  if (c.contains("profile")) {
    const json& p = c.at("profile");
    const std::string pw = w + ".profile";
    only_keys(p, pw, {"type", "j_khz", "xi", "sites"});
    if (text(p, pw, "type") != "exponential") fail(pw + ".type", "only \"exponential\" is supported");
    src.kind = CouplingSource::Kind::profile;
    src.profile_j = khz_to_rad_s(number(p, pw, "j_khz"));
    src.profile_xi = number(p, pw, "xi");
    src.profile_sites = integer(p, pw, "sites");
    if (!(src.profile_j > 0.0)) fail(pw + ".j_khz", "must be > 0");
    if (!(src.profile_xi > 0.0)) fail(pw + ".xi", "must be > 0");
    if (src.profile_sites < 2) fail(pw + ".sites", "must be >= 2");
    src.label = "exponential";
    return src;
  }
  if (c.contains("matrix")) {
    const json& m = c.at("matrix");
    const std::string mw = w + ".matrix";
    only_keys(m, mw, {"values_khz", "label"});
    if (!m.contains("values_khz") || !m.at("values_khz").is_array()) fail(mw + ".values_khz", "expected rows");
    const json& rows = m.at("values_khz");
    const std::size_t n = rows.size();
    if (n < 2) fail(mw + ".values_khz", "need at least 2 sites");
    src.kind = CouplingSource::Kind::matrix;
    src.matrix = RealMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!rows[i].is_array() || rows[i].size() != n)
        fail(mw + ".values_khz[" + std::to_string(i) + "]", "matrix must be square");
      for (std::size_t j = 0; j < n; ++j) {
        if (!rows[i][j].is_number()) fail(mw + ".values_khz", "expected numbers");
        src.matrix(i, j) = khz_to_rad_s(rows[i][j].get<double>());
      }
    }
    try {
      (void)CouplingMatrix::from_values(src.matrix, "explicit");
    } catch (const ConfigError& e) {
      fail(mw, e.what());
    }
    src.label = m.contains("label") ? text(m, mw, "label") : "explicit";
    return src;
  }

  src.kind = CouplingSource::Kind::preset;
  if (c.contains("preset")) {
    try {
      src.preset = chain_preset(text(c, w, "preset"));
    } catch (const ConfigError& e) {
      fail(w + ".preset", e.what());
    }
    for (const char* k : {"trap", "active_sites", "relative_rabi", "detuning_reference"})
      if (c.contains(k)) fail(path(w, k), "not allowed together with a preset");
  } else {
    src.preset.name = "custom";
    src.preset.trap = parse_trap(c.at("trap"), w + ".trap");
    if (!c.contains("active_sites") || !c.at("active_sites").is_array())
      fail(w + ".active_sites", "required (1-based ion indices)");
    for (const auto& s : c.at("active_sites")) {
      if (!s.is_number_integer()) fail(w + ".active_sites", "expected integers");
      const int ion = s.get<int>();
      if (ion < 1 || ion > src.preset.trap.n_ions) fail(w + ".active_sites", "ion index out of range");
      if (!src.preset.active_sites.empty() && ion - 1 <= src.preset.active_sites.back())
        fail(w + ".active_sites", "must be strictly ascending");
      src.preset.active_sites.push_back(ion - 1);
    }
    if (src.preset.active_sites.size() < 2) fail(w + ".active_sites", "need at least 2 spins");
    src.preset.relative_rabi = c.contains("relative_rabi")
                                   ? numbers(c, w, "relative_rabi")
                                   : std::vector<double>(src.preset.active_sites.size(), 1.0);
    if (src.preset.relative_rabi.size() != src.preset.active_sites.size())
      fail(w + ".relative_rabi", "one entry per active site required");
    for (double r : src.preset.relative_rabi)
      if (!(r > 0.0)) fail(w + ".relative_rabi", "entries must be > 0");
    if (!c.contains("detuning_khz")) fail(w + ".detuning_khz", "required");
    if (!c.contains("mean_nn_khz")) fail(w + ".mean_nn_khz", "required");
    const std::string ref = c.contains("detuning_reference") ? text(c, w, "detuning_reference") : "zigzag";
    if (ref != "zigzag" && ref != "com") fail(w + ".detuning_reference", "expected \"zigzag\" or \"com\"");
    src.preset.detuning_from_com = ref == "com";
  }
  if (c.contains("detuning_khz")) src.preset.detuning = khz_to_rad_s(number(c, w, "detuning_khz"));
  if (c.contains("mean_nn_khz")) src.preset.mean_nn = khz_to_rad_s(number(c, w, "mean_nn_khz"));
  src.preset.stagger = flag(c, w, "stagger", src.preset.stagger);
  if (!(src.preset.mean_nn > 0.0)) fail(w + ".mean_nn_khz", "must be > 0");
  src.label = src.preset.name;
  return src;
}

InitialState parse_initial(const json& s) {
  const std::string w = "initial_state";
  only_keys(s, w, {"type", "site", "bits"});
  InitialState st;
  const std::string type = text(s, w, "type");
  if (type == "single_excitation") {
    st.kind = InitialState::Kind::single_excitation;
    st.site = s.contains("site") ? integer(s, w, "site") : 1;
  } else if (type == "neel") {
    st.kind = InitialState::Kind::neel;
  } else if (type == "domain_wall") {
    st.kind = InitialState::Kind::domain_wall;
  } else if (type == "bitstring") {
    st.kind = InitialState::Kind::bitstring;
    st.bits = text(s, w, "bits");
    if (st.bits.empty() || st.bits.find_first_not_of("01") != std::string::npos)
      fail(w + ".bits", "expected a string of 0 and 1");
  } else {
    fail(w + ".type", "expected single_excitation, neel, domain_wall or bitstring");
  }
  return st;
}

}  // namespace

Scenario parse_scenario(const json& input) {
  const json& doc = input.is_object() && input.contains("config") && input.contains("config_hash")
                        ? input.at("config")
                        : input;
  only_keys(doc, "",
            {"name", "coupling", "drive", "model", "initial_state", "tau_max", "n_times", "tol", "scan",
             "analyses", "shots", "tomography", "seed", "output_dir"});
  Scenario s;
  s.config = doc;
  s.name = doc.contains("name") ? text(doc, "", "name") : "scenario";
  if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos) fail("name", "must be a plain file name");
  if (!doc.contains("coupling")) fail("coupling", "required");
  s.coupling = parse_coupling(doc.at("coupling"));

  if (doc.contains("drive")) {
    const json& d = doc.at("drive");
    only_keys(d, "drive", {"eta_bar", "phi", "phi_over_pi", "b0_over_j", "omega_over_j"});
    s.eta_bar = number_or(d, "drive", "eta_bar", 0.0);
    if (d.contains("phi") && d.contains("phi_over_pi")) fail("drive", "give phi or phi_over_pi, not both");
    s.phi = d.contains("phi_over_pi") ? std::numbers::pi * number(d, "drive", "phi_over_pi")
                                      : number_or(d, "drive", "phi", 0.0);
    s.b0_over_j = number_or(d, "drive", "b0_over_j", s.b0_over_j);
    s.omega_over_j = number_or(d, "drive", "omega_over_j", s.omega_over_j);
    if (s.eta_bar < 0.0) fail("drive.eta_bar", "must be >= 0");
    if (!(s.omega_over_j > 0.0)) fail("drive.omega_over_j", "must be > 0");
  }

  if (doc.contains("model")) {
    const std::string m = text(doc, "", "model");
    if (m == "xy_effective") s.model = Model::xy_effective;
    else if (m == "full_drive") s.model = Model::full_drive;
    else if (m == "free_fermion") s.model = Model::free_fermion;
    else fail("model", "expected xy_effective, full_drive or free_fermion");
  }
  if (doc.contains("initial_state")) s.initial = parse_initial(doc.at("initial_state"));

  s.tau_max = number_or(doc, "", "tau_max", s.tau_max);
  if (doc.contains("n_times")) s.n_times = integer(doc, "", "n_times");
  s.tol = number_or(doc, "", "tol", s.tol);
  if (!(s.tau_max > 0.0)) fail("tau_max", "tau grid must be strictly increasing (tau_max > 0)");
  if (s.n_times < 2) fail("n_times", "must be >= 2");
  if (!(s.tol > 0.0) || s.tol >= 1e-2) fail("tol", "must lie in (0, 1e-2)");

  if (doc.contains("scan")) {
    const json& sc = doc.at("scan");
    if (!sc.is_array()) fail("scan", "expected a list of axes");
    if (sc.empty()) fail("scan", "empty scan list");
    std::set<std::string> seen;
    for (std::size_t a = 0; a < sc.size(); ++a) {
      const std::string w = "scan[" + std::to_string(a) + "]";
      only_keys(sc[a], w, {"axis", "values"});
      ScanAxis axis{text(sc[a], w, "axis"), numbers(sc[a], w, "values")};
      if (axis.name != "eta_bar" && axis.name != "phi" && axis.name != "phi_over_pi" && axis.name != "site" &&
          axis.name != "xi")
        fail(w + ".axis", "expected eta_bar, phi, phi_over_pi, site or xi");
      if (axis.values.empty()) fail(w + ".values", "empty scan axis");
      if (!seen.insert(axis.name == "phi_over_pi" ? "phi" : axis.name).second) fail(w + ".axis", "repeated axis");
      if (axis.name == "site") {
        if (s.initial.kind != InitialState::Kind::single_excitation)
          fail(w + ".axis", "a site scan needs a single_excitation initial state");
        for (double v : axis.values)
          if (v != std::floor(v)) fail(w + ".values", "sites must be integers");
      }
      if (axis.name == "xi" && s.coupling.kind != CouplingSource::Kind::profile)
        fail(w + ".axis", "an xi scan needs an exponential profile");
      if (axis.name == "eta_bar")
        for (double v : axis.values)
          if (v < 0.0) fail(w + ".values", "eta_bar must be >= 0");
      s.scan.push_back(std::move(axis));
    }
  }

  if (doc.contains("analyses")) {
    const json& an = doc.at("analyses");
    if (!an.is_array()) fail("analyses", "expected a list of names");
    for (const auto& a : an) {
      if (!a.is_string()) fail("analyses", "expected strings");
      const std::string n = a.get<std::string>();
      if (n == "spreading_rate") s.analyses.spreading = true;
      else if (n == "late_time") s.analyses.late_time = true;
      else if (n == "heatmap") s.analyses.heatmap = true;
      else if (n == "free_fermion_compare") s.analyses.free_fermion_compare = true;
      else if (n == "edge_spectrum") s.analyses.edge_spectrum = true;
      else if (n == "zak") s.analyses.zak = true;
      else if (n == "domainwall") s.analyses.domainwall = true;
      else fail("analyses", "unknown analysis '" + n + "'");
    }
  }
  if (doc.contains("shots")) {
    s.analyses.shots = integer(doc, "", "shots");
    if (s.analyses.shots < 0) fail("shots", "must be >= 0");
  }
  if (doc.contains("tomography")) {
    const json& t = doc.at("tomography");
    only_keys(t, "tomography", {"bonds", "tau_max", "n_samples"});
    if (t.contains("bonds")) {
      if (!t.at("bonds").is_array()) fail("tomography.bonds", "expected [[i, j], ...]");
      for (const auto& b : t.at("bonds")) {
        if (!b.is_array() || b.size() != 2 || !b[0].is_number_integer() || !b[1].is_number_integer())
          fail("tomography.bonds", "expected [[i, j], ...] with integer sites");
        s.tomography.bonds.emplace_back(b[0].get<int>(), b[1].get<int>());
      }
    }
    s.tomography.tau_max = number_or(t, "tomography", "tau_max", s.tomography.tau_max);
    if (t.contains("n_samples")) s.tomography.n_samples = integer(t, "tomography", "n_samples");
    if (!(s.tomography.tau_max > 0.0)) fail("tomography.tau_max", "must be > 0");
    if (s.tomography.n_samples < 8) fail("tomography.n_samples", "must be >= 8");
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) fail("seed", "expected an unsigned integer");
    s.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("output_dir")) s.output_dir = text(doc, "", "output_dir");

  const int l = chain_length(s);
  if (s.initial.kind == InitialState::Kind::single_excitation && (s.initial.site < 1 || s.initial.site > l))
    fail("initial_state.site", "outside 1.." + std::to_string(l));
  if (s.initial.kind == InitialState::Kind::bitstring && static_cast<int>(s.initial.bits.size()) != l)
    fail("initial_state.bits", "length must equal the chain length " + std::to_string(l));
  for (const auto& axis : s.scan)
    if (axis.name == "site")
      for (double v : axis.values)
        if (v < 1 || v > l) fail("scan.site", "site outside 1.." + std::to_string(l));
  for (const auto& [i, j] : s.tomography.bonds)
    if (i < 1 || j < 1 || i > l || j > l || i == j) fail("tomography.bonds", "sites must be distinct and in 1..L");
  return s;
}

json load_json(const std::string& file) {
  std::ifstream f(file, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + file);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    // e.what() already carries "at line L, column C".
    throw ConfigError(file + ": " + e.what());
  }
}

Scenario load_scenario(const std::string& file) {
  const json doc = load_json(file);
  try {
    return parse_scenario(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(file + ": " + e.what());
  }
}

std::vector<ScanPoint> scan_points(const Scenario& s) {
  std::vector<ScanPoint> pts{ScanPoint{}};
  for (const auto& axis : s.scan) {
    std::vector<ScanPoint> next;
    for (const auto& p : pts)
      for (double v : axis.values) {
        ScanPoint q = p;
        q.params.emplace_back(axis.name, v);
        next.push_back(std::move(q));
      }
    pts = std::move(next);
  }
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i].index = i;
  return pts;
}

Scenario at_point(const Scenario& s, const ScanPoint& p) {
  Scenario out = s;
  out.scan.clear();
  for (const auto& [name, v] : p.params) {
    if (name == "eta_bar") out.eta_bar = v;
    else if (name == "phi") out.phi = v;
    else if (name == "phi_over_pi") out.phi = std::numbers::pi * v;
    else if (name == "site") out.initial.site = static_cast<int>(v);
    else if (name == "xi") out.coupling.profile_xi = v;
  }
  return out;
}

int chain_length(const Scenario& s) {
  switch (s.coupling.kind) {
    case CouplingSource::Kind::preset: return s.coupling.preset.size();
    case CouplingSource::Kind::profile: return s.coupling.profile_sites;
    case CouplingSource::Kind::matrix: return static_cast<int>(s.coupling.matrix.rows());
  }
  return 0;
}

json ValidationReport::to_json() const {
  return {{"ok", ok()}, {"errors", errors}, {"warnings", warnings}, {"estimates", estimates}};
}

namespace {

int initial_up_count(const Scenario& s, int l) {
  switch (s.initial.kind) {
    case InitialState::Kind::single_excitation: return 1;
    case InitialState::Kind::neel: return (l + 1) / 2;
    case InitialState::Kind::domain_wall: return l / 2;
    case InitialState::Kind::bitstring: return static_cast<int>(std::count(s.initial.bits.begin(), s.initial.bits.end(), '1'));
  }
  return 0;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

ValidationReport validate_scenario(const Scenario& s) {
  ValidationReport rep;
  const int l = chain_length(s);
  std::ostringstream msg;

  if (s.b0_over_j < kRwaMinB0 || s.omega_over_j < kRwaMinOmega) {
    msg << "RWA sanity: B0 = " << s.b0_over_j << " J and omega = " << s.omega_over_j
        << " J; the effective XY model assumes B0 >= " << kRwaMinB0 << " J and omega >= " << kRwaMinOmega << " J";
    rep.warnings.push_back(msg.str());
  }

  double dim = 0.0, nnz = 0.0;
  std::string sector;
  if (s.model == Model::full_drive) {
    sector = "full";
    if (l > kMaxFullDriveSites) {
      std::ostringstream e;
      e << "sector policy: model full_drive needs the full 2^L space and is limited to L <= " << kMaxFullDriveSites
        << " (L = " << l << "); use xy_effective, which runs in the fixed-magnetization sector";
      rep.errors.push_back(e.str());
    }
    dim = std::ldexp(1.0, l);
    nnz = dim * l * (l - 1) / 2.0;
  } else if (s.model == Model::xy_effective) {
    const int up = initial_up_count(s, l);
    sector = "fixed_magnetization(" + std::to_string(up) + ")";
    dim = binomial(l, up);
    nnz = dim * up * (l - up);
    if (l > Basis::kMaxSites) rep.errors.push_back("chain longer than " + std::to_string(Basis::kMaxSites) + " sites");
  } else {
    sector = "one_body";
    dim = l;
    nnz = static_cast<double>(l) * l;
  }
  if (s.model != Model::free_fermion && nnz > static_cast<double>(kDefaultNnzCap)) {
    std::ostringstream e;
    e << "sparse operator needs ~" << nnz << " nonzeros, above the cap " << kDefaultNnzCap;
    rep.errors.push_back(e.str());
  }
  // Integrator working set: state, seven stages, error and dense-output
  // buffers (complex doubles) plus the CSR arrays.
  const double bytes = dim * 16.0 * 11.0 + nnz * 12.0;
  rep.estimates = {{"n_sites", l},
                   {"model", to_string(s.model)},
                   {"sector", sector},
                   {"dimension", dim},
                   {"nonzeros", nnz},
                   {"memory_bytes", bytes},
                   {"scan_points", scan_points(s).size()}};

  if (s.analyses.domainwall && l % 2 != 0) rep.errors.push_back("analyses.domainwall: needs an even chain length");
  if (s.analyses.zak && l % 2 != 0) rep.warnings.push_back("analyses.zak: odd chain length, band profile truncated");
  if (s.analyses.late_time && s.tau_max < 2.0)
    rep.errors.push_back("analyses.late_time: tau_max must cover the window [1.5, 2]");
  return rep;
}

ValidationReport validate_file(const std::string& file) {
  try {
    return validate_scenario(load_scenario(file));
  } catch (const ConfigError& e) {
    ValidationReport rep;
    rep.errors.push_back(e.what());
    return rep;
  }
}

}  // namespace ionssh
