// ionssh: command-line front end.
//
//   ionssh <verb> --config PATH [--out DIR] [--workers N] [--seed U64] [--tol FLOAT]
//   ionssh export --out BUNDLE --kind heatmap_svg|csv_wide|csv_long
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ionssh/error.hpp"
#include "ionssh/io.hpp"
#include "ionssh/runner.hpp"
#include "ionssh/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ionssh;

namespace {

struct Flags {
  std::string config;
  std::string out;
  int workers = 0;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string kind;
};

Scenario load(const Flags& f) {
  if (f.config.empty()) throw ConfigError("--config PATH is required");
  json doc = load_json(f.config);
  json& cfg = doc.is_object() && doc.contains("config") && doc.contains("config_hash") ? doc["config"] : doc;
  if (!cfg.is_object()) throw ConfigError(f.config + ": expected a JSON object");
  if (f.seed) cfg["seed"] = *f.seed;
  if (f.tol) cfg["tol"] = *f.tol;
  try {
    return parse_scenario(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(f.config + ": " + e.what());
  }
}

fs::path out_dir(const Flags& f, const Scenario& s, const std::string& verb) {
  if (!f.out.empty()) return f.out;
  const fs::path base = s.output_dir.empty() ? fs::path("out") / s.name : fs::path(s.output_dir);
  return verb == "run" ? base : base / verb;
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

int checked(const Scenario& s) {
  const ValidationReport rep = validate_scenario(s);
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  if (!rep.ok()) {
    for (const auto& e : rep.errors) std::cerr << "error: " << e << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

int dispatch(const std::string& verb, const Flags& f) {
  if (verb == "validate") {
    if (f.config.empty()) throw ConfigError("--config PATH is required");
    ValidationReport rep;
    try {
      rep = validate_scenario(load(f));
    } catch (const ConfigError& e) {
      rep.errors.push_back(e.what());
    }
    print(rep.to_json());
    return rep.ok() ? kExitOk : kExitConfig;
  }
  if (verb == "export") {
    if (f.out.empty()) throw ConfigError("export: --out BUNDLE is required");
    if (f.kind.empty()) throw ConfigError("export: --kind is required (heatmap_svg, csv_wide, csv_long)");
    json files = json::array();
    for (const auto& p : export_bundle(f.out, f.kind)) files.push_back(p.string());
    print({{"kind", f.kind}, {"files", files}});
    return kExitOk;
  }

  const Scenario s = load(f);
  if (const int rc = checked(s); rc != kExitOk) return rc;
  const fs::path out = out_dir(f, s, verb);
  fs::create_directories(out);

  if (verb == "modes") {
    const json j = write_modes(s, out);
    print({{"out", out.string()}, {"n_ions", j.at("n_ions")}, {"equilibrium_residual", j.at("equilibrium_residual")}});
  } else if (verb == "coupling") {
    print(write_coupling(s, out));
  } else if (verb == "dress") {
    print(write_dressing(s, out));
  } else if (verb == "tomography") {
    const json j = write_tomography(s, out);
    print(j.at("bonds"));
    for (const auto& b : j.at("bonds"))
      if (b.at("status") != "ok") return kExitNumerical;
  } else if (verb == "spectrum") {
    const json j = write_spectrum(s, out);
    print({{"gapless", j.at("gapless")}, {"midgap_count", j.at("midgap_count")}, {"out", out.string()}});
  } else if (verb == "evolve") {
    if (!s.scan.empty()) std::cerr << "warning: evolve ignores the scan axes; use run\n";
    Scenario base = s;
    base.scan.clear();
    const PointResult r = run_point(base, ScanPoint{}, out);
    if (!r.ok) {
      std::cerr << "error: " << r.error << "\n";
      return r.exit_code;
    }
    print({{"out", out.string()}, {"m_final", r.analysis.at("m_final")}});
  } else if (verb == "run") {
    const RunResult rr = run_scenario(s, {out, f.workers});
    json pts = json::array();
    for (const auto& r : rr.points) {
      pts.push_back({{"dir", r.dir}, {"status", r.ok ? "ok" : "failed"}});
      if (!r.ok) std::cerr << "error: " << r.dir << ": " << r.error << "\n";
    }
    print({{"out", out.string()}, {"points", pts}});
    return rr.exit_code;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floquet-dressed long-range XY spin chains in trapped-ion crystals"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "Scenario JSON (or a run manifest)");
  app.add_option("--out", f.out, "Output directory (export: the run bundle)");
  app.add_option("--workers", f.workers, "Scan worker threads (default: hardware concurrency)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", f.seed, "Seed for shot sampling (overrides the scenario)");
  app.add_option("--tol", f.tol, "Integrator tolerance (overrides the scenario)")->check(CLI::PositiveNumber);

  const std::pair<const char*, const char*> verbs[] = {
      {"modes", "Equilibrium positions and radial modes"},
      {"coupling", "Bare coupling matrix and band fit"},
      {"dress", "Floquet-dressed matrix and sublattice dimerization"},
      {"evolve", "One trajectory for the scenario's base point"},
      {"tomography", "Two-site bond tomography under the full drive"},
      {"spectrum", "Edge-state spectrum and Zak-phase sweep"},
      {"run", "Full pipeline over the scan grid"},
      {"validate", "Schema and physics checks, no side effects"},
      {"export", "Plot data from a run bundle"}};
  for (const auto& [name, help] : verbs) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (std::string(name) == "export") sub->add_option("--kind", f.kind, "heatmap_svg, csv_wide or csv_long");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  try {
    return dispatch(verb, f);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
