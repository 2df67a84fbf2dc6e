#include <doctest.h>

#include <filesystem>
#include <map>
#include <string>

#include "ionssh/error.hpp"
#include "ionssh/io.hpp"
#include "ionssh/runner.hpp"
#include "ionssh/scenario.hpp"

namespace fs = std::filesystem;
using namespace ionssh;
using nlohmann::json;

namespace {

json small_config() {
  return json::parse(R"({
    "name": "small",
    "coupling": {"profile": {"type": "exponential", "j_khz": 0.25, "xi": 1.0, "sites": 6}},
    "drive": {"eta_bar": 0.5, "phi_over_pi": 0.25},
    "model": "xy_effective",
    "initial_state": {"type": "single_excitation", "site": 1},
    "tau_max": 2.0,
    "n_times": 41,
    "scan": [{"axis": "eta_bar", "values": [0.0, 0.5, 1.0]}],
    "analyses": ["late_time", "heatmap", "spreading_rate"],
    "shots": 50,
    "seed": 11
  })");
}

std::string error_of(const json& doc) {
  try {
    (void)parse_scenario(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ionssh_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file() && e.path().filename() != "timings.json")
      out[fs::relative(e.path(), root).string()] = io::read_text(e.path());
  return out;
}

}  // namespace

TEST_CASE("schema errors name the offending field") {
  json doc = small_config();
  doc["drive"]["eta"] = 1.0;
  CHECK(error_of(doc).find("drive.eta") != std::string::npos);

  doc = small_config();
  doc["tau_max"] = -1.0;
  CHECK(error_of(doc).find("tau_max") != std::string::npos);

  doc = small_config();
  doc["scan"] = json::array();
  CHECK(error_of(doc).find("scan") != std::string::npos);

  doc = small_config();
  doc["analyses"].push_back("magic");
  CHECK(error_of(doc).find("magic") != std::string::npos);

  doc = small_config();
  doc["initial_state"]["site"] = 9;
  CHECK(error_of(doc).find("initial_state.site") != std::string::npos);

  doc = small_config();
  doc["coupling"]["preset"] = "config1";
  CHECK(error_of(doc).find("coupling") != std::string::npos);

  CHECK(error_of(small_config()).empty());
}

TEST_CASE("a manifest is read back as its config") {
  const json cfg = small_config();
  const json manifest = {{"config", cfg}, {"config_hash", config_hash(cfg)}};
  const Scenario a = parse_scenario(cfg), b = parse_scenario(manifest);
  CHECK(a.config == b.config);
  CHECK(config_hash(cfg) == config_hash(json::parse(cfg.dump(4))));
}

TEST_CASE("validation rules") {
  Scenario s = parse_scenario(small_config());
  ValidationReport r = validate_scenario(s);
  CHECK(r.ok());
  CHECK(r.warnings.empty());
  CHECK(r.estimates.at("dimension") == 6);

  s.b0_over_j = 2.0;
  r = validate_scenario(s);
  CHECK(r.ok());
  CHECK(r.warnings.size() == 1);

  json doc = small_config();
  doc["coupling"]["profile"]["sites"] = 22;
  doc["model"] = "full_drive";
  r = validate_scenario(parse_scenario(doc));
  CHECK_FALSE(r.ok());

  doc = small_config();
  doc["tau_max"] = 1.0;
  r = validate_scenario(parse_scenario(doc));
  CHECK_FALSE(r.ok());

  doc = small_config();
  doc["coupling"]["profile"]["sites"] = 7;
  doc["analyses"] = {"domainwall"};
  r = validate_scenario(parse_scenario(doc));
  CHECK_FALSE(r.ok());
}

TEST_CASE("scan points: cartesian product, first axis slowest") {
  json doc = small_config();
  doc["scan"] = json::parse(R"([{"axis": "eta_bar", "values": [0, 1]}, {"axis": "site", "values": [1, 2, 3]}])");
  const Scenario s = parse_scenario(doc);
  const auto pts = scan_points(s);
  REQUIRE(pts.size() == 6);
  CHECK(pts[0].params[0].second == 0.0);
  CHECK(pts[2].params[1].second == 3.0);
  CHECK(pts[3].params[0].second == 1.0);
  const Scenario p = at_point(s, pts[4]);
  CHECK(p.eta_bar == 1.0);
  CHECK(p.initial.site == 2);
}

TEST_CASE("run output does not depend on the worker count") {
  const Scenario s = parse_scenario(small_config());
  const fs::path a = scratch("w1"), b = scratch("w3");
  const RunResult ra = run_scenario(s, {a, 1});
  const RunResult rb = run_scenario(s, {b, 3});
  CHECK(ra.exit_code == kExitOk);
  CHECK(rb.exit_code == kExitOk);
  const auto ta = tree(a), tb = tree(b);
  CHECK(ta.size() == tb.size());
  CHECK(ta == tb);
  CHECK(ta.count("manifest.json") == 1);
  CHECK(ta.count("point_002/shots.csv") == 1);
  CHECK(fs::exists(a / "timings.json"));

  // Plot export is idempotent and reproduces the run's own heatmap.
  const auto first = export_bundle(a, "heatmap_svg");
  const std::string svg = io::read_text(first.front());
  (void)export_bundle(a, "heatmap_svg");
  CHECK(io::read_text(first.front()) == svg);
  CHECK(svg == ta.at("point_000/heatmap.svg"));
  CHECK_THROWS_AS(export_bundle(a, "png"), ConfigError);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("a failing point leaves a marker and a config exit code") {
  json doc = small_config();
  doc["tau_max"] = 1.0;
  doc.erase("scan");
  const Scenario s = parse_scenario(doc);
  const fs::path dir = scratch("failed");
  const PointResult r = run_point(s, ScanPoint{}, dir);
  CHECK_FALSE(r.ok);
  CHECK(r.exit_code == kExitConfig);
  CHECK(fs::exists(dir / "FAILED"));
  fs::remove_all(dir);
}
