#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ionssh/coupling.hpp"
#include "ionssh/error.hpp"
#include "ionssh/io.hpp"

using namespace ionssh;
using namespace ionssh::io;

TEST_CASE("numbers round-trip through text") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng) * std::pow(10.0, k % 40 - 20);
    CHECK(parse_number(format_number(x)) == x);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(std::isnan(parse_number("nan")));
  CHECK(parse_number("-inf") == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(parse_number("1.5x"), ConfigError);
  CHECK_THROWS_AS(parse_number(""), ConfigError);
}

TEST_CASE("coupling matrix JSON round trip") {
  const CouplingMatrix cm = exponential_profile(khz_to_rad_s(0.25), 0.7, 6);
  const json j = to_json(cm);
  const CouplingMatrix back = coupling_from_json(json::parse(j.dump()));
  CHECK(back.values == cm.values);
  CHECK(back.mean_nn == cm.mean_nn);
  CHECK(back.label == cm.label);
  const std::string csv = coupling_csv(cm);
  CHECK(csv.rfind("site,1,2,3,4,5,6\n", 0) == 0);
}

TEST_CASE("trajectory CSV round trip") {
  Trajectory tr;
  tr.tau = tau_grid(2.0, 11);
  tr.magnetization = RealMatrix(11, 3);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& x : tr.magnetization.data()) x = u(rng);
  const std::string text = trajectory_csv(tr);
  CHECK(text.rfind("tau,m_1,m_2,m_3\n", 0) == 0);
  const Trajectory back = read_trajectory_csv(text);
  CHECK(back.tau == tr.tau);
  CHECK(back.magnetization == tr.magnetization);
  CHECK(trajectory_csv(back) == text);

  const std::string lng = trajectory_csv_long(tr);
  CHECK(std::count(lng.begin(), lng.end(), '\n') == 1 + 11 * 3);
  CHECK_THROWS_AS(read_trajectory_csv("tau,m_1\n0,1,2\n"), ConfigError);

  const std::string svg = heatmap_svg(tr, "t");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(heatmap_svg(tr, "t") == svg);
}

TEST_CASE("FNV-1a reference vectors") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}
