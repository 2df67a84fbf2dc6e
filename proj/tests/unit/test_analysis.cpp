#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ionssh/analysis.hpp"
#include "ionssh/coupling.hpp"
#include "ionssh/error.hpp"
#include "ionssh/floquet.hpp"

using namespace ionssh;
using std::numbers::pi;

namespace {

template <class F>
Trajectory fixture(int l, double tau_max, int n, F m) {
  Trajectory tr;
  tr.tau = tau_grid(tau_max, n);
  tr.magnetization = RealMatrix(n, l);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < l; ++j) tr.magnetization(k, j) = m(tr.tau[k], j);
  return tr;
}

CouplingMatrix ssh_chain(int l, double v, double w) {
  RealMatrix m(l, l);
  for (int i = 0; i + 1 < l; ++i) m(i, i + 1) = m(i + 1, i) = i % 2 == 0 ? v : w;
  return CouplingMatrix::from_values(m, "ssh");
}

CouplingMatrix reflected(const CouplingMatrix& cm) {
  const std::size_t l = cm.size();
  RealMatrix r(l, l);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j) r(i, j) = cm.values(l - 1 - i, l - 1 - j);
  return CouplingMatrix::from_values(r, "reflected");
}

CouplingMatrix random_matrix(int l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealMatrix v(l, l);
  for (int i = 0; i < l; ++i)
    for (int j = i + 1; j < l; ++j) v(i, j) = v(j, i) = u(rng) * std::exp(-(j - i - 1) / 1.5);
  return CouplingMatrix::from_values(v, "random");
}

}  // namespace

TEST_CASE("spreading rate of a linear front") {
  // Site j (0-based) reaches p = threshold at tau = j / 3 exactly.
  const double thr = 0.1;
  const Trajectory tr = fixture(10, 4.0, 4001, [&](double t, int j) {
    if (j == 0) return 1.0;
    const double p = std::clamp(thr + 0.5 * (t - j / 3.0), 0.0, 1.0);
    return 2.0 * p - 1.0;
  });
  const SpreadFit f = spreading_rate(tr, thr);
  CHECK(f.n_crossed == 9);
  CHECK(f.v_s == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(f.ci_low <= 3.0 + 1e-6);
  CHECK(f.ci_high >= 3.0 - 1e-6);
  CHECK(std::isnan(f.crossing_times[0]));
  CHECK(f.crossing_times[6] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("a frozen excitation has no spreading front") {
  const Trajectory tr = fixture(8, 2.0, 50, [](double, int j) { return j == 0 ? 1.0 : -1.0; });
  try {
    (void)spreading_rate(tr);
    FAIL("expected localized");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("localized") != std::string::npos);
  }
}

TEST_CASE("late-time averages") {
  const Trajectory c = fixture(4, 2.0, 201, [](double, int j) { return 0.1 * j - 0.2; });
  for (int j = 1; j <= 4; ++j) CHECK(late_time_average(c, j) == doctest::Approx(0.1 * (j - 1) - 0.2));
  // Linear in tau: trapezoid with interpolated window edges is exact.
  const Trajectory lin = fixture(2, 2.0, 7, [](double t, int) { return t; });
  CHECK(late_time_average(lin, 1) == doctest::Approx(1.75).epsilon(1e-14));
  CHECK(late_time_average(lin, 2, 0.1, 0.2) == doctest::Approx(0.15).epsilon(1e-14));
  const auto prof = late_time_profile(c);
  CHECK(prof.size() == 4);
  const Trajectory short_run = fixture(2, 1.0, 11, [](double, int) { return 0.0; });
  CHECK_THROWS_AS(late_time_average(short_run, 1), ConfigError);
  CHECK_THROWS_AS(late_time_average(c, 5), ConfigError);
}

TEST_CASE("cross-site mean, correlation and domain contrast") {
  CHECK(cross_site_mean({1.0, 2.0, 3.0, 4.0}, 2) == doctest::Approx((1.0 + 3.0 + 4.0) / 3.0));
  const std::vector<double> a{1, 2, 3, 4, 5}, b{2, 4, 6, 8, 10}, c{5, 4, 3, 2, 1};
  CHECK(pearson_correlation(a, b) == doctest::Approx(1.0));
  CHECK(pearson_correlation(a, c) == doctest::Approx(-1.0));
  const Trajectory wall = fixture(6, 2.0, 21, [](double, int j) { return j < 3 ? 1.0 : -1.0; });
  CHECK(domain_contrast(wall) == doctest::Approx(2.0));
  const Trajectory melted = fixture(6, 2.0, 21, [](double, int) { return 0.0; });
  CHECK(domain_contrast(melted) == 0.0);
  CHECK(site_series(wall, 4) == std::vector<double>(21, -1.0));
}

TEST_CASE("damped cosine fit recovers its parameters") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<double> x, y;
  for (int k = 0; k < 300; ++k) {
    x.push_back(k * 0.04);
    y.push_back(0.9 * std::exp(-0.3 * x.back()) * std::cos(pi * 1.7 * x.back()) + noise(rng));
  }
  const DampedCosineFit f = fit_damped_cosine(x, y);
  CHECK(f.j == doctest::Approx(1.7).epsilon(0.01));
  CHECK(f.gamma == doctest::Approx(0.3).epsilon(0.1));
  CHECK(f.amplitude == doctest::Approx(0.9).epsilon(0.05));
  CHECK(f.rms < 0.02);
  x[3] += 0.01;
  CHECK_THROWS_AS(fit_damped_cosine(x, y), ConfigError);
}

TEST_CASE("undriven tomography is unbiased") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.4, 1.3);
  const int l = 7;
  const double unit = khz_to_rad_s(0.25);
  RealMatrix v(l, l);
  for (int i = 0; i < l; ++i)
    for (int j = i + 1; j < l; ++j) v(i, j) = v(j, i) = (u(rng) * (((i + j) % 3 == 0) ? -1.0 : 1.0)) * unit;
  CouplingMatrix cm = CouplingMatrix::from_values(v, "random");
  const FloquetDrive d{18.0 * cm.mean_nn, 6.0 * cm.mean_nn, 0.0, 0.0};
  double bias = 0.0;
  int n = 0;
  for (int i = 1; i <= l && n < 20; ++i)
    for (int j = i + 1; j <= l && n < 20; ++j, ++n) {
      const TomographyResult t = bond_tomography(cm, d, i, j, 12.0, 400, 1e-10);
      const double ref = std::abs(bond_rep(cm.values(i - 1, j - 1)));
      CAPTURE(i);
      CAPTURE(j);
      CHECK(t.j_fit == doctest::Approx(ref).epsilon(1e-4));
      CHECK(t.gamma_fit < 1e-4 * ref);
      bias += (t.j_fit - ref) / ref;
    }
  CHECK(n == 20);
  CHECK(std::abs(bias / n) < 1e-5);
}

TEST_CASE("driven tomography samples whole drive periods") {
  const CouplingMatrix cm = exponential_profile(khz_to_rad_s(0.25), 1.0, 4);
  const FloquetDrive d{18.0 * cm.mean_nn, 6.0 * cm.mean_nn, 0.5, pi / 4};
  const TomographyResult t = bond_tomography(cm, d, 1, 2, 12.0);
  const double period = 2.0 / 6.0;
  REQUIRE(t.tau.size() >= 8);
  for (std::size_t k = 0; k < t.tau.size(); ++k) CHECK(t.tau[k] == doctest::Approx(k * period));
  CHECK_THROWS_AS(bond_tomography(cm, d, 1, 2, 1.0), ConfigError);
  CHECK_THROWS_AS(bond_tomography(cm, d, 2, 2, 12.0), ConfigError);
}

TEST_CASE("edge states of a dimerized chain") {
  const EdgeSpectrum topo = edge_state_spectrum(ssh_chain(12, 0.2, 1.0));
  CHECK_FALSE(topo.gapless);
  REQUIRE(topo.midgap.size() == 2);
  for (const auto& s : topo.midgap) {
    CHECK(std::abs(s.energy) < 1e-3);
    CHECK(s.edge_weight > kEdgeWeight);
    CHECK(s.localization_length == doctest::Approx(2.0 / std::log(5.0)).epsilon(0.05));
  }
  const EdgeSpectrum triv = edge_state_spectrum(ssh_chain(12, 1.0, 0.2));
  CHECK_FALSE(triv.gapless);
  CHECK(triv.midgap.empty());
  const EdgeSpectrum uniform = edge_state_spectrum(ssh_chain(12, 1.0, 1.0));
  CHECK(uniform.gapless);
  CHECK(uniform.midgap.empty());
}

TEST_CASE("edge spectrum is invariant under chain reflection") {
  for (double eb : {0.3, 0.8, 1.0}) {
    const CouplingMatrix d = dressed_matrix(exponential_profile(1.0, 1.0, 14), eb, pi / 4);
    const EdgeSpectrum a = edge_state_spectrum(d), b = edge_state_spectrum(reflected(d));
    CHECK(a.gapless == b.gapless);
    CHECK(a.midgap.size() == b.midgap.size());
    for (std::size_t k = 0; k < a.eigenvalues.size(); ++k)
      CHECK(a.eigenvalues[k] == doctest::Approx(b.eigenvalues[k]).epsilon(1e-12));
  }
}

TEST_CASE("domain-wall couplings") {
  // No bonds across the centre: the halves decouple.
  RealMatrix v(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j)
      if ((i < 4) == (j < 4)) v(i, j) = v(j, i) = 1.0 / (j - i);
  const DomainWallTable blocks = domainwall_couplings(CouplingMatrix::from_values(v, "blocks"));
  for (double g : blocks.g.data()) CHECK(g == 0.0);

  // Reflection swaps the halves: energies swap and |g| transposes.
  const CouplingMatrix cm = random_matrix(10, 61);
  const DomainWallTable a = domainwall_couplings(cm), b = domainwall_couplings(reflected(cm));
  for (std::size_t n = 0; n < 5; ++n) {
    CHECK(a.energy_left[n] == doctest::Approx(b.energy_right[n]).epsilon(1e-12));
    for (std::size_t m = 0; m < 5; ++m) CHECK(std::abs(a.g(n, m)) == doctest::Approx(std::abs(b.g(m, n))).epsilon(1e-9));
  }
  CHECK_THROWS_AS(domainwall_couplings(random_matrix(7, 1)), ConfigError);
}

TEST_CASE("shot sampling") {
  const Trajectory tr = fixture(3, 1.0, 5, [](double t, int j) { return j == 0 ? -1.0 : j == 1 ? 1.0 : 0.4 * t; });
  const ShotTable a = sample_shots(tr, 100, 42), b = sample_shots(tr, 100, 42), c = sample_shots(tr, 100, 43);
  CHECK(a.up_counts == b.up_counts);
  CHECK_FALSE(a.up_counts == c.up_counts);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(a.up_counts(k, 0) == 0);
    CHECK(a.up_counts(k, 1) == 100);
    CHECK(a.sigma(k, 0) == 0.0);
  }
  const ShotTable big = sample_shots(tr, 1000000, 7);
  for (std::size_t k = 0; k < 5; ++k) {
    const double p = 0.5 * (tr.m(k, 2) + 1.0);
    const double sd = std::sqrt(p * (1 - p) / 1e6);
    CHECK(std::abs(0.5 * (big.mean(k, 2) + 1.0) - p) < 5.0 * sd);
  }
  CHECK_THROWS_AS(sample_shots(tr, 0, 1), ConfigError);
}
