#include <doctest.h>

#include <cmath>

#include "ionssh/coupling.hpp"
#include "ionssh/error.hpp"
#include "ionssh/trap.hpp"

using namespace ionssh;

namespace {

const ModeSpectrum& config1_modes() {
  static const ModeSpectrum s = solve_trap(chain_preset("config1").trap);
  return s;
}

RamanConfig uniform_raman(std::size_t n_ions, std::vector<int> active, double detuning) {
  RamanConfig rc;
  rc.detuning = detuning;
  rc.active_sites = std::move(active);
  rc.rabi.assign(n_ions, 0.0);
  for (int s : rc.active_sites) rc.rabi[s] = khz_to_rad_s(100.0);
  return rc;
}

std::vector<int> range(int a, int b) {
  std::vector<int> v;
  for (int i = a; i < b; ++i) v.push_back(i);
  return v;
}

}  // namespace

TEST_CASE("ising matrix is symmetric with zero diagonal") {
  const auto& m = config1_modes();
  const CouplingMatrix cm = ising_matrix(m, uniform_raman(m.size(), range(1, 13), khz_to_rad_s(-99)));
  CHECK(cm.size() == 12);
  for (std::size_t i = 0; i < cm.size(); ++i) {
    CHECK(cm.values(i, i) == 0.0);
    for (std::size_t j = 0; j < cm.size(); ++j) CHECK(cm.values(i, j) == cm.values(j, i));
  }
  CHECK(cm.mean_nn > 0.0);
}

TEST_CASE("bilinearity in the Rabi frequencies") {
  const auto& m = config1_modes();
  RamanConfig rc = uniform_raman(m.size(), range(1, 13), khz_to_rad_s(-99));
  const CouplingMatrix a = ising_matrix(m, rc);
  for (double& w : rc.rabi) w *= 1.7;
  const CouplingMatrix b = ising_matrix(m, rc);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      CHECK(std::abs(b.values(i, j) - 1.7 * 1.7 * a.values(i, j)) <= 1e-12 * std::abs(b.values(i, j)));
}

TEST_CASE("auxiliary ions are masked out and the matrix re-indexed") {
  const auto& m = config1_modes();
  const CouplingMatrix full = ising_matrix(m, uniform_raman(m.size(), range(0, 15), khz_to_rad_s(-99)));
  const std::vector<int> active = range(1, 13);
  const CouplingMatrix sub = ising_matrix(m, uniform_raman(m.size(), active, khz_to_rad_s(-99)));
  for (std::size_t a = 0; a < active.size(); ++a)
    for (std::size_t b = 0; b < active.size(); ++b)
      CHECK(sub.values(a, b) == doctest::Approx(full.values(active[a], active[b])).epsilon(1e-14));

  RamanConfig bad = uniform_raman(m.size(), active, khz_to_rad_s(-99));
  bad.rabi[0] = 1.0;
  CHECK_THROWS_AS(ising_matrix(m, bad), ConfigError);
  RamanConfig none = uniform_raman(m.size(), active, khz_to_rad_s(-99));
  for (double& w : none.rabi) w = 0.0;
  CHECK_THROWS_AS(ising_matrix(m, none), ConfigError);
}

TEST_CASE("near-resonant beatnote names the mode") {
  const auto& m = config1_modes();
  const double on_mode3 = m.frequencies[2] - m.frequencies.back() + 10.0;
  try {
    (void)ising_matrix(m, uniform_raman(m.size(), range(1, 13), on_mode3));
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("mode 3") != std::string::npos);
  }
}

TEST_CASE("detuning close to one mode gives a rank-1 matrix") {
  const auto& m = config1_modes();
  for (std::size_t k : {0u, 4u, 14u}) {
    CAPTURE(k);
    const double det = m.frequencies[k] - m.frequencies.back() + 1.5 * kMinDenominator;
    const CouplingMatrix cm = ising_matrix(m, uniform_raman(m.size(), range(0, 15), det));
    // Least-squares c in J_ij ~ c b_ik b_jk over the off-diagonal, then the relative residual.
    double num = 0.0, den = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < 15; ++i)
      for (std::size_t j = 0; j < 15; ++j) {
        if (i == j) continue;
        const double bb = m.participation(i, k) * m.participation(j, k);
        num += cm.values(i, j) * bb;
        den += bb * bb;
        norm += cm.values(i, j) * cm.values(i, j);
      }
    const double c = num / den;
    double resid = 0.0;
    for (std::size_t i = 0; i < 15; ++i)
      for (std::size_t j = 0; j < 15; ++j) {
        if (i == j) continue;
        const double r = cm.values(i, j) - c * m.participation(i, k) * m.participation(j, k);
        resid += r * r;
      }
    CHECK(std::sqrt(resid / norm) < 0.05);
  }
}

TEST_CASE("average bond strength") {
  const CouplingMatrix e = exponential_profile(2.0, 1.5, 9);
  for (int d = 1; d <= 8; ++d) CHECK(std::abs(average_bond_strength(e, d) - 2.0 * std::exp(-d / 1.5)) < 1e-12);
  const auto& m = config1_modes();
  const CouplingMatrix cm = ising_matrix(m, uniform_raman(m.size(), range(1, 13), khz_to_rad_s(-99)));
  CHECK(average_bond_strength(cm, 11) == std::abs(cm.values(0, 11)));
  CHECK_THROWS_AS(average_bond_strength(cm, 0), ConfigError);
  CHECK_THROWS_AS(average_bond_strength(cm, 12), ConfigError);
}

TEST_CASE("stagger correction") {
  const CouplingMatrix e = exponential_profile(1.0, 1.0, 6);
  const CouplingMatrix s = stagger_correct(e);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      CHECK(std::abs(s.values(i, j)) == std::abs(e.values(i, j)));
      if (i != j) CHECK((s.values(i, j) > 0) == ((i + j) % 2 == 0));
    }
  CHECK(stagger_correct(s).values == e.values);

  // Below the zig-zag mode the bands alternate in sign with distance; the
  // correction leaves the two leading bands with one common sign.
  const auto& m = config1_modes();
  const CouplingMatrix raw = ising_matrix(m, uniform_raman(m.size(), range(1, 13), khz_to_rad_s(-99)));
  const CouplingMatrix fixed = stagger_correct(raw);
  for (std::size_t i = 0; i + 2 < raw.size(); ++i) {
    CHECK(raw.values(i, i + 1) * raw.values(i, i + 2) < 0.0);
    CHECK(fixed.values(i, i + 1) * fixed.values(i, i + 2) > 0.0);
  }
}

TEST_CASE("exponential profile") {
  const CouplingMatrix nn = exponential_profile(1.0, 0.05, 5);
  CHECK(nn.values(0, 2) / nn.values(0, 1) < 1e-8);
  const CouplingMatrix three = exponential_profile(1.0, 1.0, 3);
  CHECK(std::abs(three.values(0, 2) / three.values(0, 1) - std::exp(-1.0)) < 1e-12);
  CHECK(three.values(1, 1) == 0.0);
  CHECK_THROWS_AS(exponential_profile(1.0, 0.0, 3), ConfigError);
}

TEST_CASE("band profile fit recovers an exact exponential") {
  const CouplingMatrix e = exponential_profile(3.0, 1.0 / 1.2, 12);
  const BandFit f = fit_band_profile(e);
  CHECK(f.decay == doctest::Approx(1.2).epsilon(1e-8));
  CHECK(f.amplitude * e.mean_nn == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(f.max_distance == 6);
}

TEST_CASE("calibrate_rabi: target scaling and fixed point") {
  const auto& m = config1_modes();
  const std::vector<int> active = range(1, 13);
  const std::vector<double> target(11, khz_to_rad_s(0.25));
  const double det = khz_to_rad_s(-99);
  const CalibrationResult a = calibrate_rabi(m, det, active, target);
  CHECK(a.residual < 0.02);
  for (std::size_t b = 0; b < 11; ++b)
    CHECK(std::abs(a.matrix.values(b, b + 1)) == doctest::Approx(target[b]).epsilon(0.02));

  std::vector<double> doubled = target;
  for (double& t : doubled) t *= 2.0;
  const CalibrationResult b = calibrate_rabi(m, det, active, doubled);
  for (int s : active) CHECK(b.raman.rabi[s] / a.raman.rabi[s] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

  // Rank-1 single-mode matrix with uniform |b_i1| (COM mode): uniform W is a fixed point.
  const double near_com = m.frequencies[0] - m.frequencies.back() + 2.0e3;
  RamanConfig rc = uniform_raman(m.size(), range(0, 15), near_com);
  const CouplingMatrix com = ising_matrix(m, rc);
  std::vector<double> com_target(14);
  for (std::size_t i = 0; i < 14; ++i) com_target[i] = std::abs(com.values(i, i + 1));
  const CalibrationResult c = calibrate_rabi(m, near_com, range(0, 15), com_target,
                                             std::vector<double>(15, rc.rabi[0]));
  CHECK(c.iterations <= 1);
  for (int s = 0; s < 15; ++s) CHECK(c.raman.rabi[s] == doctest::Approx(rc.rabi[0]).epsilon(1e-6));
}

TEST_CASE("calibrated Rabi products follow the config-1 preset profile within 15%") {
  const ChainPreset p = chain_preset("config1");
  const auto& m = config1_modes();
  const std::vector<double> target(11, p.mean_nn);
  const CalibrationResult c = calibrate_rabi(m, p.detuning, p.active_sites, target);
  // Only the products W_j W_{j+1} are fixed by nearest-neighbour targets.
  const double w1w2 = c.raman.rabi[p.active_sites[0]] * c.raman.rabi[p.active_sites[1]];
  const double r1r2 = p.relative_rabi[0] * p.relative_rabi[1];
  for (std::size_t a = 0; a + 1 < p.active_sites.size(); ++a) {
    const double ours = c.raman.rabi[p.active_sites[a]] * c.raman.rabi[p.active_sites[a + 1]] / w1w2;
    const double tab = p.relative_rabi[a] * p.relative_rabi[a + 1] / r1r2;
    CAPTURE(a);
    CHECK(std::abs(ours / tab - 1.0) < 0.15);
  }
}

TEST_CASE("presets hit the target mean bond") {
  for (const char* name : {"config1", "config2", "config3"}) {
    CAPTURE(name);
    const ChainPreset p = chain_preset(name);
    const PresetResult r = build_preset(p);
    CHECK(r.matrix.size() == static_cast<std::size_t>(p.size()));
    CHECK(r.matrix.mean_nn == doctest::Approx(p.mean_nn).epsilon(1e-12));
  }
  CHECK_THROWS_AS(chain_preset("config9"), ConfigError);
}
