#include <doctest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "ionssh/basis.hpp"
#include "ionssh/coupling.hpp"
#include "ionssh/dynamics.hpp"
#include "ionssh/error.hpp"
#include "ionssh/hamiltonian.hpp"

using namespace ionssh;
using std::numbers::pi;

namespace {

CouplingMatrix random_matrix(int l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealMatrix v(l, l);
  for (int i = 0; i < l; ++i)
    for (int j = i + 1; j < l; ++j) v(i, j) = v(j, i) = u(rng) * std::exp(-(j - i - 1) / 1.5);
  return CouplingMatrix::from_values(v, "random");
}

// exp(-i H t) psi via the dense eigendecomposition.
std::vector<cplx> eig_propagate(const RealMatrix& h, const std::vector<cplx>& psi, double t) {
  const SymmetricEigen e = eigh(h);
  const std::size_t n = psi.size();
  std::vector<cplx> c(n), out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx s{};
    for (std::size_t i = 0; i < n; ++i) s += e.vectors(i, k) * psi[i];
    c[k] = s * std::polar(1.0, -e.values[k] * t);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) out[i] += e.vectors(i, k) * c[k];
  return out;
}

double max_diff(const RealMatrix& a, const RealMatrix& b) { return max_abs_diff(a, b); }

bool site_m_equal(const Trajectory& tr, std::size_t k, std::vector<double> expect) {
  for (std::size_t j = 0; j < expect.size(); ++j)
    if (std::abs(tr.m(k, j) - expect[j]) > 1e-12) return false;
  return true;
}

}  // namespace

TEST_CASE("basis enumeration") {
  const auto b = Basis::fixed_magnetization(8, 3);
  CHECK(b->dimension() == 56);
  for (std::size_t k = 0; k < b->dimension(); ++k) {
    CHECK(std::popcount(b->state(k)) == 3);
    if (k > 0) CHECK(b->state(k) > b->state(k - 1));
    CHECK(b->index(b->state(k)) == k);
  }
  CHECK(b->index(0b1111) == b->dimension());
  const auto f = Basis::full(5);
  CHECK(f->dimension() == 32);
  CHECK(f->is_full());
  CHECK(f->index(17) == 17);
}

TEST_CASE("two-site XY and full-drive matrices") {
  RealMatrix v(2, 2);
  v(0, 1) = v(1, 0) = 0.7;
  const CouplingMatrix cm = CouplingMatrix::from_values(v, "pair");
  const RealMatrix xy = build_xy_hamiltonian(cm, Basis::full(2)).dense();
  RealMatrix expect(4, 4);
  expect(1, 2) = expect(2, 1) = 0.7;
  CHECK(xy == expect);

  FloquetDrive d{3.0, 1.0, 0.0, 0.0};
  const RealMatrix full = build_full_hamiltonian(cm, d).dense(0.0);
  RealMatrix fe(4, 4);
  fe(0, 3) = fe(3, 0) = fe(1, 2) = fe(2, 1) = 0.7;
  fe(0, 0) = -3.0;
  fe(3, 3) = 3.0;
  CHECK(max_diff(full, fe) < 1e-15);
}

TEST_CASE("one-excitation block equals the coupling matrix") {
  const CouplingMatrix cm = random_matrix(9, 3);
  const RealMatrix h = build_xy_hamiltonian(cm, Basis::fixed_magnetization(9, 1)).dense();
  CHECK(h == cm.values);
}

TEST_CASE("product states carry no XY energy") {
  const CouplingMatrix cm = random_matrix(8, 5);
  const SpinState s = SpinState::neel(8);
  const Hamiltonian h = build_xy_hamiltonian(cm, s.basis);
  CHECK(expectation(h, s.amplitudes) == 0.0);
  CHECK(neel_bits(6) == 0b010101);
  CHECK(domain_wall_bits(6) == 0b000111);
  const auto m = magnetization(SpinState::domain_wall(6));
  CHECK(m == std::vector<double>{1, 1, 1, -1, -1, -1});
}

TEST_CASE("two-site exchange oscillates as cos(2 J t)") {
  RealMatrix v(2, 2);
  const double j = 2.0;
  v(0, 1) = v(1, 0) = j;
  const CouplingMatrix cm = CouplingMatrix::from_values(v, "pair");
  const SpinState s = SpinState::single_excitation(2, 1);
  const auto grid = tau_grid(3.0, 61);
  const Trajectory tr = evolve(s, build_xy_hamiltonian(cm, s.basis), grid, {1e-10, j});
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = pi * grid[k] / j;
    CHECK(std::abs(tr.m(k, 0) - std::cos(2.0 * j * t)) < 1e-7);
    CHECK(std::abs(tr.m(k, 1) + std::cos(2.0 * j * t)) < 1e-7);
  }
}

TEST_CASE("vanishing couplings freeze the state") {
  const CouplingMatrix cm = CouplingMatrix::from_values(RealMatrix(5, 5), "zero");
  const SpinState s = SpinState::product(5, 0b10110);
  const Trajectory tr = evolve(s, build_xy_hamiltonian(cm, s.basis), tau_grid(1.0, 11), {1e-9, 1.0});
  for (std::size_t k = 0; k < tr.n_times(); ++k) CHECK(site_m_equal(tr, k, {-1, 1, 1, -1, 1}));
}

TEST_CASE("integrator agrees with the eigendecomposition propagator") {
  const CouplingMatrix cm = random_matrix(8, 17);
  const SpinState s = SpinState::neel(8);
  const Hamiltonian h = build_xy_hamiltonian(cm, s.basis);
  const auto grid = tau_grid(2.0, 21);
  std::vector<cplx> final_state;
  EvolveOptions opt{1e-10, cm.mean_nn, &final_state};
  const Trajectory tr = evolve(s, h, grid, opt);
  const RealMatrix hd = h.dense();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto psi = eig_propagate(hd, s.amplitudes, pi * grid[k] / cm.mean_nn);
    const auto m = magnetization(*s.basis, psi);
    for (std::size_t j = 0; j < 8; ++j) CHECK(std::abs(tr.m(k, j) - m[j]) < 1e-7);
  }
  const auto ref = eig_propagate(hd, s.amplitudes, pi * 2.0 / cm.mean_nn);
  double err = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) err = std::max(err, std::abs(ref[i] - final_state[i]));
  CHECK(err < 1e-7);
}

TEST_CASE("conservation laws of the XY evolution") {
  const CouplingMatrix cm = random_matrix(10, 23);
  const SpinState s = SpinState::product(10, 0b1100101001);
  const Hamiltonian h = build_xy_hamiltonian(cm, s.basis);
  std::vector<cplx> fin;
  const Trajectory tr = evolve(s, h, tau_grid(2.0, 41), {1e-10, cm.mean_nn, &fin});
  double sum0 = 0.0;
  for (std::size_t j = 0; j < 10; ++j) sum0 += tr.m(0, j);
  for (std::size_t k = 0; k < tr.n_times(); ++k) {
    double sum = 0.0;
    for (std::size_t j = 0; j < 10; ++j) sum += tr.m(k, j);
    CHECK(std::abs(sum - sum0) < 1e-9);
  }
  CHECK(tr.max_norm_drift < 1e-8);
  double n = 0.0;
  for (const auto& a : fin) n += std::norm(a);
  CHECK(std::abs(std::sqrt(n) - 1.0) < 1e-8);
  CHECK(std::abs(expectation(h, fin) - expectation(h, s.amplitudes)) < 1e-7 * cm.mean_nn);
}

TEST_CASE("reversing the couplings leaves magnetization unchanged") {
  // For real H and a real initial state, exp(iHt) psi = conj(exp(-iHt) psi).
  const CouplingMatrix cm = random_matrix(8, 29);
  RealMatrix neg = cm.values;
  for (double& x : neg.data()) x = -x;
  const CouplingMatrix cn = CouplingMatrix::from_values(neg, "negated");
  const SpinState s = SpinState::domain_wall(8);
  const auto grid = tau_grid(1.5, 16);
  const Trajectory a = evolve(s, build_xy_hamiltonian(cm, s.basis), grid, {1e-10, cm.mean_nn});
  const Trajectory b = evolve(s, build_xy_hamiltonian(cn, s.basis), grid, {1e-10, cm.mean_nn});
  CHECK(max_diff(a.magnetization, b.magnetization) < 1e-7);
}

TEST_CASE("sector and full-space evolution agree") {
  const CouplingMatrix cm = random_matrix(8, 31);
  const SpinState sec = SpinState::neel(8);
  const SpinState full = SpinState::neel(8, true);
  const auto grid = tau_grid(1.0, 11);
  const Trajectory a = evolve(sec, build_xy_hamiltonian(cm, sec.basis), grid, {1e-11, cm.mean_nn});
  const Trajectory b = evolve(full, build_xy_hamiltonian(cm, full.basis), grid, {1e-11, cm.mean_nn});
  CHECK(max_diff(a.magnetization, b.magnetization) < 1e-8);
  CHECK(sec.in_basis(full.basis).amplitudes == full.amplitudes);
}

TEST_CASE("single driven spin picks up the integrated field as a phase") {
  const CouplingMatrix cm = CouplingMatrix::from_values(RealMatrix(1, 1), "single");
  FloquetDrive d{5.0, 7.0, 0.8, 0.0};
  const Hamiltonian h = build_full_hamiltonian(cm, d);
  SpinState s = SpinState::product(1, 0, true);
  s.amplitudes = {cplx(1.0 / std::sqrt(2.0)), cplx(1.0 / std::sqrt(2.0))};
  std::vector<cplx> fin;
  const double tau_end = 1.3, unit = 1.0;
  (void)evolve(s, h, {0.0, tau_end}, {1e-11, unit, &fin});
  const double t = pi * tau_end / unit;
  const double integral = d.b0 * t + d.amplitude() * std::cos(d.site_phase(1)) * std::sin(d.omega * t) / d.omega;
  // Relative phase of up (+1/2) against down (-1/2).
  const double rel = std::arg(fin[1] / fin[0]);
  CHECK(std::abs(std::remainder(rel + integral, 2.0 * pi)) < 1e-8);
}

TEST_CASE("full-space limit and input checks") {
  CHECK_THROWS_AS(build_full_hamiltonian(exponential_profile(1.0, 1.0, kMaxFullDriveSites + 1),
                                         FloquetDrive{1.0, 1.0, 0.0, 0.0}),
                  ConfigError);
  const CouplingMatrix cm = random_matrix(4, 1);
  const SpinState s = SpinState::neel(4);
  const Hamiltonian h = build_xy_hamiltonian(cm, s.basis);
  CHECK_THROWS_AS(evolve(s, h, {0.0, 1.0}, {1e-9, 0.0}), ConfigError);
  CHECK_THROWS_AS(evolve(s, h, {0.5, 0.5}, {1e-9, 1.0}), ConfigError);
  CHECK_THROWS_AS(evolve(SpinState::neel(4, true), h, {0.0, 1.0}, {1e-9, 1.0}), ConfigError);
  CHECK_THROWS_AS(SpinState::single_excitation(4, 5), ConfigError);
  CHECK_THROWS_AS(build_xy_hamiltonian(random_matrix(12, 2), Basis::full(12), 100), ConfigError);
}
