#include "ionssh/dynamics.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ionssh/error.hpp"

namespace ionssh {

SpinState SpinState::product(int n_sites, std::uint64_t bits, bool full_space) {
  if (n_sites < 1 || n_sites > Basis::kMaxSites) throw ConfigError("state: number of sites out of range");
  if (n_sites < 64 && (bits >> n_sites) != 0) throw ConfigError("state: bitstring longer than the chain");
  SpinState s;
  s.basis = full_space ? Basis::full(n_sites) : Basis::fixed_magnetization(n_sites, std::popcount(bits));
  s.amplitudes.assign(s.basis->dimension(), cplx{});
  s.amplitudes[s.basis->index(bits)] = 1.0;
  return s;
}

SpinState SpinState::single_excitation(int n_sites, int j, bool full_space) {
  if (j < 1 || j > n_sites) throw ConfigError("state: excitation site out of range");
  return product(n_sites, std::uint64_t{1} << (j - 1), full_space);
}

std::uint64_t neel_bits(int n_sites) {
  std::uint64_t b = 0;
  for (int j = 0; j < n_sites; j += 2) b |= std::uint64_t{1} << j;
  return b;
}

std::uint64_t domain_wall_bits(int n_sites) { return (std::uint64_t{1} << (n_sites / 2)) - 1; }

SpinState SpinState::neel(int n_sites, bool full_space) {
  return product(n_sites, neel_bits(n_sites), full_space);
}

SpinState SpinState::domain_wall(int n_sites, bool full_space) {
  return product(n_sites, domain_wall_bits(n_sites), full_space);
}

SpinState SpinState::in_basis(std::shared_ptr<const Basis> target) const {
  if (target->n_sites() != n_sites()) throw ConfigError("state: basis size mismatch");
  SpinState s;
  s.basis = target;
  s.amplitudes.assign(target->dimension(), cplx{});
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    if (amplitudes[i] == cplx{}) continue;
    const std::size_t k = target->index(basis->state(i));
    if (k == target->dimension()) throw ConfigError("state: amplitude outside the target sector");
    s.amplitudes[k] = amplitudes[i];
  }
  return s;
}

double SpinState::norm() const {
  return std::sqrt(simd::active_kernels().norm_sq(amplitudes.data(), amplitudes.size()));
}

std::vector<double> magnetization(const Basis& basis, const std::vector<cplx>& a) {
  const int l = basis.n_sites();
  std::vector<double> up(l, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double p = std::norm(a[i]);
    if (p == 0.0) continue;
    total += p;
    std::uint64_t s = basis.state(i);
    while (s) {
      up[std::countr_zero(s)] += p;
      s &= s - 1;
    }
  }
  std::vector<double> m(l);
  for (int j = 0; j < l; ++j) m[j] = 2.0 * up[j] - total;
  return m;
}

std::vector<double> magnetization(const SpinState& state) {
  return magnetization(*state.basis, state.amplitudes);
}

double expectation(const Hamiltonian& h, const std::vector<cplx>& psi, double t) {
  const std::vector<cplx> hp = h.apply(t, psi);
  double s = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) s += (std::conj(psi[i]) * hp[i]).real();
  return s;
}

std::vector<double> tau_grid(double tau_max, int n_points) {
  if (n_points < 2 || !(tau_max > 0.0)) throw ConfigError("tau grid: need tau_max > 0 and >= 2 points");
  std::vector<double> g(n_points);
  for (int i = 0; i < n_points; ++i) g[i] = tau_max * i / (n_points - 1);
  return g;
}

Trajectory evolve(const SpinState& state, const Hamiltonian& h, const std::vector<double>& tau,
                  const EvolveOptions& opt) {
  if (state.basis->dimension() != h.dimension() || state.n_sites() != h.basis->n_sites())
    throw ConfigError("evolve: state and Hamiltonian live on different bases");
  if (!(opt.coupling_unit > 0.0)) throw ConfigError("evolve: coupling unit J must be > 0");
  if (!(opt.tol > 0.0)) throw ConfigError("evolve: tolerance must be > 0");
  if (tau.empty()) throw ConfigError("evolve: empty tau grid");
  for (std::size_t i = 0; i < tau.size(); ++i)
    if (tau[i] < 0.0 || (i > 0 && !(tau[i] > tau[i - 1])))
      throw ConfigError("evolve: tau grid must be strictly increasing and >= 0");
  const double n0 = state.norm();
  if (std::abs(n0 - 1.0) > 1e-9) throw ConfigError("evolve: initial state is not normalized");

  const std::size_t l = state.n_sites();
  Trajectory tr;
  tr.tau = tau;
  tr.magnetization = RealMatrix(tau.size(), l);
  tr.label = h.label;
  tr.model = h.label == "full_drive" ? "full_drive" : "interacting_spin";
  tr.coupling_unit = opt.coupling_unit;
  tr.tol = opt.tol;

  std::vector<double> times(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) times[i] = std::numbers::pi * tau[i] / opt.coupling_unit;

  const auto& kt = simd::active_kernels();
  double drift = 0.0;
  auto record = [&](std::size_t idx, const std::vector<cplx>& psi) {
    const std::vector<double> m = magnetization(*state.basis, psi);
    for (std::size_t j = 0; j < l; ++j) tr.magnetization(idx, j) = m[j];
    drift = std::max(drift, std::abs(std::sqrt(kt.norm_sq(psi.data(), psi.size())) - 1.0));
  };

  std::vector<cplx> psi = state.amplitudes;
  OdeOptions oo;
  oo.rtol = opt.tol;
  oo.atol = opt.tol;
  tr.stats = integrate_schrodinger(
      [&h, &kt](double t, const cplx* x, cplx* y) { h.apply(t, x, y, kt); }, psi, 0.0, times, record,
      oo, kt);
  tr.max_norm_drift = drift;
  if (drift > 100.0 * opt.tol) {
    std::ostringstream msg;
    msg << "evolve: norm drift " << drift << " exceeds 100 tol";
    throw NumericalError(msg.str(), drift);
  }
  if (opt.final_state) *opt.final_state = std::move(psi);
  return tr;
}

}  // namespace ionssh
