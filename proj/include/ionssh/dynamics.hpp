#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ionssh/basis.hpp"
#include "ionssh/hamiltonian.hpp"
#include "ionssh/integrator.hpp"
#include "ionssh/linalg.hpp"

namespace ionssh {

/// State vector over a basis sector.
struct SpinState {
  std::shared_ptr<const Basis> basis;
  std::vector<cplx> amplitudes;

  int n_sites() const noexcept { return basis->n_sites(); }

  /// Product state `bits` (bit j-1 = site j up) in its own magnetization
  /// sector, or in the full space when `full_space` is set.
  static SpinState product(int n_sites, std::uint64_t bits, bool full_space = false);
  /// All spins down except site j (1-based).
  static SpinState single_excitation(int n_sites, int j, bool full_space = false);
  /// Up on odd sites 1, 3, 5, ...
  static SpinState neel(int n_sites, bool full_space = false);
  /// Up on sites 1..L/2, down on the rest.
  static SpinState domain_wall(int n_sites, bool full_space = false);

  /// Embed into another sector of the same chain (amplitudes outside the
  /// target sector must vanish).
  SpinState in_basis(std::shared_ptr<const Basis> target) const;

  double norm() const;
};

/// Bit pattern of the Neel and domain-wall product states.
std::uint64_t neel_bits(int n_sites);
std::uint64_t domain_wall_bits(int n_sites);

/// m_j = 2 <s_z^(j)> = 2 P(site j up) - 1, j = 1..L (returned 0-based).
std::vector<double> magnetization(const SpinState& state);
std::vector<double> magnetization(const Basis& basis, const std::vector<cplx>& amplitudes);

/// <psi|H(t)|psi>
double expectation(const Hamiltonian& h, const std::vector<cplx>& psi, double t = 0.0);

struct Trajectory {
  std::vector<double> tau;   // tau = J t / pi
  RealMatrix magnetization;  // (n_times, L)
  std::string label;         // Hamiltonian label
  std::string model;         // interacting_spin | free_fermion | full_drive
  double coupling_unit = 0.0;  // J in rad/s
  double tol = 0.0;
  double max_norm_drift = 0.0;
  OdeStats stats;

  std::size_t n_times() const noexcept { return tau.size(); }
  std::size_t n_sites() const noexcept { return magnetization.cols(); }
  double m(std::size_t time, std::size_t site) const { return magnetization(time, site); }
};

struct EvolveOptions {
  double tol = 1e-9;       // rtol = atol
  double coupling_unit = 0.0;  // J (rad/s): t = pi tau / J
  /// Also record the final state.
  std::vector<cplx>* final_state = nullptr;
};

/// Integrates the state under H on the tau grid (strictly increasing,
/// starting at >= 0). Throws NumericalError when the norm drifts by more than
/// 100 tol.
Trajectory evolve(const SpinState& state, const Hamiltonian& h, const std::vector<double>& tau_grid,
                  const EvolveOptions& opt);

/// Uniform grid 0, dt, ..., tau_max (n_points values).
std::vector<double> tau_grid(double tau_max, int n_points);

}  // namespace ionssh
