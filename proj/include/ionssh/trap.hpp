#pragma once

#include <vector>

#include "ionssh/constants.hpp"
#include "ionssh/linalg.hpp"

namespace ionssh {

/// Linear Paul trap holding a chain of identical ions.
///
/// Axial confinement is the static potential V(x) = c4 x^4 + c2 x^2 (energy
/// per ion, quoted in eV/mm^2 and eV/mm^4 as is customary); radial
/// confinement is harmonic with centre-of-mass frequency `com_radial_freq`.
struct TrapConfig {
  int n_ions = 0;
  double com_radial_freq = 0.0;  // rad/s
  double axial_c2 = 0.0;         // eV/mm^2
  double axial_c4 = 0.0;         // eV/mm^4
  double ion_mass = kYb171MassAmu * kCodata.atomic_mass_unit;  // kg
  PhysicalConstants constants = kCodata;

  /// Throws ConfigError when the potential cannot confine the chain.
  void validate() const;
};

/// Transverse normal modes along one radial direction.
struct ModeSpectrum {
  std::vector<double> positions;    // m, ascending
  std::vector<double> frequencies;  // rad/s, descending; index 0 is the COM mode
  RealMatrix participation;         // b(i, k): ion i, mode k; orthogonal

  std::size_t size() const noexcept { return positions.size(); }
};

struct EquilibriumOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-12;  // 2-norm, natural units
};

/// Stationary point of sum_i V(x_i) + sum_{i<j} k_e e^2 / |x_i - x_j|, found
/// by damped Newton iteration from an equally spaced guess. Positions in
/// metres, ascending, reflection-symmetric about x = 0.
std::vector<double> equilibrium_positions(const TrapConfig& cfg, const EquilibriumOptions& opt = {});

/// Gradient 2-norm of the total potential at `positions`, in the natural
/// units used by the solver.
double equilibrium_residual(const TrapConfig& cfg, const std::vector<double>& positions);

/// Natural length unit of the solver (m).
double natural_length(const TrapConfig& cfg);

/// Linearized radial modes about `positions`. Sign convention: b(0, k) >= 0.
ModeSpectrum radial_modes(const TrapConfig& cfg, const std::vector<double>& positions);

/// equilibrium_positions followed by radial_modes.
ModeSpectrum solve_trap(const TrapConfig& cfg);

}  // namespace ionssh
