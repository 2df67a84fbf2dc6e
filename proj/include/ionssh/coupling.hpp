#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ionssh/linalg.hpp"
#include "ionssh/trap.hpp"

namespace ionssh {

/// Real symmetric L x L spin-bond matrix in rad/s with zero diagonal.
struct CouplingMatrix {
  RealMatrix values;
  double mean_nn = 0.0;  // mean |J_{i,i+1}|, rad/s
  std::string label;

  std::size_t size() const noexcept { return values.rows(); }

  /// Validates symmetry (1e-12 relative) and zero diagonal, symmetrizes
  /// exactly and fills mean_nn.
  static CouplingMatrix from_values(RealMatrix values, std::string label);
};

/// mean_i |J_{i,i+1}| over the L-1 nearest-neighbour bonds.
double mean_nearest_neighbour(const RealMatrix& j);

/// Raman spin-motion coupling parameters for one chain.
struct RamanConfig {
  /// Beatnote detuning; the bond denominators are 2 (detuning + w_N - w_k)
  /// with w_N the zig-zag (lowest) mode.
  double detuning = 0.0;           // rad/s
  std::vector<double> rabi;        // N entries, rad/s; zero on auxiliary ions
  double lamb_dicke_scale = 0.08;  // eta_ik = scale * b_ik
  std::vector<int> active_sites;   // 0-based ion indices of the L spins, ascending

  void validate(std::size_t n_ions) const;
};

/// Smallest |detuning + w_N - w_k| accepted before a bond is declared resonant.
inline constexpr double kMinDenominator = 1e3;  // rad/s

/// J_ij = sum_k eta_ik eta_jk W_i W_j / (2 (detuning + w_N - w_k)), restricted
/// to the active sites.
CouplingMatrix ising_matrix(const ModeSpectrum& spec, const RamanConfig& rc);

/// (1/(L-d)) sum_n |J_{n,n+d}|
double average_bond_strength(const CouplingMatrix& cm, int d);

/// Fit of the band profile Jbar(d) ~ amplitude * J * exp(-decay * d).
struct BandFit {
  double amplitude = 0.0;  // units of cm.mean_nn
  double decay = 0.0;      // per site
  double rms = 0.0;        // rms residual, units of cm.mean_nn
  int max_distance = 0;
};

/// Least squares of A exp(-kappa d) against Jbar(d) for 1 <= d <= min(max_d, L-1),
/// in linear space (Levenberg-Marquardt, started from the log-linear fit).
BandFit fit_band_profile(const CouplingMatrix& cm, int max_d = 6);

/// J_ij -> (-1)^(i+j) J_ij. Involution; preserves |J_ij|.
CouplingMatrix stagger_correct(const CouplingMatrix& cm);

/// J_ij = J exp(-|i-j| / xi), zero diagonal.
CouplingMatrix exponential_profile(double j, double xi, int l);

/// Rescale every element so that mean_nn equals `target`.
CouplingMatrix normalized(const CouplingMatrix& cm, double target_mean_nn);

struct CalibrationResult {
  RamanConfig raman;
  CouplingMatrix matrix;
  int iterations = 0;
  double residual = 0.0;  // max relative NN-bond error
};

/// Tune per-site Rabi frequencies so that |J_{j,j+1}| follows
/// `target_nn` (L-1 values, rad/s). Each sweep multiplies W_j by the
/// geometric mean of sqrt(target/actual) over the bonds touching site j.
/// Fails when the NN bonds are not within 2% after 100 sweeps.
CalibrationResult calibrate_rabi(const ModeSpectrum& spec, double detuning,
                                 const std::vector<int>& active_sites,
                                 const std::vector<double>& target_nn,
                                 const std::optional<std::vector<double>>& initial_rabi = {},
                                 double lamb_dicke_scale = 0.08);

/// Reference chain configurations.
struct ChainPreset {
  std::string name;
  TrapConfig trap;
  std::vector<int> active_sites;       // 0-based
  std::vector<double> relative_rabi;   // W_j / W_1 over the active sites
  double detuning = 0.0;               // rad/s, in the ising_matrix convention
  bool detuning_from_com = false;      // add w_1 - w_N once the modes are known
  double mean_nn = 0.0;                // rad/s target of the bare matrix
  bool stagger = false;

  int size() const noexcept { return static_cast<int>(active_sites.size()); }
};

/// "config1": 15 ions, 12 spins, 99 kHz below the zig-zag mode, short range.
/// "config2": 15 ions, 12 spins, 29 kHz above the COM mode, long range.
/// "config3": 27 ions, 22 spins, 45 kHz below the zig-zag mode.
ChainPreset chain_preset(const std::string& name);

struct PresetResult {
  ModeSpectrum modes;
  RamanConfig raman;       // W_1 scaled so that mean_nn hits the target
  CouplingMatrix matrix;   // stagger-corrected where the preset asks for it
};

PresetResult build_preset(const ChainPreset& preset);

}  // namespace ionssh
