#pragma once

#include <vector>

#include "ionssh/constants.hpp"
#include "ionssh/coupling.hpp"
#include "ionssh/linalg.hpp"

namespace ionssh {

/// Site-resolved periodic transverse field
///   B_j(t) = b0 + eta_bar (z0 omega / sqrt 2) cos(omega t) cos(phi_j),
///   phi_j = (pi/2) j + phi, sites j = 1..L.
struct FloquetDrive {
  double b0 = 0.0;       // rad/s
  double omega = 1.0;    // rad/s
  double eta_bar = 0.0;
  double phi = 0.0;      // rad
  static constexpr double z0 = kBesselZero0;

  double site_phase(int j) const noexcept;
  /// Peak modulation amplitude eta_bar z0 omega / sqrt 2.
  double amplitude() const noexcept;
  /// Bessel argument scale eta = z0 eta_bar / sqrt 2.
  double eta() const noexcept;

  void validate() const;
};

/// B_j(t) in rad/s; j is 1-based.
double drive_field(const FloquetDrive& drive, int j, double t);

/// j0(2 eta sin(pi (i+j)/4 + phi) sin(pi (i-j)/4)) for 1-based i, j.
double dressing_factor(double eta_bar, double phi, int i, int j);

/// Elementwise dressing of a bare matrix. Label records (eta_bar, phi).
CouplingMatrix dressed_matrix(const CouplingMatrix& cm, double eta_bar, double phi);
CouplingMatrix dressed_matrix(const CouplingMatrix& cm, const FloquetDrive& drive);

/// Dimerization parameters of a two-site unit cell (A = odd, B = even sites):
///   intra-sublattice bond at cell distance d >= 1: Jbar(2d) * same_x[d],
///   inter bond A_n -- B_{n-d} (site distance |2d-1|): Jbar(|2d-1|) * cross(d).
struct Dimerization {
  std::vector<double> same_a;  // index d, d = 0 unused
  std::vector<double> same_b;
  std::vector<double> cross_values;
  int cross_min = 0;  // cross_values[k] = cross(cross_min + k)

  double cross(int d) const;
  bool has_cross(int d) const noexcept;
  int cross_max() const noexcept { return cross_min + static_cast<int>(cross_values.size()) - 1; }
};

/// D(d), Dbar(d) implied by the drive for a homogeneous chain with bands up to
/// site distance `range`. Sublattice-independent (same_a == same_b) for
/// phi in {pi/4, 3pi/4}.
Dimerization drive_dimerization(double eta_bar, double phi, int range);

/// Uniform dimerization (all factors 1): the undriven chain.
Dimerization uniform_dimerization(int range);

struct SublatticeBlocks {
  RealMatrix aa, bb, ab, ba;
  /// max |aa - bb| relative to max |dressed|
  double aa_bb_mismatch = 0.0;
  /// False when the bare bands vary by more than 5% along the chain; the
  /// dimerization parameters are then left empty.
  bool available = false;
  Dimerization dimerization;
};

/// Split a dressed matrix into odd/even sublattice blocks and, when the bare
/// input is homogeneous, extract D(d) and Dbar(d) as band ratios.
SublatticeBlocks sublattice_blocks(const CouplingMatrix& dressed, const CouplingMatrix& bare);

/// 2x2 plane-wave Hamiltonian [[E_A, Delta], [Delta*, E_B]].
struct BlochMatrix {
  double k = 0.0;
  double e_k = 0.0;   // (E_A + E_B) / 2
  double mass = 0.0;  // (E_A - E_B) / 2, zero when the sublattices are equivalent
  cplx delta_k;
  ComplexMatrix matrix;
};

/// jbar[r] = Jbar(r) for r = 0..R (jbar[0] ignored); bonds beyond R or
/// outside the dimerization tables are dropped.
BlochMatrix bloch_matrix(const std::vector<double>& jbar, const Dimerization& dim, double k);

/// Band profile Jbar(r), r = 0..L-1, of a matrix (absolute band means).
std::vector<double> band_profile(const CouplingMatrix& cm);

struct ZakResult {
  double phase = 0.0;    // (-pi, pi]
  double min_gap = 0.0;  // min_k (E_+ - E_-)
};

/// Berry phase of the lower band, -Im log prod_k <u_k|u_{k+dk}>, on n_k
/// uniform points with periodic closure. Throws NumericalError("gapless ...")
/// when the gap closes (min gap < 1e-9 max gap).
ZakResult zak_phase(const std::vector<double>& jbar, const Dimerization& dim, int n_k = 2000);

struct ZakSweepRow {
  double phi = 0.0;
  double eta_bar = 0.0;
  double zak_phase = 0.0;  // NaN when gapless
  double min_gap = 0.0;
};

/// Zak phase over the grid phis x eta_bars for a homogeneous profile.
std::vector<ZakSweepRow> zak_sweep(const std::vector<double>& jbar, const std::vector<double>& phis,
                                   const std::vector<double>& eta_bars, int n_k = 2000);

}  // namespace ionssh
