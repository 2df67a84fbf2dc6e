#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ionssh/coupling.hpp"
#include "ionssh/dynamics.hpp"
#include "ionssh/floquet.hpp"
#include "ionssh/linalg.hpp"

namespace ionssh {

// ---- spreading front ----------------------------------------------------

struct SpreadFit {
  double v_s = 0.0;  // sites per unit tau
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::vector<double> crossing_times;  // per site (0-based), NaN if never crossed
  int n_crossed = 0;
  double threshold = 0.0;
};

/// First tau at which p_j = (m_j + 1) / 2 rises through `threshold`
/// (default 1/L), linearly interpolated, for every site that starts below it;
/// then least squares of tau_j = (j - 1) / v_s through the origin, with a 95%
/// Student-t interval. Throws NumericalError("excitation localized ...") when
/// fewer than 3 sites cross.
SpreadFit spreading_rate(const Trajectory& traj, double threshold = -1.0);

// ---- late-time averages ---------------------------------------------------

inline constexpr double kLateWindowBegin = 1.5;
inline constexpr double kLateWindowEnd = 2.0;

/// Window average of m_j over [begin, end] (trapezoid, linear interpolation at
/// the window edges). j is 1-based.
double late_time_average(const Trajectory& traj, int j, double begin = kLateWindowBegin,
                         double end = kLateWindowEnd);

/// late_time_average for every site.
std::vector<double> late_time_profile(const Trajectory& traj, double begin = kLateWindowBegin,
                                      double end = kLateWindowEnd);

/// (1/(L-1)) sum_{i != j} values[i]; j is 1-based.
double cross_site_mean(const std::vector<double>& values, int j);

/// Pearson correlation of two equally long series.
double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b);

/// Time series of site j (1-based).
std::vector<double> site_series(const Trajectory& traj, int j);

/// Late-time mean magnetization of the left half minus that of the right
/// half: 2 for a frozen domain wall, 0 once the wall has melted.
double domain_contrast(const Trajectory& traj, double begin = kLateWindowBegin,
                       double end = kLateWindowEnd);

// ---- tomography -------------------------------------------------------------

struct DampedCosineFit {
  double j = 0.0;      // y = amplitude exp(-gamma x) cos(pi j x)
  double gamma = 0.0;
  double amplitude = 0.0;
  double rms = 0.0;
};

/// Levenberg-Marquardt fit; j starts at the DFT peak, gamma at 0. Samples
/// must be uniformly spaced.
DampedCosineFit fit_damped_cosine(const std::vector<double>& x, const std::vector<double>& y);

struct TomographyResult {
  int i = 0, j = 0;            // 1-based chain sites
  double j_fit = 0.0;          // same units as bond_rep(), 1/s
  double gamma_fit = 0.0;      // 1/s
  double rms = 0.0;            // fit residual
  bool suppressed = false;
  std::vector<double> tau;     // samples of the staggered signal
  std::vector<double> signal;  // <s_z^i - s_z^j>
};

/// Reported bond for the fit model cos(pi J t): 2 J_ij / pi.
double bond_rep(double j_ij);

/// Maximum rms residual accepted by bond_tomography.
inline constexpr double kTomographyMaxRms = 0.05;
/// Signal excursion below which a bond is reported as suppressed.
inline constexpr double kTomographyFloor = 1e-2;

/// Two illuminated spins i, j (1-based sites of `cm`) evolved under the full
/// drive from |up_i down_j> up to tau_max, with the signal fitted to
/// exp(-G t) cos(pi J t). J_ij is taken from `cm`; the drive phases use the
/// chain indices i, j. tau is measured in units of cm.mean_nn. A modulated
/// drive is sampled stroboscopically at whole drive periods (n_samples is
/// then ignored); otherwise n_samples uniform points are used.
TomographyResult bond_tomography(const CouplingMatrix& cm, const FloquetDrive& drive, int i, int j,
                                 double tau_max, int n_samples = 400, double tol = 1e-9);

// ---- edge states --------------------------------------------------------------

inline constexpr double kEdgeFraction = 0.1;
inline constexpr double kEdgeWeight = 0.5;
inline constexpr double kGapJumpFactor = 3.0;

struct EdgeState {
  double energy = 0.0;
  double edge_weight = 0.0;
  double localization_length = 0.0;  // sites; inf if not decaying
  std::vector<double> vector;
};

struct EdgeSpectrum {
  std::vector<double> eigenvalues;  // ascending
  bool gapless = true;
  double gap_low = 0.0, gap_high = 0.0;
  int edge_sites = 0;  // sites counted at each end
  std::vector<EdgeState> midgap;
};

/// Mid-gap states: eigenvectors with more than half their weight on the outer
/// max(1, round(0.1 L)) sites at each end, whose energy lies strictly inside
/// the largest jump of the remaining (bulk) spectrum. The spectrum is gapless
/// when that jump is below 3x the median bulk spacing.
EdgeSpectrum edge_state_spectrum(const CouplingMatrix& dm);

// ---- domain walls -------------------------------------------------------------

struct DomainWallTable {
  std::vector<double> energy_left, energy_right;
  RealMatrix modes_left, modes_right;  // spin waves as columns
  RealMatrix g;                        // g(n, m)
};

/// Splits J into left/right halves and their coupling block, diagonalizes
/// each half and returns g_nm = 2 sum_{i in L, j in R} (J_LR)_ij psiL_n,i psiR_m,j.
DomainWallTable domainwall_couplings(const CouplingMatrix& dm);

// ---- shot noise ----------------------------------------------------------------

struct ShotTable {
  std::vector<double> tau;
  Matrix<std::int64_t> up_counts;  // (n_times, L)
  RealMatrix mean;                 // estimated m_j
  RealMatrix sigma;                // binomial 1-sigma on m_j
  int shots = 0;
  std::uint64_t seed = 0;
};

/// Binomial projective measurements with p = (m_j + 1) / 2, drawn from a
/// seeded mt19937_64 (deterministic per build).
ShotTable sample_shots(const Trajectory& traj, int shots, std::uint64_t seed);

}  // namespace ionssh
