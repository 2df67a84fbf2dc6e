#include "ionssh/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "ionssh/error.hpp"
#include "ionssh/hamiltonian.hpp"
#include "ionssh/lsq.hpp"

namespace ionssh {

using std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SpreadFit spreading_rate(const Trajectory& traj, double threshold) {
  const std::size_t l = traj.n_sites(), nt = traj.n_times();
  if (nt < 2 || l < 2) throw ConfigError("spreading_rate: trajectory too short");
  SpreadFit fit;
  fit.threshold = threshold > 0.0 ? threshold : 1.0 / static_cast<double>(l);
  fit.crossing_times.assign(l, kNaN);

  double sxx = 0.0, sxy = 0.0;
  std::vector<double> xs, ys;
  for (std::size_t j = 0; j < l; ++j) {
    auto p = [&](std::size_t k) { return 0.5 * (traj.m(k, j) + 1.0); };
    if (p(0) >= fit.threshold) continue;
    for (std::size_t k = 1; k < nt; ++k) {
      if (p(k) >= fit.threshold) {
        const double f = (fit.threshold - p(k - 1)) / (p(k) - p(k - 1));
        fit.crossing_times[j] = traj.tau[k - 1] + f * (traj.tau[k] - traj.tau[k - 1]);
        break;
      }
    }
    if (std::isnan(fit.crossing_times[j])) continue;
    const double x = static_cast<double>(j);  // j - 1 for 1-based sites
    xs.push_back(x);
    ys.push_back(fit.crossing_times[j]);
    sxx += x * x;
    sxy += x * fit.crossing_times[j];
  }
  fit.n_crossed = static_cast<int>(xs.size());
  if (fit.n_crossed < 3) {
    std::ostringstream msg;
    msg << "spreading_rate: excitation localized, no spreading front (" << fit.n_crossed
        << " sites crossed p = " << fit.threshold << ")";
    throw NumericalError(msg.str(), fit.n_crossed);
  }
  if (!(sxx > 0.0)) throw NumericalError("spreading_rate: degenerate front");
  const double slope = sxy / sxx;
  if (!(slope > 0.0)) throw NumericalError("spreading_rate: non-positive front slope", slope);

  double ss = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) ss += std::pow(ys[k] - slope * xs[k], 2);
  const int dof = fit.n_crossed - 1;
  const double se = std::sqrt(ss / dof / sxx);
  const double tq = boost::math::quantile(boost::math::students_t(dof), 0.975);
  fit.v_s = 1.0 / slope;
  const double hi_slope = slope + tq * se, lo_slope = slope - tq * se;
  fit.ci_low = 1.0 / hi_slope;
  fit.ci_high = lo_slope > 0.0 ? 1.0 / lo_slope : std::numeric_limits<double>::infinity();
  return fit;
}

namespace {

double interp(const std::vector<double>& x, const std::vector<double>& y, double at) {
  const auto it = std::lower_bound(x.begin(), x.end(), at);
  if (it == x.begin()) return y.front();
  if (it == x.end()) return y.back();
  const std::size_t k = static_cast<std::size_t>(it - x.begin());
  if (x[k] == at) return y[k];
  const double f = (at - x[k - 1]) / (x[k] - x[k - 1]);
  return y[k - 1] + f * (y[k] - y[k - 1]);
}

}  // namespace

std::vector<double> site_series(const Trajectory& traj, int j) {
  if (j < 1 || j > static_cast<int>(traj.n_sites())) throw ConfigError("site index out of range");
  std::vector<double> s(traj.n_times());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = traj.m(k, j - 1);
  return s;
}

double late_time_average(const Trajectory& traj, int j, double begin, double end) {
  if (!(end > begin)) throw ConfigError("late_time_average: empty window");
  if (traj.tau.empty() || traj.tau.front() > begin + 1e-12 || traj.tau.back() < end - 1e-12)
    throw ConfigError("late_time_average: trajectory does not cover the averaging window");
  const std::vector<double> y = site_series(traj, j);
  const auto& x = traj.tau;
  std::vector<double> px{begin}, py{interp(x, y, begin)};
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k] > begin && x[k] < end) px.push_back(x[k]), py.push_back(y[k]);
  px.push_back(end);
  py.push_back(interp(x, y, end));
  double s = 0.0;
  for (std::size_t k = 1; k < px.size(); ++k) s += 0.5 * (py[k] + py[k - 1]) * (px[k] - px[k - 1]);
  return s / (end - begin);
}

std::vector<double> late_time_profile(const Trajectory& traj, double begin, double end) {
  std::vector<double> out(traj.n_sites());
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = late_time_average(traj, static_cast<int>(j + 1), begin, end);
  return out;
}

double cross_site_mean(const std::vector<double>& values, int j) {
  const int l = static_cast<int>(values.size());
  if (l < 2 || j < 1 || j > l) throw ConfigError("cross_site_mean: bad site index");
  double s = 0.0;
  for (int i = 0; i < l; ++i)
    if (i != j - 1) s += values[i];
  return s / (l - 1);
}

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw ConfigError("pearson_correlation: bad series");
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) ma += a[k], mb += b[k];
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

double domain_contrast(const Trajectory& traj, double begin, double end) {
  const std::vector<double> s = late_time_profile(traj, begin, end);
  const std::size_t h = s.size() / 2;
  if (h == 0) throw ConfigError("domain_contrast: chain too short");
  double left = 0, right = 0;
  for (std::size_t j = 0; j < h; ++j) left += s[j];
  for (std::size_t j = h; j < s.size(); ++j) right += s[j];
  return left / h - right / (s.size() - h);
}

DampedCosineFit fit_damped_cosine(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 8 || y.size() != n) throw ConfigError("fit_damped_cosine: need >= 8 samples");
  const double dx = (x.back() - x.front()) / (n - 1);
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs(x[k] - x[k - 1] - dx) > 1e-9 * std::max(1.0, std::abs(dx)))
      throw ConfigError("fit_damped_cosine: samples must be uniformly spaced");

  // DFT peak on an 8x zero-padded grid. The mean is kept: a cosine with less
  // than one period in the window still peaks near its frequency.
  const double span = dx * n;
  const int n_freq = static_cast<int>(8 * n / 2);
  double best_f = 0.0, best_p = -1.0;
  for (int q = 1; q <= n_freq; ++q) {
    const double f = q / (8.0 * span);
    cplx s{};
    for (std::size_t k = 0; k < n; ++k) s += y[k] * std::polar(1.0, -2.0 * pi * f * (x[k] - x.front()));
    const double p = std::norm(s);
    if (p > best_p) best_p = p, best_f = f;
  }
  // cos(pi j x) has frequency j / 2.
  std::vector<double> p0{y.front() != 0.0 ? y.front() : 1.0, 0.0, 2.0 * best_f};
  auto model = [&](const std::vector<double>& p) {
    std::vector<double> r(n);
    for (std::size_t k = 0; k < n; ++k)
      r[k] = p[0] * std::exp(-p[1] * x[k]) * std::cos(pi * p[2] * x[k]) - y[k];
    return r;
  };
  const LsqResult res = levenberg_marquardt(model, p0, 500, 1e-15);
  DampedCosineFit fit;
  fit.amplitude = res.params[0];
  fit.gamma = res.params[1];
  fit.j = std::abs(res.params[2]);
  fit.rms = std::sqrt(2.0 * res.cost / n);
  return fit;
}

double bond_rep(double j_ij) { return 2.0 * j_ij / pi; }

TomographyResult bond_tomography(const CouplingMatrix& cm, const FloquetDrive& drive, int i, int j,
                                 double tau_max, int n_samples, double tol) {
  const int l = static_cast<int>(cm.size());
  if (i == j || i < 1 || j < 1 || i > l || j > l) throw ConfigError("bond_tomography: bad bond");
  if (!(tau_max > 0.0) || n_samples < 8) throw ConfigError("bond_tomography: bad sampling");
  if (!(cm.mean_nn > 0.0)) throw ConfigError("bond_tomography: coupling unit undefined");
  const double unit = cm.mean_nn;

  RealMatrix pair(2, 2);
  pair(0, 1) = pair(1, 0) = cm.values(i - 1, j - 1);
  CouplingMatrix two;
  two.values = pair;
  two.mean_nn = std::abs(pair(0, 1));
  two.label = "pair";
  const Hamiltonian h = build_full_hamiltonian(two, drive, std::vector<int>{i, j});
  const SpinState s0 = SpinState::product(2, 0b01, true);

  EvolveOptions opt;
  opt.tol = tol;
  opt.coupling_unit = unit;
  // With a modulated field the spins carry micromotion at the drive
  // frequency; sampling at whole drive periods (where the accumulated drive
  // phase vanishes) sees only the secular exchange.
  std::vector<double> grid;
  if (drive.amplitude() != 0.0) {
    const double period = 2.0 * unit / drive.omega;  // in tau
    for (int k = 0; k * period <= tau_max * (1.0 + 1e-12); ++k) grid.push_back(k * period);
    if (grid.size() < 8) throw ConfigError("bond_tomography: tau_max spans fewer than 7 drive periods");
  } else {
    grid = tau_grid(tau_max, n_samples);
  }
  const Trajectory tr = evolve(s0, h, grid, opt);

  TomographyResult out;
  out.i = i;
  out.j = j;
  out.tau = grid;
  out.signal.resize(grid.size());
  double excursion = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.signal[k] = 0.5 * (tr.m(k, 0) - tr.m(k, 1));
    excursion = std::max(excursion, 1.0 - out.signal[k]);
  }

  // tau -> t: pi J t = pi (J unit / pi) tau_coefficient.
  const double to_rate = unit / pi;
  if (excursion < kTomographyFloor) {
    // Barely moving signal: 1 - s ~ (pi J t)^2 / 2.
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double x2 = grid[k] * grid[k];
      sxx += x2 * x2;
      sxy += x2 * (1.0 - out.signal[k]);
    }
    const double c = std::max(sxy / sxx, 0.0);
    out.j_fit = std::sqrt(2.0 * c) / pi * to_rate;
    out.gamma_fit = 0.0;
    out.suppressed = true;
    double ss = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
      ss += std::pow(1.0 - c * grid[k] * grid[k] - out.signal[k], 2);
    out.rms = std::sqrt(ss / grid.size());
    return out;
  }

  const DampedCosineFit fit = fit_damped_cosine(grid, out.signal);
  out.j_fit = fit.j * to_rate;
  out.gamma_fit = fit.gamma * to_rate;
  out.rms = fit.rms;
  if (fit.rms > kTomographyMaxRms) {
    std::ostringstream msg;
    msg << "bond_tomography: fit residual " << fit.rms << " above " << kTomographyMaxRms << " for bond ("
        << i << ", " << j << ")";
    throw NumericalError(msg.str(), fit.rms);
  }
  return out;
}

EdgeSpectrum edge_state_spectrum(const CouplingMatrix& dm) {
  const int l = static_cast<int>(dm.size());
  if (l < 4) throw ConfigError("edge_state_spectrum: chain too short");
  if (asymmetry(dm.values) > 0.0) throw ConfigError("edge_state_spectrum: matrix not symmetric");
  const SymmetricEigen eig = eigh(dm.values);
  EdgeSpectrum out;
  out.eigenvalues = eig.values;
  out.edge_sites = std::max(1, static_cast<int>(std::lround(kEdgeFraction * l)));
  const int e = out.edge_sites;

  std::vector<int> candidates, bulk;
  std::vector<double> weight(l);
  for (int k = 0; k < l; ++k) {
    double w = 0.0;
    for (int i = 0; i < l; ++i)
      if (i < e || i >= l - e) w += eig.vectors(i, k) * eig.vectors(i, k);
    weight[k] = w;
    (w > kEdgeWeight ? candidates : bulk).push_back(k);
  }
  if (bulk.size() < 3) return out;

  std::vector<double> gaps;
  double best = -1.0;
  std::size_t at = 0;
  for (std::size_t q = 1; q < bulk.size(); ++q) {
    const double g = eig.values[bulk[q]] - eig.values[bulk[q - 1]];
    gaps.push_back(g);
    if (g > best) best = g, at = q;
  }
  std::vector<double> sorted = gaps;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  double median = sorted[sorted.size() / 2];
  if (sorted.size() % 2 == 0) {
    const double lower = *std::max_element(sorted.begin(), sorted.begin() + sorted.size() / 2);
    median = 0.5 * (median + lower);
  }
  if (best < kGapJumpFactor * median) return out;  // gapless

  out.gapless = false;
  out.gap_low = eig.values[bulk[at - 1]];
  out.gap_high = eig.values[bulk[at]];
  for (int k : candidates) {
    const double en = eig.values[k];
    if (!(en > out.gap_low && en < out.gap_high)) continue;
    EdgeState st;
    st.energy = en;
    st.edge_weight = weight[k];
    st.vector.resize(l);
    double wl = 0.0, amax = 0.0;
    for (int i = 0; i < l; ++i) {
      st.vector[i] = eig.vectors(i, k);
      if (i < l / 2) wl += st.vector[i] * st.vector[i];
      amax = std::max(amax, std::abs(st.vector[i]));
    }
    // Envelope fit of log|psi| against distance from the heavier edge, on
    // two-site cells so that a vanishing sublattice does not bias the slope.
    const bool from_left = wl >= 0.5;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int q = 0; q < l / 2; q += 2) {
      const double a0 = st.vector[from_left ? q : l - 1 - q];
      const double a1 = st.vector[from_left ? q + 1 : l - 2 - q];
      const double a = std::hypot(a0, a1);
      if (a <= 1e-12 * amax) continue;
      const double ly = std::log(a);
      sx += q, sy += ly, sxx += double(q) * q, sxy += q * ly, ++cnt;
    }
    const double slope = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : 0.0;
    st.localization_length = slope < 0.0 ? -1.0 / slope : std::numeric_limits<double>::infinity();
    out.midgap.push_back(std::move(st));
  }
  return out;
}

DomainWallTable domainwall_couplings(const CouplingMatrix& dm) {
  const std::size_t l = dm.size();
  if (l % 2 != 0 || l < 2) throw ConfigError("domainwall_couplings: L must be even");
  const std::size_t h = l / 2;
  RealMatrix jl(h, h), jr(h, h), jlr(h, h);
  for (std::size_t a = 0; a < h; ++a)
    for (std::size_t b = 0; b < h; ++b) {
      jl(a, b) = dm.values(a, b);
      jr(a, b) = dm.values(h + a, h + b);
      jlr(a, b) = dm.values(a, h + b);
    }
  const SymmetricEigen el = eigh(jl), er = eigh(jr);
  DomainWallTable t;
  t.energy_left = el.values;
  t.energy_right = er.values;
  t.modes_left = el.vectors;
  t.modes_right = er.vectors;
  // g = 2 psiL^T J_LR psiR
  t.g = multiply(transpose(el.vectors), multiply(jlr, er.vectors));
  for (double& v : t.g.data()) v *= 2.0;
  return t;
}

ShotTable sample_shots(const Trajectory& traj, int shots, std::uint64_t seed) {
  if (shots < 1) throw ConfigError("sample_shots: shots must be >= 1");
  const std::size_t nt = traj.n_times(), l = traj.n_sites();
  ShotTable t;
  t.tau = traj.tau;
  t.shots = shots;
  t.seed = seed;
  t.up_counts = Matrix<std::int64_t>(nt, l);
  t.mean = RealMatrix(nt, l);
  t.sigma = RealMatrix(nt, l);
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < nt; ++k)
    for (std::size_t j = 0; j < l; ++j) {
      const double p = std::clamp(0.5 * (traj.m(k, j) + 1.0), 0.0, 1.0);
      std::binomial_distribution<std::int64_t> dist(shots, p);
      const std::int64_t c = dist(rng);
      t.up_counts(k, j) = c;
      const double ph = static_cast<double>(c) / shots;
      t.mean(k, j) = 2.0 * ph - 1.0;
      t.sigma(k, j) = 2.0 * std::sqrt(ph * (1.0 - ph) / shots);
    }
  return t;
}

}  // namespace ionssh
