#include "ionssh/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ionssh/error.hpp"
#include "ionssh/lsq.hpp"

namespace ionssh {

double mean_nearest_neighbour(const RealMatrix& j) {
  const std::size_t l = j.rows();
  if (l < 2) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < l; ++i) s += std::abs(j(i, i + 1));
  return s / static_cast<double>(l - 1);
}

CouplingMatrix CouplingMatrix::from_values(RealMatrix values, std::string label) {
  if (!values.square()) throw ConfigError("coupling matrix must be square");
  const std::size_t l = values.rows();
  double scale = 0.0;
  for (double v : values.data()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < l; ++i) {
    if (values(i, i) != 0.0) throw ConfigError("coupling matrix diagonal must be zero");
    for (std::size_t j = i + 1; j < l; ++j) {
      if (std::abs(values(i, j) - values(j, i)) > 1e-12 * scale) {
        std::ostringstream msg;
        msg << "coupling matrix not symmetric at (" << i + 1 << ", " << j + 1 << ")";
        throw ConfigError(msg.str());
      }
      values(j, i) = values(i, j);
    }
  }
  CouplingMatrix cm;
  cm.mean_nn = mean_nearest_neighbour(values);
  cm.values = std::move(values);
  cm.label = std::move(label);
  return cm;
}

void RamanConfig::validate(std::size_t n_ions) const {
  if (rabi.size() != n_ions) throw ConfigError("raman: rabi length does not match ion count");
  if (!(lamb_dicke_scale > 0.0)) throw ConfigError("raman: lamb_dicke_scale must be > 0");
  if (active_sites.empty()) throw ConfigError("raman: no active sites");
  for (std::size_t a = 0; a < active_sites.size(); ++a) {
    const int s = active_sites[a];
    if (s < 0 || static_cast<std::size_t>(s) >= n_ions)
      throw ConfigError("raman: active site index out of range");
    if (a > 0 && s <= active_sites[a - 1])
      throw ConfigError("raman: active sites must be strictly ascending");
  }
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < n_ions; ++i) {
    if (rabi[i] < 0.0) throw ConfigError("raman: rabi frequencies must be >= 0");
    if (rabi[i] != 0.0) {
      ++nonzero;
      if (!std::binary_search(active_sites.begin(), active_sites.end(), static_cast<int>(i)))
        throw ConfigError("raman: auxiliary ion with nonzero rabi frequency");
    }
  }
  if (nonzero == 0) throw ConfigError("raman: all rabi frequencies are zero");
  if (nonzero != active_sites.size())
    throw ConfigError("raman: every active site needs a nonzero rabi frequency");
}

CouplingMatrix ising_matrix(const ModeSpectrum& spec, const RamanConfig& rc) {
  const std::size_t n = spec.size();
  rc.validate(n);
  if (spec.frequencies.size() != n || spec.participation.rows() != n)
    throw ConfigError("ising_matrix: malformed mode spectrum");

  const double w_n = spec.frequencies.back();
  std::vector<double> inv_den(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double den = rc.detuning + w_n - spec.frequencies[k];
    if (std::abs(den) < kMinDenominator) {
      std::ostringstream msg;
      msg << "ising_matrix: beatnote resonant with mode " << (k + 1) << " (|detuning| = " << std::abs(den)
          << " rad/s)";
      throw ConfigError(msg.str());
    }
    inv_den[k] = 1.0 / (2.0 * den);
  }

  const std::size_t l = rc.active_sites.size();
  const double eta2 = rc.lamb_dicke_scale * rc.lamb_dicke_scale;
  RealMatrix j(l, l);
  for (std::size_t a = 0; a < l; ++a) {
    const std::size_t i = rc.active_sites[a];
    for (std::size_t b = a + 1; b < l; ++b) {
      const std::size_t m = rc.active_sites[b];
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        s += spec.participation(i, k) * spec.participation(m, k) * inv_den[k];
      const double v = eta2 * rc.rabi[i] * rc.rabi[m] * s;
      j(a, b) = v;
      j(b, a) = v;
    }
  }
  return CouplingMatrix::from_values(std::move(j), "ising");
}

double average_bond_strength(const CouplingMatrix& cm, int d) {
  const int l = static_cast<int>(cm.size());
  if (d < 1 || d > l - 1) {
    std::ostringstream msg;
    msg << "average_bond_strength: distance " << d << " outside [1, " << l - 1 << "]";
    throw ConfigError(msg.str());
  }
  double s = 0.0;
  for (int n = 0; n + d < l; ++n) s += std::abs(cm.values(n, n + d));
  return s / (l - d);
}

BandFit fit_band_profile(const CouplingMatrix& cm, int max_d) {
  const int l = static_cast<int>(cm.size());
  const int dmax = std::min(max_d, l - 1);
  if (dmax < 2) throw ConfigError("fit_band_profile: need at least two bands");
  if (!(cm.mean_nn > 0.0)) throw ConfigError("fit_band_profile: zero matrix");

  std::vector<double> d(dmax), y(dmax);
  for (int k = 1; k <= dmax; ++k) {
    d[k - 1] = k;
    y[k - 1] = average_bond_strength(cm, k) / cm.mean_nn;
  }

  // Log-linear start.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int k = 0; k < dmax; ++k) {
    if (!(y[k] > 0.0)) continue;
    const double ly = std::log(y[k]);
    sx += d[k];
    sy += ly;
    sxx += d[k] * d[k];
    sxy += d[k] * ly;
    ++cnt;
  }
  double kappa0 = 1.0, a0 = y[0] * std::exp(1.0);
  if (cnt >= 2) {
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    kappa0 = -slope;
    a0 = std::exp((sy - slope * sx) / cnt);
  }

  const auto res = levenberg_marquardt(
      [&](const std::vector<double>& p) {
        std::vector<double> r(dmax);
        for (int k = 0; k < dmax; ++k) r[k] = p[0] * std::exp(-p[1] * d[k]) - y[k];
        return r;
      },
      {a0, kappa0});

  BandFit fit;
  fit.amplitude = res.params[0];
  fit.decay = res.params[1];
  fit.rms = std::sqrt(2.0 * res.cost / dmax);
  fit.max_distance = dmax;
  return fit;
}

CouplingMatrix stagger_correct(const CouplingMatrix& cm) {
  RealMatrix v = cm.values;
  const std::size_t l = v.rows();
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j)
      if ((i + j) % 2 == 1) v(i, j) = -v(i, j);
  CouplingMatrix out;
  out.values = std::move(v);
  out.mean_nn = cm.mean_nn;
  out.label = cm.label + "+stagger";
  return out;
}

CouplingMatrix exponential_profile(double j, double xi, int l) {
  if (!(j > 0.0)) throw ConfigError("exponential_profile: J must be > 0");
  if (!(xi > 0.0)) throw ConfigError("exponential_profile: xi must be > 0");
  if (l < 2) throw ConfigError("exponential_profile: L must be >= 2");
  RealMatrix v(l, l);
  for (int a = 0; a < l; ++a)
    for (int b = 0; b < l; ++b)
      if (a != b) v(a, b) = j * std::exp(-std::abs(a - b) / xi);
  std::ostringstream label;
  label << "exponential(xi=" << xi << ")";
  return CouplingMatrix::from_values(std::move(v), label.str());
}

CouplingMatrix normalized(const CouplingMatrix& cm, double target_mean_nn) {
  if (!(cm.mean_nn > 0.0)) throw ConfigError("normalized: matrix has no nearest-neighbour bonds");
  const double f = target_mean_nn / cm.mean_nn;
  CouplingMatrix out = cm;
  for (double& v : out.values.data()) v *= f;
  out.mean_nn = mean_nearest_neighbour(out.values);
  return out;
}

CalibrationResult calibrate_rabi(const ModeSpectrum& spec, double detuning,
                                 const std::vector<int>& active_sites,
                                 const std::vector<double>& target_nn,
                                 const std::optional<std::vector<double>>& initial_rabi,
                                 double lamb_dicke_scale) {
  const std::size_t n = spec.size();
  const std::size_t l = active_sites.size();
  if (l < 2) throw ConfigError("calibrate_rabi: need at least two active sites");
  if (target_nn.size() != l - 1) throw ConfigError("calibrate_rabi: target needs L-1 bonds");
  for (double t : target_nn)
    if (!(t > 0.0)) throw ConfigError("calibrate_rabi: target profile must be positive");

  RamanConfig rc;
  rc.detuning = detuning;
  rc.lamb_dicke_scale = lamb_dicke_scale;
  rc.active_sites = active_sites;
  rc.rabi.assign(n, 0.0);
  if (initial_rabi) {
    if (initial_rabi->size() != l) throw ConfigError("calibrate_rabi: initial guess needs L values");
    for (std::size_t a = 0; a < l; ++a) rc.rabi[active_sites[a]] = (*initial_rabi)[a];
  } else {
    for (int s : active_sites) rc.rabi[s] = 1.0;
  }

  auto nn_log_error = [&](const CouplingMatrix& cm, std::vector<double>& err) {
    double worst = 0.0;
    for (std::size_t b = 0; b + 1 < l; ++b) {
      const double actual = std::abs(cm.values(b, b + 1));
      if (!(actual > 0.0)) throw NumericalError("calibrate_rabi: vanishing nearest-neighbour bond");
      err[b] = std::log(target_nn[b] / actual);
      worst = std::max(worst, std::abs(actual / target_nn[b] - 1.0));
    }
    return worst;
  };

  std::vector<double> err(l - 1);
  CouplingMatrix cm = ising_matrix(spec, rc);
  double residual = nn_log_error(cm, err);
  int it = 0;
  for (; it < 100 && residual > 1e-12; ++it) {
    for (std::size_t a = 0; a < l; ++a) {
      double s = 0.0;
      int cnt = 0;
      if (a > 0) s += err[a - 1], ++cnt;
      if (a + 1 < l) s += err[a], ++cnt;
      rc.rabi[active_sites[a]] *= std::exp(0.5 * s / cnt);
    }
    cm = ising_matrix(spec, rc);
    residual = nn_log_error(cm, err);
  }
  if (residual > 0.02) {
    std::ostringstream msg;
    msg << "calibrate_rabi: nearest-neighbour bonds off by " << residual << " after " << it
        << " sweeps";
    throw NumericalError(msg.str(), residual);
  }
  cm.label = "calibrated";
  return {rc, cm, it, residual};
}

ChainPreset chain_preset(const std::string& name) {
  ChainPreset p;
  p.name = name;
  p.trap.com_radial_freq = mhz_to_rad_s(3.08);
  if (name == "config1" || name == "config2") {
    p.trap.n_ions = 15;
    p.trap.axial_c2 = 0.11;
    p.trap.axial_c4 = 1.6e3;
    for (int i = 1; i <= 12; ++i) p.active_sites.push_back(i);
    p.mean_nn = khz_to_rad_s(0.25);
    if (name == "config1") {
      p.relative_rabi = {1.0, 1.0, 0.65, 0.87, 0.69, 0.97, 0.74, 0.97, 0.68, 0.86, 0.65, 0.99};
      p.detuning = khz_to_rad_s(-99.0);
      p.stagger = true;
    } else {
      p.relative_rabi = {1.0, 1.0, 1.10, 1.07, 1.16, 1.10, 1.17, 1.10, 1.16, 1.07, 1.10, 1.0};
      p.detuning = khz_to_rad_s(29.0);
      p.detuning_from_com = true;
    }
  } else if (name == "config3") {
    p.trap.n_ions = 27;
    p.trap.axial_c2 = -0.1;
    p.trap.axial_c4 = 235.0;
    for (int i = 2; i <= 23; ++i) p.active_sites.push_back(i);
    p.relative_rabi = {1.0,  0.59, 0.59, 0.4,  0.47, 0.37, 0.50, 0.44, 0.60, 0.51, 0.68,
                       0.54, 0.68, 0.52, 0.62, 0.45, 0.53, 0.39, 0.49, 0.42, 0.61, 0.60};
    p.detuning = khz_to_rad_s(-45.0);
    p.mean_nn = khz_to_rad_s(0.2);
    p.stagger = true;
  } else {
    throw ConfigError("unknown chain preset '" + name + "' (expected config1, config2, config3)");
  }
  return p;
}

PresetResult build_preset(const ChainPreset& preset) {
  PresetResult out;
  out.modes = solve_trap(preset.trap);
  if (preset.relative_rabi.size() != preset.active_sites.size())
    throw ConfigError("preset: rabi profile length does not match active sites");

  RamanConfig rc;
  rc.detuning = preset.detuning;
  if (preset.detuning_from_com)
    rc.detuning += out.modes.frequencies.front() - out.modes.frequencies.back();
  rc.active_sites = preset.active_sites;
  rc.rabi.assign(preset.trap.n_ions, 0.0);
  for (std::size_t a = 0; a < preset.active_sites.size(); ++a)
    rc.rabi[preset.active_sites[a]] = preset.relative_rabi[a];

  // J is bilinear in W, so one rescale of W_1 hits the target mean bond.
  const CouplingMatrix unit = ising_matrix(out.modes, rc);
  if (!(unit.mean_nn > 0.0)) throw NumericalError("preset: vanishing nearest-neighbour bonds");
  const double w1 = std::sqrt(preset.mean_nn / unit.mean_nn);
  for (double& w : rc.rabi) w *= w1;

  CouplingMatrix cm = ising_matrix(out.modes, rc);
  if (preset.stagger) cm = stagger_correct(cm);
  cm.label = preset.name;
  out.raman = std::move(rc);
  out.matrix = std::move(cm);
  return out;
}

}  // namespace ionssh
