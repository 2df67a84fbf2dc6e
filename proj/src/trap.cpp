#include "ionssh/trap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ionssh/error.hpp"

namespace ionssh {

namespace {

constexpr double kMillimetre = 1e-3;

// Potential in natural units: U = sum a u^2 + b u^4 + sum_{i<j} 1/|u_i - u_j|.
struct ReducedPotential {
  double a;
  double b;
  double length;  // m

  static ReducedPotential from(const TrapConfig& cfg) {
    const auto& k = cfg.constants;
    const double q2 = k.coulomb_constant * k.elementary_charge * k.elementary_charge;
    const double c2 = cfg.axial_c2 * k.electron_volt / (kMillimetre * kMillimetre);
    const double c4 = cfg.axial_c4 * k.electron_volt / std::pow(kMillimetre, 4);
    const double ell = c2 > 0.0 ? std::cbrt(q2 / (2.0 * c2)) : std::pow(q2 / (4.0 * c4), 0.2);
    const double energy = q2 / ell;
    return {c2 * ell * ell / energy, c4 * std::pow(ell, 4) / energy, ell};
  }

  std::vector<double> gradient(const std::vector<double>& u) const {
    const std::size_t n = u.size();
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 2.0 * a * u[i] + 4.0 * b * u[i] * u[i] * u[i];
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d = u[i] - u[j];
        s -= (d > 0 ? 1.0 : -1.0) / (d * d);
      }
      g[i] = s;
    }
    return g;
  }

  RealMatrix hessian(const std::vector<double>& u) const {
    const std::size_t n = u.size();
    RealMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      double diag = 2.0 * a + 12.0 * b * u[i] * u[i];
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double c = 2.0 / std::pow(std::abs(u[i] - u[j]), 3);
        h(i, j) = -c;
        diag += c;
      }
      h(i, i) = diag;
    }
    return h;
  }

  // Equally spaced chain whose end ion balances the confining force against
  // the Coulomb push of the others.
  std::vector<double> initial_guess(int n) const {
    double harmonic = 0.0;
    for (int k = 1; k < n; ++k) harmonic += 1.0 / (double(k) * k);
    const double half = 0.5 * (n - 1);
    auto balance = [&](double s) {
      const double x = s * half;
      return 2.0 * a * x + 4.0 * b * x * x * x - harmonic / (s * s);
    };
    double lo = 1e-6, hi = 1.0;
    while (balance(hi) < 0.0 && hi < 1e12) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (balance(mid) < 0.0 ? lo : hi) = mid;
    }
    const double s = 0.5 * (lo + hi);
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = s * (i - half);
    return u;
  }
};

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

bool strictly_ascending(const std::vector<double>& u) {
  for (std::size_t i = 1; i < u.size(); ++i)
    if (!(u[i] > u[i - 1])) return false;
  return true;
}

}  // namespace

void TrapConfig::validate() const {
  if (n_ions < 2) throw ConfigError("trap: n_ions must be >= 2");
  if (!(com_radial_freq > 0.0)) throw ConfigError("trap: com_radial_freq must be > 0");
  if (!(ion_mass > 0.0)) throw ConfigError("trap: ion_mass must be > 0");
  if (axial_c4 < 0.0) throw ConfigError("trap: axial_c4 must be >= 0");
  if (axial_c2 <= 0.0 && axial_c4 <= 0.0)
    throw ConfigError("trap: potential is not confining (need c2 > 0 or c4 > 0)");
}

double natural_length(const TrapConfig& cfg) { return ReducedPotential::from(cfg).length; }

double equilibrium_residual(const TrapConfig& cfg, const std::vector<double>& positions) {
  const auto pot = ReducedPotential::from(cfg);
  std::vector<double> u(positions.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = positions[i] / pot.length;
  return norm2(pot.gradient(u));
}

std::vector<double> equilibrium_positions(const TrapConfig& cfg, const EquilibriumOptions& opt) {
  cfg.validate();
  const auto pot = ReducedPotential::from(cfg);
  const int n = cfg.n_ions;
  std::vector<double> u = pot.initial_guess(n);
  std::vector<double> g = pot.gradient(u);
  double res = norm2(g);

  int it = 0;
  for (; it < opt.max_iterations && res >= opt.gradient_tolerance; ++it) {
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = -g[i];
    const std::vector<double> step = solve(pot.hessian(u), rhs);

    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, alpha *= 0.5) {
      std::vector<double> trial(n);
      for (int i = 0; i < n; ++i) trial[i] = u[i] + alpha * step[i];
      if (!strictly_ascending(trial)) continue;
      const std::vector<double> gt = pot.gradient(trial);
      const double rt = norm2(gt);
      if (rt < res || halving == 59) {
        u = std::move(trial);
        g = gt;
        res = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "equilibrium_positions: ion order crossed at iteration " << it
          << " (bad initial guess or unphysical potential)";
      throw NumericalError(msg.str(), res);
    }
  }

  // Remove the last-ulp asymmetry so the chain is exactly reflection
  // symmetric; V is even so this is still a stationary point.
  for (int i = 0; i < n / 2; ++i) {
    const double s = 0.5 * (u[n - 1 - i] - u[i]);
    u[i] = -s;
    u[n - 1 - i] = s;
  }
  if (n % 2 == 1) u[n / 2] = 0.0;
  res = norm2(pot.gradient(u));

  if (res >= opt.gradient_tolerance) {
    std::ostringstream msg;
    msg << "equilibrium_positions: no convergence after " << it << " iterations, |grad| = " << res;
    throw NumericalError(msg.str(), res);
  }

  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = u[i] * pot.length;
  return x;
}

ModeSpectrum radial_modes(const TrapConfig& cfg, const std::vector<double>& positions) {
  cfg.validate();
  const std::size_t n = positions.size();
  if (n != static_cast<std::size_t>(cfg.n_ions))
    throw ConfigError("radial_modes: positions do not match n_ions");
  const auto& k = cfg.constants;
  const double coulomb = k.coulomb_constant * k.elementary_charge * k.elementary_charge / cfg.ion_mass;
  const double wr2 = cfg.com_radial_freq * cfg.com_radial_freq;

  RealMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = wr2;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double c = coulomb / std::pow(std::abs(positions[i] - positions[j]), 3);
      a(i, j) = c;
      diag -= c;
    }
    a(i, i) = diag;
  }

  const SymmetricEigen eig = eigh(a);
  ModeSpectrum out;
  out.positions = positions;
  out.frequencies.resize(n);
  out.participation = RealMatrix(n, n);
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t src = n - 1 - m;  // descending frequency
    const double w2 = eig.values[src];
    if (!(w2 > 0.0)) {
      std::ostringstream msg;
      msg << "radial_modes: mode " << (m + 1) << " has omega^2 = " << w2
          << " (zig-zag instability)";
      throw NumericalError(msg.str(), w2);
    }
    out.frequencies[m] = std::sqrt(w2);
    const double sign = eig.vectors(0, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.participation(i, m) = sign * eig.vectors(i, src);
  }
  return out;
}

ModeSpectrum solve_trap(const TrapConfig& cfg) {
  return radial_modes(cfg, equilibrium_positions(cfg));
}

}  // namespace ionssh
