#include "ionssh/lsq.hpp"

#include <algorithm>
#include <cmath>

#include "ionssh/linalg.hpp"

namespace ionssh {

namespace {

double half_sq(const std::vector<double>& r) {
  double s = 0.0;
  for (double x : r) s += x * x;
  return 0.5 * s;
}

}  // namespace

LsqResult levenberg_marquardt(const ResidualFn& f, std::vector<double> p, int max_iter,
                              double tol) {
  const std::size_t np = p.size();
  std::vector<double> r = f(p);
  double cost = half_sq(r);
  double lambda = 1e-3;
  LsqResult out;

  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    const std::size_t nr = r.size();
    RealMatrix jac(nr, np);
    for (std::size_t k = 0; k < np; ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(p[k]));
      std::vector<double> pp = p, pm = p;
      pp[k] += h;
      pm[k] -= h;
      const std::vector<double> rp = f(pp), rm = f(pm);
      for (std::size_t i = 0; i < nr; ++i) jac(i, k) = (rp[i] - rm[i]) / (2.0 * h);
    }
    RealMatrix jtj(np, np);
    std::vector<double> g(np, 0.0);
    for (std::size_t a = 0; a < np; ++a) {
      for (std::size_t i = 0; i < nr; ++i) g[a] += jac(i, a) * r[i];
      for (std::size_t b = 0; b < np; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < nr; ++i) s += jac(i, a) * jac(i, b);
        jtj(a, b) = s;
      }
    }

    bool improved = false;
    for (int tries = 0; tries < 30 && !improved; ++tries) {
      RealMatrix m = jtj;
      for (std::size_t a = 0; a < np; ++a) m(a, a) += lambda * std::max(jtj(a, a), 1e-300);
      std::vector<double> rhs(np);
      for (std::size_t a = 0; a < np; ++a) rhs[a] = -g[a];
      std::vector<double> step;
      try {
        step = solve(m, rhs);
      } catch (...) {
        lambda *= 10.0;
        continue;
      }
      std::vector<double> trial(np);
      for (std::size_t a = 0; a < np; ++a) trial[a] = p[a] + step[a];
      std::vector<double> rt = f(trial);
      const double ct = half_sq(rt);
      if (std::isfinite(ct) && ct <= cost) {
        const double drop = cost - ct;
        double step_norm = 0.0, p_norm = 0.0;
        for (std::size_t a = 0; a < np; ++a) {
          step_norm = std::max(step_norm, std::abs(step[a]));
          p_norm = std::max(p_norm, std::abs(trial[a]));
        }
        p = std::move(trial);
        r = std::move(rt);
        cost = ct;
        lambda = std::max(lambda * 0.3, 1e-12);
        improved = true;
        if (drop <= tol * std::max(cost, 1e-300) || step_norm <= tol * std::max(p_norm, 1.0)) {
          out.converged = true;
        }
      } else {
        lambda *= 10.0;
      }
    }
    if (!improved) {
      out.converged = true;  // no descent direction left: at a minimum to rounding
      break;
    }
    if (out.converged) break;
  }
  out.params = p;
  out.residuals = r;
  out.cost = cost;
  return out;
}

}  // namespace ionssh
