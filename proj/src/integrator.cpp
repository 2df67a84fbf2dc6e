#include "ionssh/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "ionssh/error.hpp"

namespace ionssh {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

using Vec = std::vector<cplx>;

// The stages store H psi; the true derivative is -i H psi, so every
// coefficient c applied to a stage becomes -i c h.
inline cplx mih(double c, double h) { return {0.0, -c * h}; }

}  // namespace

OdeStats integrate_schrodinger(const ApplyH& hfun, Vec& y, double t0, const std::vector<double>& t_out,
                               const OutputFn& out, const OdeOptions& opt,
                               const simd::KernelTable& kt) {
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < t_out.size(); ++i) {
    if (t_out[i] < t0 || (i > 0 && t_out[i] < t_out[i - 1]))
      throw ConfigError("integrate: output times must be non-decreasing and >= t0");
  }
  OdeStats st;
  if (t_out.empty()) return st;

  Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ys(n), y1(n), err(n);
  std::array<Vec, 5> r;
  for (auto& v : r) v.resize(n);

  auto f = [&](double t, const Vec& x, Vec& k) {
    hfun(t, x.data(), k.data());
    ++st.evaluations;
  };
  auto scaled_norm = [&](const Vec& e, const Vec& a, const Vec& b) {
    return std::sqrt(kt.weighted_error_sq(e.data(), a.data(), b.data(), opt.atol, opt.rtol, n));
  };

  double t = t0;
  const double t_end = t_out.back();
  const double span = t_end - t0;
  std::size_t next = 0;
  while (next < t_out.size() && t_out[next] == t0) out(next++, y);
  if (next == t_out.size()) return st;

  f(t, y, k1);

  // Initial step (Hairer-Wanner style estimate).
  double h = opt.initial_step;
  if (!(h > 0.0)) {
    const double dn0 = scaled_norm(y, y, y);
    const double dn1 = scaled_norm(k1, y, y);
    double h0 = (dn0 < 1e-5 || dn1 < 1e-5) ? 1e-6 : 0.01 * dn0 / dn1;
    h0 = std::min(h0, t_end - t);
    y1 = y;
    kt.axpy(mih(1.0, h0), k1.data(), y1.data(), n);
    f(t + h0, y1, k2);
    for (std::size_t i = 0; i < n; ++i) err[i] = (k2[i] - k1[i]) / h0;
    const double dn2 = scaled_norm(err, y, y);
    const double m = std::max(dn1, dn2);
    const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
    h = std::min(100.0 * h0, h1);
  }
  h = std::min(h, t_end - t);
  st.min_step = h;

  bool last_rejected = false;
  while (next < t_out.size()) {
    if (st.accepted + st.rejected >= opt.max_steps) {
      std::ostringstream msg;
      msg << "integrate: step budget of " << opt.max_steps << " exhausted at t = " << t;
      throw NumericalError(msg.str(), t);
    }
    if (h < 1e-14 * std::max(std::abs(t), std::abs(t_end)) || !(h > 0.0)) {
      std::ostringstream msg;
      msg << "integrate: step size underflow (h = " << h << ") at t = " << t;
      throw NumericalError(msg.str(), h);
    }
    const bool final_step = t + h >= t_end;
    if (final_step) h = t_end - t;

    ys = y;
    kt.axpy(mih(a21, h), k1.data(), ys.data(), n);
    f(t + c2 * h, ys, k2);

    ys = y;
    kt.axpy(mih(a31, h), k1.data(), ys.data(), n);
    kt.axpy(mih(a32, h), k2.data(), ys.data(), n);
    f(t + c3 * h, ys, k3);

    ys = y;
    kt.axpy(mih(a41, h), k1.data(), ys.data(), n);
    kt.axpy(mih(a42, h), k2.data(), ys.data(), n);
    kt.axpy(mih(a43, h), k3.data(), ys.data(), n);
    f(t + c4 * h, ys, k4);

    ys = y;
    kt.axpy(mih(a51, h), k1.data(), ys.data(), n);
    kt.axpy(mih(a52, h), k2.data(), ys.data(), n);
    kt.axpy(mih(a53, h), k3.data(), ys.data(), n);
    kt.axpy(mih(a54, h), k4.data(), ys.data(), n);
    f(t + c5 * h, ys, k5);

    ys = y;
    kt.axpy(mih(a61, h), k1.data(), ys.data(), n);
    kt.axpy(mih(a62, h), k2.data(), ys.data(), n);
    kt.axpy(mih(a63, h), k3.data(), ys.data(), n);
    kt.axpy(mih(a64, h), k4.data(), ys.data(), n);
    kt.axpy(mih(a65, h), k5.data(), ys.data(), n);
    f(t + h, ys, k6);

    y1 = y;
    kt.axpy(mih(a71, h), k1.data(), y1.data(), n);
    kt.axpy(mih(a73, h), k3.data(), y1.data(), n);
    kt.axpy(mih(a74, h), k4.data(), y1.data(), n);
    kt.axpy(mih(a75, h), k5.data(), y1.data(), n);
    kt.axpy(mih(a76, h), k6.data(), y1.data(), n);
    f(t + h, y1, k7);

    std::fill(err.begin(), err.end(), cplx{});
    kt.axpy(mih(e1, h), k1.data(), err.data(), n);
    kt.axpy(mih(e3, h), k3.data(), err.data(), n);
    kt.axpy(mih(e4, h), k4.data(), err.data(), n);
    kt.axpy(mih(e5, h), k5.data(), err.data(), n);
    kt.axpy(mih(e6, h), k6.data(), err.data(), n);
    kt.axpy(mih(e7, h), k7.data(), err.data(), n);
    // The local bound tightens as sqrt(h / span): N steps of systematic
    // norm loss then add up to about tol * sqrt(N) times the (small) ratio of
    // true to estimated local error, instead of tol * N.
    const double en = scaled_norm(err, y, y1) * std::sqrt(span / h);

    if (en <= 1.0) {
      // Continuous extension coefficients.
      r[0] = y;
      for (std::size_t i = 0; i < n; ++i) r[1][i] = y1[i] - y[i];
      std::fill(r[2].begin(), r[2].end(), cplx{});
      kt.axpy(mih(1.0, h), k1.data(), r[2].data(), n);
      kt.axpy(-1.0, r[1].data(), r[2].data(), n);
      r[3] = r[1];
      kt.axpy(mih(-1.0, h), k7.data(), r[3].data(), n);
      kt.axpy(-1.0, r[2].data(), r[3].data(), n);
      std::fill(r[4].begin(), r[4].end(), cplx{});
      kt.axpy(mih(d1, h), k1.data(), r[4].data(), n);
      kt.axpy(mih(d3, h), k3.data(), r[4].data(), n);
      kt.axpy(mih(d4, h), k4.data(), r[4].data(), n);
      kt.axpy(mih(d5, h), k5.data(), r[4].data(), n);
      kt.axpy(mih(d6, h), k6.data(), r[4].data(), n);
      kt.axpy(mih(d7, h), k7.data(), r[4].data(), n);

      const double t_new = final_step ? t_end : t + h;
      while (next < t_out.size() && t_out[next] <= t_new) {
        if (t_out[next] == t_new) {
          out(next++, y1);
          continue;
        }
        const double th = (t_out[next] - t) / h, th1 = 1.0 - th;
        for (std::size_t i = 0; i < n; ++i)
          ys[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
        out(next++, ys);
      }

      ++st.accepted;
      st.min_step = std::min(st.min_step, h);
      st.max_step = std::max(st.max_step, h);
      t = t_new;
      y.swap(y1);
      k1.swap(k7);  // first-same-as-last
      double fac = en > 0.0 ? 0.9 * std::pow(en, -1.0 / 4.5) : 10.0;
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
      last_rejected = false;
      h *= fac;
      if (t < t_end) h = std::min(h, t_end - t);
    } else {
      ++st.rejected;
      last_rejected = true;
      h *= std::max(0.2, 0.9 * std::pow(en, -1.0 / 4.5));
    }
  }
  return st;
}

}  // namespace ionssh
