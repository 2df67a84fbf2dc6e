#include "ionssh/bessel.hpp"

#include <cmath>
#include <numbers>

namespace ionssh {

namespace {

// sum_k (-x^2/4)^k / (k!)^2; long double keeps the cancellation near
// |x| = 8 (largest term ~ 2.6e4) inside double precision.
double series(double x) {
  const long double q = -0.25L * static_cast<long double>(x) * x;
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum) && k > 4) break;
  }
  return static_cast<double>(sum);
}

// (1/pi) int_0^pi cos(x sin t) dt. The integrand is smooth and periodic, so
// the trapezoidal rule converges geometrically once the node count exceeds
// the oscillation count.
double quadrature(double x) {
  const int n = 64 + 2 * static_cast<int>(std::ceil(std::fabs(x)));
  long double sum = 0.0L;
  for (int k = 0; k < n; ++k) {
    const long double t = std::numbers::pi_v<long double> * (k + 0.5L) / n;
    sum += std::cos(static_cast<long double>(x) * std::sin(t));
  }
  return static_cast<double>(sum / n);
}

// Hankel expansion: j0(x) ~ sqrt(2/(pi x)) (P cos(x - pi/4) - Q sin(x - pi/4)).
double asymptotic(double x) {
  x = std::fabs(x);
  const double z = 8.0 * x;
  double p = 1.0, q = 0.0, term = 1.0;
  for (int m = 1; m < 60; ++m) {
    const double a = 2.0 * m - 1.0;
    const double next = term * a * a / (m * z);
    if (next > term) break;  // series starts to diverge
    term = next;
    if (m % 2 == 0)
      p += ((m / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    else
      q += (((m - 1) / 2) % 2 == 0 ? -1.0 : 1.0) * term;
    if (term < 1e-17) break;
  }
  const double chi = x - 0.25 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
  const double ax = std::fabs(x);
  if (ax < 8.0) return series(ax);
  if (ax < 40.0) return quadrature(ax);
  return asymptotic(ax);
}

}  // namespace ionssh
