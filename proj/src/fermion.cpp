#include "ionssh/fermion.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "ionssh/error.hpp"

namespace ionssh {

FreePropagator::FreePropagator(const CouplingMatrix& dm) : eig_(eigh(dm.values)) {}

ComplexMatrix FreePropagator::at(double t) const {
  const std::size_t n = size();
  std::vector<cplx> phase(n);
  for (std::size_t k = 0; k < n; ++k) phase[k] = std::polar(1.0, -eig_.values[k] * t);
  ComplexMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s{};
      for (std::size_t k = 0; k < n; ++k) s += eig_.vectors(i, k) * phase[k] * eig_.vectors(j, k);
      u(i, j) = s;
    }
  return u;
}

ComplexMatrix free_propagator(const CouplingMatrix& dm, double t) { return FreePropagator(dm).at(t); }

double CorrelationMatrix::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += values(i, i).real();
  return s;
}

CorrelationMatrix CorrelationMatrix::product(int n_sites, std::uint64_t bits) {
  if (n_sites < 1) throw ConfigError("correlation: empty chain");
  CorrelationMatrix c;
  c.values = ComplexMatrix(n_sites, n_sites);
  for (int j = 0; j < n_sites; ++j)
    if ((bits >> j) & 1u) c.values(j, j) = 1.0;
  return c;
}

void CorrelationMatrix::validate() const {
  const std::size_t n = size();
  if (!values.square()) throw ConfigError("correlation: matrix must be square");
  // Hermitian -> real symmetric embedding [[Re, -Im], [Im, Re]] has the same
  // spectrum (doubled).
  RealMatrix big(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(values(i, j) - std::conj(values(j, i))) > 1e-12)
        throw ConfigError("correlation: matrix is not hermitian");
      big(i, j) = big(i + n, j + n) = values(i, j).real();
      big(i + n, j) = values(i, j).imag();
      big(i, j + n) = -values(i, j).imag();
    }
  for (double v : eigh(big).values)
    if (v < -1e-9 || v > 1.0 + 1e-9) throw ConfigError("correlation: eigenvalue outside [0, 1]");
}

CorrelationMatrix evolve_correlation(const CorrelationMatrix& c0, const FreePropagator& u, double t) {
  const std::size_t n = c0.size();
  if (u.size() != n) throw ConfigError("evolve_correlation: size mismatch");
  const ComplexMatrix ut = u.at(t);
  ComplexMatrix a(n, n), b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      a(i, j) = std::conj(ut(i, j));
      b(i, j) = ut(j, i);
    }
  return {multiply(multiply(a, c0.values), b)};
}

Trajectory evolve_correlations(const CorrelationMatrix& c0, const CouplingMatrix& dm,
                               const std::vector<double>& tau, double coupling_unit) {
  if (!(coupling_unit > 0.0)) throw ConfigError("evolve_correlations: coupling unit must be > 0");
  if (dm.size() != c0.size()) throw ConfigError("evolve_correlations: size mismatch");
  const FreePropagator u(dm);
  const std::size_t l = c0.size();
  Trajectory tr;
  tr.tau = tau;
  tr.magnetization = RealMatrix(tau.size(), l);
  tr.label = dm.label;
  tr.model = "free_fermion";
  tr.coupling_unit = coupling_unit;
  for (std::size_t k = 0; k < tau.size(); ++k) {
    const CorrelationMatrix c = evolve_correlation(c0, u, std::numbers::pi * tau[k] / coupling_unit);
    for (std::size_t j = 0; j < l; ++j) tr.magnetization(k, j) = 2.0 * c.values(j, j).real() - 1.0;
  }
  return tr;
}

int jw_string_weight(std::uint64_t bits, int i, int j) {
  if (i >= j) throw ConfigError("jw_string_weight: need i < j");
  if (i < 1 || j > 64) throw ConfigError("jw_string_weight: site out of range");
  // sites i+1 .. j-1 are bits i .. j-2
  const int width = j - 1 - i;
  if (width <= 0) return 1;
  const std::uint64_t mask = ((width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1)) << i;
  return std::popcount(bits & mask) % 2 == 0 ? 1 : -1;
}

}  // namespace ionssh
