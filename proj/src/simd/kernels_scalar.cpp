#include <algorithm>
#include <cmath>

#include "ionssh/simd/kernels.hpp"

namespace ionssh::simd {

namespace {

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr)};
  }
}

double norm_sq(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void csr_matvec(const CsrView& a, const cplx* x, cplx* y) {
  for (std::size_t r = 0; r < a.rows; ++r) {
    double sr = 0.0, si = 0.0;
    for (std::uint64_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      const cplx v = x[a.col[k]];
      sr += a.val[k] * v.real();
      si += a.val[k] * v.imag();
    }
    y[r] = {sr, si};
  }
}

void diag_accumulate(double c, const double* d, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double f = c * d[i];
    y[i] = {y[i].real() + f * x[i].real(), y[i].imag() + f * x[i].imag()};
  }
}

double weighted_error_sq(const cplx* err, const cplx* y0, const cplx* y1, double atol,
                         double rtol, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double e = std::abs(err[i]) / sc;
    s += e * e;
  }
  return s;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", axpy, norm_sq, csr_matvec, diag_accumulate,
                                 weighted_error_sq};
  return table;
}

}  // namespace ionssh::simd
