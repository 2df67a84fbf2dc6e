// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after the runtime CPU check in dispatch.cpp.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "ionssh/simd/kernels.hpp"

namespace ionssh::simd {

namespace {

inline const double* as_double(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_double(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const double* xd = as_double(x);
  double* yd = as_double(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d xs = _mm256_permute_pd(xv, 0b0101);  // (im, re) pairs
    const __m256d prod = _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, xs));
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + (a.real() * xr - a.imag() * xi),
            y[i].imag() + (a.real() * xi + a.imag() * xr)};
  }
}

double norm_sq(const cplx* x, std::size_t n) {
  const double* xd = as_double(x);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(xd + 2 * i);
    const __m256d b = _mm256_loadu_pd(xd + 2 * i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void csr_matvec(const CsrView& a, const cplx* x, cplx* y) {
  const double* xd = as_double(x);
  double* yd = as_double(y);
  for (std::size_t r = 0; r < a.rows; ++r) {
    __m256d acc = _mm256_setzero_pd();
    __m128d acc1 = _mm_setzero_pd();
    std::uint64_t k = a.row_ptr[r];
    const std::uint64_t end = a.row_ptr[r + 1];
    for (; k + 2 <= end; k += 2) {
      const __m256d xv = _mm256_set_m128d(_mm_loadu_pd(xd + 2 * std::size_t{a.col[k + 1]}),
                                          _mm_loadu_pd(xd + 2 * std::size_t{a.col[k]}));
      const __m256d vv = _mm256_set_pd(a.val[k + 1], a.val[k + 1], a.val[k], a.val[k]);
      acc = _mm256_fmadd_pd(vv, xv, acc);
    }
    if (k < end) {
      acc1 = _mm_mul_pd(_mm_set1_pd(a.val[k]), _mm_loadu_pd(xd + 2 * std::size_t{a.col[k]}));
    }
    const __m128d s = _mm_add_pd(_mm_add_pd(_mm256_castpd256_pd128(acc),
                                            _mm256_extractf128_pd(acc, 1)),
                                 acc1);
    _mm_storeu_pd(yd + 2 * r, s);
  }
}

void diag_accumulate(double c, const double* d, const cplx* x, cplx* y, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  const double* xd = as_double(x);
  double* yd = as_double(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d dd = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(d + i)), 0x50);
    const __m256d f = _mm256_mul_pd(cv, dd);
    _mm256_storeu_pd(yd + 2 * i,
                     _mm256_fmadd_pd(f, _mm256_loadu_pd(xd + 2 * i), _mm256_loadu_pd(yd + 2 * i)));
  }
  for (; i < n; ++i) {
    const double f = c * d[i];
    y[i] = {y[i].real() + f * x[i].real(), y[i].imag() + f * x[i].imag()};
  }
}

double weighted_error_sq(const cplx* err, const cplx* y0, const cplx* y1, double atol,
                         double rtol, std::size_t n) {
  const double* ed = as_double(err);
  const double* ad = as_double(y0);
  const double* bd = as_double(y1);
  const __m256d atv = _mm256_set1_pd(atol);
  const __m256d rtv = _mm256_set1_pd(rtol);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d e = _mm256_loadu_pd(ed + 2 * i);
    const __m256d a = _mm256_loadu_pd(ad + 2 * i);
    const __m256d b = _mm256_loadu_pd(bd + 2 * i);
    // hadd(v*v, v*v) puts |z_k|^2 in both lanes of complex k.
    const __m256d e2 = _mm256_hadd_pd(_mm256_mul_pd(e, e), _mm256_mul_pd(e, e));
    const __m256d a2 = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(a, a));
    const __m256d b2 = _mm256_hadd_pd(_mm256_mul_pd(b, b), _mm256_mul_pd(b, b));
    const __m256d sc = _mm256_fmadd_pd(rtv, _mm256_sqrt_pd(_mm256_max_pd(a2, b2)), atv);
    acc = _mm256_add_pd(acc, _mm256_div_pd(e2, _mm256_mul_pd(sc, sc)));
  }
  double s = 0.5 * hsum(acc);
  for (; i < n; ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = std::abs(err[i]) / sc;
    s += q * q;
  }
  return s;
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2", axpy, norm_sq, csr_matvec, diag_accumulate,
                                 weighted_error_sq};
  return table;
}

}  // namespace ionssh::simd
