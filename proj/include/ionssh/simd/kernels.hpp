#pragma once

// Data-parallel inner loops of the state-vector engine.
//
// Every kernel exists as a scalar reference implementation and, on x86-64,
// as an AVX2/FMA variant. The active table is chosen once at first use from
// CPUID; IONSSH_SIMD=scalar in the environment forces the reference path.
// Variants agree to rounding (tests/unit/test_kernels.cpp).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace ionssh::simd {

using cplx = std::complex<double>;

/// Read-only CSR view of a real sparse matrix acting on complex vectors.
struct CsrView {
  std::size_t rows = 0;
  const std::uint64_t* row_ptr = nullptr;  // rows + 1 entries
  const std::uint32_t* col = nullptr;
  const double* val = nullptr;
};

struct KernelTable {
  std::string_view name;

  /// y[i] += a * x[i]
  void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);

  /// sum_i |x[i]|^2
  double (*norm_sq)(const cplx* x, std::size_t n);

  /// y = A x
  void (*csr_matvec)(const CsrView& a, const cplx* x, cplx* y);

  /// y[i] += c * d[i] * x[i]
  void (*diag_accumulate)(double c, const double* d, const cplx* x, cplx* y, std::size_t n);

  /// sum_i (|err[i]| / (atol + rtol * max(|y0[i]|, |y1[i]|)))^2
  double (*weighted_error_sq)(const cplx* err, const cplx* y0, const cplx* y1, double atol,
                              double rtol, std::size_t n);
};

const KernelTable& scalar_kernels();

/// nullptr when the AVX2 variants were not compiled in or the CPU lacks
/// AVX2+FMA.
const KernelTable* avx2_kernels();

/// The table used by the library.
const KernelTable& active_kernels();

}  // namespace ionssh::simd
