#include <doctest.h>

#include <random>
#include <vector>

#include "ionssh/simd/kernels.hpp"

using namespace ionssh::simd;

namespace {

std::vector<cplx> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("active kernel table is complete") {
  const KernelTable& k = active_kernels();
  CHECK(k.axpy != nullptr);
  CHECK(k.norm_sq != nullptr);
  CHECK(k.csr_matvec != nullptr);
  CHECK(k.diag_accumulate != nullptr);
  CHECK(k.weighted_error_sq != nullptr);
  MESSAGE("active kernels: " << k.name);
}

TEST_CASE("scalar and AVX2 kernels agree to rounding") {
  const KernelTable* v = avx2_kernels();
  if (v == nullptr) {
    MESSAGE("AVX2 variants unavailable on this build or CPU; equivalence not exercised");
    return;
  }
  const KernelTable& s = scalar_kernels();
  std::mt19937_64 rng(7);
  // Odd lengths exercise the remainder loops.
  for (std::size_t n : {1u, 2u, 3u, 5u, 17u, 64u, 1023u}) {
    CAPTURE(n);
    const auto x = random_vector(rng, n);
    const auto y0 = random_vector(rng, n);

    auto ys = y0, yv = y0;
    s.axpy({0.3, -1.7}, x.data(), ys.data(), n);
    v->axpy({0.3, -1.7}, x.data(), yv.data(), n);
    CHECK(max_diff(ys, yv) < 1e-14);

    const double ns = s.norm_sq(x.data(), n), nv = v->norm_sq(x.data(), n);
    CHECK(std::abs(ns - nv) <= 1e-13 * ns);

    std::vector<double> d(n);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (auto& e : d) e = u(rng);
    ys = y0;
    yv = y0;
    s.diag_accumulate(0.75, d.data(), x.data(), ys.data(), n);
    v->diag_accumulate(0.75, d.data(), x.data(), yv.data(), n);
    CHECK(max_diff(ys, yv) < 1e-14);

    const double es = s.weighted_error_sq(x.data(), y0.data(), ys.data(), 1e-9, 1e-9, n);
    const double ev = v->weighted_error_sq(x.data(), y0.data(), ys.data(), 1e-9, 1e-9, n);
    CHECK(std::abs(es - ev) <= 1e-12 * es);
  }
}

TEST_CASE("scalar and AVX2 CSR mat-vec agree") {
  const KernelTable* v = avx2_kernels();
  if (v == nullptr) return;
  std::mt19937_64 rng(11);
  const std::size_t n = 257;
  std::vector<std::uint64_t> row_ptr{0};
  std::vector<std::uint32_t> col;
  std::vector<double> val;
  std::uniform_int_distribution<int> nnz_row(0, 9);
  std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
  std::normal_distribution<double> g;
  for (std::size_t i = 0; i < n; ++i) {
    const int k = nnz_row(rng);
    for (int e = 0; e < k; ++e) col.push_back(pick(rng)), val.push_back(g(rng));
    row_ptr.push_back(col.size());
  }
  const CsrView a{n, row_ptr.data(), col.data(), val.data()};
  const auto x = random_vector(rng, n);
  std::vector<cplx> ys(n), yv(n);
  scalar_kernels().csr_matvec(a, x.data(), ys.data());
  v->csr_matvec(a, x.data(), yv.data());
  CHECK(max_diff(ys, yv) < 1e-13);
}
