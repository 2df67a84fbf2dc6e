#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ionssh/basis.hpp"
#include "ionssh/coupling.hpp"
#include "ionssh/floquet.hpp"
#include "ionssh/linalg.hpp"
#include "ionssh/simd/kernels.hpp"

namespace ionssh {

/// Real sparse matrix in CSR form.
struct SparseMatrix {
  std::size_t dim = 0;
  std::vector<std::uint64_t> row_ptr;
  std::vector<std::uint32_t> col;
  std::vector<double> val;

  std::size_t nnz() const noexcept { return val.size(); }
  simd::CsrView view() const noexcept { return {dim, row_ptr.data(), col.data(), val.data()}; }
};

/// H(t) = offdiag + diag(static_diag) + sum_c coeff_c(t) diag(profile_c).
/// All matrix elements are real, so H(t) is real symmetric at every t.
struct Hamiltonian {
  struct DriveTerm {
    std::vector<double> profile;
    std::function<double(double)> coeff;
  };

  std::shared_ptr<const Basis> basis;
  SparseMatrix offdiag;
  std::vector<double> static_diag;  // empty when zero
  std::vector<DriveTerm> drives;
  std::string label;

  std::size_t dimension() const noexcept { return basis->dimension(); }
  bool time_dependent() const noexcept { return !drives.empty(); }

  /// y = H(t) x
  void apply(double t, const cplx* x, cplx* y,
             const simd::KernelTable& k = simd::active_kernels()) const;
  std::vector<cplx> apply(double t, const std::vector<cplx>& x) const;

  /// Dense H(t); small dimensions only (tests, oracles).
  RealMatrix dense(double t = 0.0) const;
};

/// Default nonzero cap for the sparse XY operator.
inline constexpr std::size_t kDefaultNnzCap = std::size_t{1} << 24;

/// sum_{i<j} J_ij (s+_i s-_j + s-_i s+_j) on `basis` (any sector, or the full
/// space). In the one-excitation sector the operator equals the matrix J.
Hamiltonian build_xy_hamiltonian(const CouplingMatrix& dm, std::shared_ptr<const Basis> basis,
                                 std::size_t nnz_cap = kDefaultNnzCap);

/// Largest chain accepted by build_full_hamiltonian.
inline constexpr int kMaxFullDriveSites = 14;

/// H(t) = sum_{i<j} J_ij sx_i sx_j + sum_j B_j(t) sz_j / 2 on the full 2^L
/// space, with B_j(t) from drive_field. `site_labels` (1-based, one per row of
/// cm) sets the drive phase index of each spin; defaults to 1..L.
Hamiltonian build_full_hamiltonian(const CouplingMatrix& cm, const FloquetDrive& drive,
                                   const std::optional<std::vector<int>>& site_labels = {});

}  // namespace ionssh
