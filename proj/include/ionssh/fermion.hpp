#pragma once

#include <cstdint>
#include <vector>

#include "ionssh/coupling.hpp"
#include "ionssh/dynamics.hpp"
#include "ionssh/linalg.hpp"

namespace ionssh {

/// Spectral propagator of the quadratic fermion model H = sum_ij c_i^+ J_ij c_j
/// (the string-free truncation of the Jordan-Wigner image of the XY chain).
/// The one-body matrix is J itself, matching the one-excitation block of the
/// spin Hamiltonian.
class FreePropagator {
 public:
  explicit FreePropagator(const CouplingMatrix& dm);

  std::size_t size() const noexcept { return eig_.values.size(); }
  const SymmetricEigen& eigen() const noexcept { return eig_; }

  /// U(t) = exp(-i J t), t in seconds.
  ComplexMatrix at(double t) const;

 private:
  SymmetricEigen eig_;
};

ComplexMatrix free_propagator(const CouplingMatrix& dm, double t);

/// C_ij = <c_i^+ c_j>.
struct CorrelationMatrix {
  ComplexMatrix values;

  std::size_t size() const noexcept { return values.rows(); }
  double trace() const;

  /// Diagonal 0/1 matrix of a product state (bit j-1 = site j occupied).
  static CorrelationMatrix product(int n_sites, std::uint64_t bits);

  /// Throws ConfigError unless hermitian (1e-12) with spectrum in [-1e-9, 1+1e-9].
  void validate() const;
};

/// C(t) = conj(U) C0 U^T for U = exp(-i J t).
CorrelationMatrix evolve_correlation(const CorrelationMatrix& c0, const FreePropagator& u, double t);

/// Occupation dynamics on the tau grid (t = pi tau / J); the returned
/// trajectory holds m_j = 2 n_j - 1 and model = "free_fermion".
Trajectory evolve_correlations(const CorrelationMatrix& c0, const CouplingMatrix& dm,
                               const std::vector<double>& tau_grid, double coupling_unit);

/// (-1)^(number of occupied sites strictly between i and j), 1-based i < j.
int jw_string_weight(std::uint64_t bits, int i, int j);

}  // namespace ionssh
