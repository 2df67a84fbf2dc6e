#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ionssh {

using cplx = std::complex<double>;

/// Dense row-major matrix. Small (N <= a few thousand) and value-semantic.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<cplx>;

/// Eigen-decomposition of a real symmetric matrix. Eigenvalues ascending;
/// eigenvectors stored as columns of `vectors`, orthonormal.
struct SymmetricEigen {
  std::vector<double> values;
  RealMatrix vectors;
};

/// Householder tridiagonalization followed by implicit QL with Wilkinson
/// shifts. Throws NumericalError when an eigenvalue fails to converge in
/// 60 sweeps.
SymmetricEigen eigh(const RealMatrix& a);

/// Solve A x = b for dense A by Gaussian elimination with partial pivoting.
/// Throws NumericalError for a numerically singular matrix.
std::vector<double> solve(RealMatrix a, std::vector<double> b);

RealMatrix transpose(const RealMatrix& a);
RealMatrix multiply(const RealMatrix& a, const RealMatrix& b);
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);

/// max_ij |a_ij - a_ji|
double asymmetry(const RealMatrix& a);
double max_abs_diff(const RealMatrix& a, const RealMatrix& b);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace ionssh
