#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace eigenfeat {

/// Dense column-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> column_major);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }
  std::span<double> column(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> column(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }

  Matrix transposed() const;
  double frobenius_norm() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);

/// X^T X.
Matrix gram(const Matrix& x);

struct EigenDecomposition {
  /// Descending.
  std::vector<double> values;
  /// Column i pairs with values[i].
  Matrix vectors;
  std::size_t sweeps = 0;
};

/// Cyclic-by-rows Jacobi. Stops once the off-diagonal Frobenius norm drops
/// below tol * ||S||_F; throws non_convergence after max_sweeps and
/// invalid_argument when S is not symmetric (relative 1e-12).
EigenDecomposition jacobi_eigh(const Matrix& s, double tol = 1e-12, std::size_t max_sweeps = 50);

struct SvdResult {
  /// n x r, r = min(n, m).
  Matrix u;
  /// r values, descending.
  std::vector<double> sigma;
  /// m x r.
  Matrix v;
  /// Count of sigma above 1e-10 * sigma_1. Columns of u past this index are
  /// an orthonormal completion, not X v_i / sigma_i.
  std::size_t rank = 0;
};

/// Singular values and right vectors from the m x m Gram matrix, left vectors
/// as X v_i / sigma_i after a one-sided Jacobi pass on X V that restores full
/// working precision for small singular values.
SvdResult svd_via_gram(const Matrix& x);

/// sum_{i<=r} sigma_i u_i v_i^T; requires 1 <= r <= rank.
Matrix truncate(const SvdResult& svd, std::size_t r);

/// Column k of the rank-1 expansion: sigma_1 * v_1[k] * u_1.
std::vector<double> rank1_column(const SvdResult& svd, std::size_t k);

/// u flipped so its entry sum is positive; a zero sum (relative to sum |u_i|)
/// falls back to the sign of the first nonzero entry.
std::vector<double> canonical_sign(std::span<const double> u);

/// Product-moment correlation; throws degenerate_input for constant inputs.
double pearson(std::span<const double> a, std::span<const double> b);

}  // namespace eigenfeat
