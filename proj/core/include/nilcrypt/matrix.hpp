#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace nilcrypt {

/// Dense square real matrix, row-major. Every entry is finite: constructors
/// and every operation returning a Matrix reject NaN and infinity.
class Matrix {
 public:
  /// n×n zero matrix. Throws InvalidDimension for n == 0.
  explicit Matrix(std::size_t n);
  /// Takes ownership of n*n row-major entries.
  Matrix(std::size_t n, std::vector<double> entries);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> values);

  std::size_t dim() const noexcept { return n_; }

  double operator()(std::size_t row, std::size_t col) const noexcept {
    return entries_[row * n_ + col];
  }
  /// Mutable access does not re-validate; call ensure_finite() afterwards if
  /// the written values came from untrusted input.
  double& operator()(std::size_t row, std::size_t col) noexcept {
    return entries_[row * n_ + col];
  }

  std::span<const double> entries() const noexcept { return entries_; }

  double frobenius_norm() const noexcept;
  /// Largest absolute entry.
  double max_abs() const noexcept;

  void ensure_finite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_;
  std::vector<double> entries_;
};

Matrix standard_jordan_block(std::size_t n);

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix linear_combine(double alpha, const Matrix& a, double beta,
                      const Matrix& b);
Matrix scale(double alpha, const Matrix& a);

/// A^k by repeated multiplication; A^0 = I.
Matrix mat_power(const Matrix& a, unsigned k);

/// Gauss-Jordan elimination with partial pivoting. A pivot smaller than
/// 1e-12 times the largest initial absolute entry is treated as singular.
Matrix invert(const Matrix& a);

/// Taylor series exponential. Terms are accumulated until the next term's
/// Frobenius norm drops below 1e-17 times the partial sum's norm (or 1 when
/// the sum is zero). Intended for arguments with norm below 1; throws
/// ExpDidNotConverge after 200 terms.
Matrix mat_exp(const Matrix& a);

/// Smallest k <= n with ||X^k||_F <= 1e-9 * ||X^(k-1)||_F * ||X||_F. Index 1
/// means ||X||_F <= 1e-9; the zero matrix has index 1.
unsigned nilpotency_index(const Matrix& x);

/// Jordan basis for a nilpotent matrix consisting of a single block.
///
/// Columns are [X^{n-1}v, ..., Xv, v] where v = e_j maximizes
/// ||X^{n-1} e_j||_2 (smallest j on ties), so Q^{-1} X Q is the standard
/// Jordan block. Throws NotSingleBlock when the nilpotency index is not n.
Matrix jordan_basis_nilpotent(const Matrix& x);

}  // namespace nilcrypt
