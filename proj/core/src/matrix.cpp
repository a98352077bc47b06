#include "nilcrypt/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "nilcrypt/error.hpp"

namespace nilcrypt {
namespace {

constexpr double kSingularPivotRatio = 1e-12;
constexpr double kExpTermRatio = 1e-17;
constexpr unsigned kExpMaxTerms = 200;
constexpr double kNilpotentTolerance = 1e-9;

void require_same_dim(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(Errc::kDimensionMismatch,
                std::to_string(a.dim()) + "x" + std::to_string(a.dim()) +
                    " vs " + std::to_string(b.dim()) + "x" +
                    std::to_string(b.dim()));
  }
}

}  // namespace

Matrix::Matrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {
  if (n == 0) throw Error(Errc::kInvalidDimension, "dimension must be >= 1");
}

Matrix::Matrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n == 0) throw Error(Errc::kInvalidDimension, "dimension must be >= 1");
  if (entries_.size() != n * n) {
    throw Error(Errc::kInvalidDimension,
                "expected " + std::to_string(n * n) + " entries, got " +
                    std::to_string(entries_.size()));
  }
  ensure_finite();
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : n_(rows.size()) {
  if (n_ == 0) throw Error(Errc::kInvalidDimension, "dimension must be >= 1");
  entries_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) {
      throw Error(Errc::kInvalidDimension, "matrix rows must form a square");
    }
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
  ensure_finite();
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> values) {
  Matrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  m.ensure_finite();
  return m;
}

double Matrix::frobenius_norm() const noexcept {
  double sum = 0.0;
  for (double v : entries_) sum += v * v;
  return std::sqrt(sum);
}

double Matrix::max_abs() const noexcept {
  double best = 0.0;
  for (double v : entries_) best = std::max(best, std::abs(v));
  return best;
}

void Matrix::ensure_finite() const {
  for (double v : entries_) {
    if (!std::isfinite(v)) {
      throw Error(Errc::kNonFiniteValue, "matrix entry is not finite");
    }
  }
}

Matrix standard_jordan_block(std::size_t n) {
  Matrix j(n);
  for (std::size_t i = 0; i + 1 < n; ++i) j(i, i + 1) = 1.0;
  return j;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b);
  const std::size_t n = a.dim();
  Matrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  }
  c.ensure_finite();
  return c;
}

Matrix linear_combine(double alpha, const Matrix& a, double beta,
                      const Matrix& b) {
  require_same_dim(a, b);
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw Error(Errc::kNonFiniteValue, "combination weights must be finite");
  }
  const std::size_t n = a.dim();
  Matrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c(i, j) = alpha * a(i, j) + beta * b(i, j);
    }
  }
  c.ensure_finite();
  return c;
}

Matrix scale(double alpha, const Matrix& a) {
  Matrix c = a;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) c(i, j) *= alpha;
  }
  c.ensure_finite();
  return c;
}

Matrix mat_power(const Matrix& a, unsigned k) {
  Matrix result = Matrix::identity(a.dim());
  for (unsigned i = 0; i < k; ++i) result = multiply(result, a);
  return result;
}

Matrix invert(const Matrix& a) {
  const std::size_t n = a.dim();
  const double largest = a.max_abs();
  const double threshold = kSingularPivotRatio * (largest > 0.0 ? largest : 1.0);

  Matrix work = a;
  Matrix inv = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(work(r, col)) > std::abs(work(pivot, col))) pivot = r;
    }
    if (std::abs(work(pivot, col)) < threshold) {
      throw Error(Errc::kSingularMatrix,
                  "pivot below threshold in column " + std::to_string(col));
    }
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work(pivot, j), work(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const double p = work(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      work(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = work(r, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        work(r, j) -= f * work(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  inv.ensure_finite();
  return inv;
}

Matrix mat_exp(const Matrix& a) {
  const std::size_t n = a.dim();
  Matrix sum = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  try {
    for (unsigned k = 1; k < kExpMaxTerms; ++k) {
      term = scale(1.0 / static_cast<double>(k), multiply(term, a));
      const double sum_norm = sum.frobenius_norm();
      const double reference = sum_norm > 0.0 ? sum_norm : 1.0;
      if (term.frobenius_norm() < kExpTermRatio * reference) return sum;
      sum = linear_combine(1.0, sum, 1.0, term);
    }
  } catch (const Error& e) {
    if (e.code() != Errc::kNonFiniteValue) throw;
    throw Error(Errc::kExpDidNotConverge, "Taylor series overflowed");
  }
  throw Error(Errc::kExpDidNotConverge,
              "Taylor series did not converge within " +
                  std::to_string(kExpMaxTerms) + " terms");
}

unsigned nilpotency_index(const Matrix& x) {
  const std::size_t n = x.dim();
  const double x_norm = x.frobenius_norm();
  if (x_norm <= kNilpotentTolerance) return 1;
  // X^k counts as zero once it is negligible next to the product that formed
  // it. A bound of max(1, ||X||)^k outgrows ||J^k|| and misfires for n > 16.
  Matrix power = x;
  for (std::size_t k = 2; k <= n; ++k) {
    const double prev_norm = power.frobenius_norm();
    power = multiply(power, x);
    if (power.frobenius_norm() <= kNilpotentTolerance * prev_norm * x_norm) {
      return static_cast<unsigned>(k);
    }
  }
  throw Error(Errc::kNotNilpotent, "no power up to the dimension vanishes");
}

Matrix jordan_basis_nilpotent(const Matrix& x) {
  const std::size_t n = x.dim();
  const unsigned index = nilpotency_index(x);
  if (index != n) {
    throw Error(Errc::kNotSingleBlock,
                "nilpotency index " + std::to_string(index) +
                    " differs from dimension " + std::to_string(n));
  }

  // Column j of X^{n-1} is X^{n-1} e_j.
  const Matrix top = mat_power(x, static_cast<unsigned>(n - 1));
  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t j = 0; j < n; ++j) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm2 += top(i, j) * top(i, j);
    if (norm2 > best_norm) {
      best_norm = norm2;
      best = j;
    }
  }

  // Fill columns right to left: v, Xv, X^2 v, ...
  Matrix q(n);
  std::vector<double> chain(n, 0.0);
  chain[best] = 1.0;
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t col = n - 1 - step;
    for (std::size_t i = 0; i < n; ++i) q(i, col) = chain[i];
    std::vector<double> next(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) next[i] += x(i, k) * chain[k];
    }
    chain = std::move(next);
  }

  invert(q);  // surfaces SingularMatrix for a degenerate chain
  return q;
}

}  // namespace nilcrypt
