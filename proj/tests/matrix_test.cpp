#include "nilcrypt/matrix.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "nilcrypt/error.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace nilcrypt {
namespace {

TEST(MatrixTest, ConstructionRejectsBadShapes) {
  EXPECT_EQ(error_of([] { Matrix m(0); }), Errc::kInvalidDimension);
  EXPECT_EQ(error_of([] { Matrix m(2, {1.0, 2.0, 3.0}); }),
            Errc::kInvalidDimension);
  EXPECT_EQ(error_of([] { Matrix m(1, {NAN}); }), Errc::kNonFiniteValue);
  EXPECT_EQ(error_of([] { Matrix m(1, {INFINITY}); }), Errc::kNonFiniteValue);
}

TEST(MatrixTest, StandardJordanBlock) {
  EXPECT_EQ(standard_jordan_block(3),
            (Matrix{{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}));
  EXPECT_EQ(standard_jordan_block(1), Matrix(1));
  EXPECT_EQ(standard_jordan_block(2), (Matrix{{0, 1}, {0, 0}}));
  EXPECT_EQ(error_of([] { standard_jordan_block(0); }),
            Errc::kInvalidDimension);
}

TEST(MatrixTest, Multiply) {
  std::mt19937_64 rng(11);
  const Matrix b = oracle::random_matrix(rng, 4, -3, 3);
  EXPECT_EQ(multiply(Matrix::identity(4), b), b);

  Matrix shift2(3);
  shift2(0, 2) = 1.0;
  EXPECT_EQ(multiply(standard_jordan_block(3), standard_jordan_block(3)),
            shift2);

  const Matrix a{{1, 2}, {3, 4}};
  const Matrix c{{5, 6}, {7, 8}};
  const Matrix expected = oracle::from_grid(
      oracle::schoolbook_multiply(oracle::to_grid(a), oracle::to_grid(c)));
  EXPECT_EQ(expected, (Matrix{{19, 22}, {43, 50}}));
  EXPECT_EQ(multiply(a, c), expected);

  EXPECT_EQ(error_of([&] { multiply(a, Matrix(3)); }),
            Errc::kDimensionMismatch);
}

TEST(MatrixTest, MultiplyAgreesWithSchoolbookOnRandomInputs) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 9;
    const Matrix a = oracle::random_matrix(rng, n, -2, 2);
    const Matrix b = oracle::random_matrix(rng, n, -2, 2);
    const Matrix ref = oracle::from_grid(
        oracle::schoolbook_multiply(oracle::to_grid(a), oracle::to_grid(b)));
    EXPECT_LE(oracle::max_abs_diff(multiply(a, b), ref), 1e-13);
  }
}

TEST(MatrixTest, LinearCombine) {
  const Matrix a{{1, -2}, {3.5, 4}};
  EXPECT_EQ(linear_combine(1, a, 0, a), a);
  EXPECT_EQ(linear_combine(1, a, -1, a), Matrix(2));
  EXPECT_EQ(linear_combine(2, Matrix::identity(2), 3, Matrix::identity(2)),
            (Matrix{{5, 0}, {0, 5}}));
  EXPECT_EQ(error_of([&] { linear_combine(1, a, 1, Matrix(3)); }),
            Errc::kDimensionMismatch);
  EXPECT_EQ(error_of([&] { linear_combine(NAN, a, 1, a); }),
            Errc::kNonFiniteValue);
}

TEST(MatrixTest, MatPower) {
  const Matrix j3 = standard_jordan_block(3);
  EXPECT_EQ(mat_power(j3, 3), Matrix(3));
  EXPECT_EQ(mat_power(j3, 0), Matrix::identity(3));
  Matrix corner(3);
  corner(0, 2) = 1.0;
  EXPECT_EQ(mat_power(j3, 2), corner);
}

TEST(MatrixTest, JordanBlockPowersAreExact) {
  for (std::size_t n = 1; n <= 16; ++n) {
    const Matrix j = standard_jordan_block(n);
    EXPECT_EQ(mat_power(j, static_cast<unsigned>(n)), Matrix(n)) << n;
    if (n >= 2) {
      Matrix corner(n);
      corner(0, n - 1) = 1.0;
      EXPECT_EQ(mat_power(j, static_cast<unsigned>(n - 1)), corner) << n;
    }
  }
}

TEST(MatrixTest, Invert) {
  EXPECT_EQ(invert(Matrix::identity(3)), Matrix::identity(3));
  EXPECT_EQ(invert(Matrix{{2, 0}, {0, 4}}), (Matrix{{0.5, 0}, {0, 0.25}}));
  EXPECT_EQ(error_of([] { invert(standard_jordan_block(3)); }),
            Errc::kSingularMatrix);
  EXPECT_EQ(error_of([] { invert(Matrix(2)); }), Errc::kSingularMatrix);
  EXPECT_EQ(error_of([] { invert(Matrix{{1, 2}, {2, 4}}); }),
            Errc::kSingularMatrix);
}

TEST(MatrixTest, InvertResidualAndInvolution) {
  std::mt19937_64 rng(13);
  int checked = 0;
  while (checked < 100) {
    const std::size_t n = 1 + rng() % 10;
    const Matrix a = oracle::random_matrix(rng, n, -1, 1);
    Matrix inv(n);
    try {
      inv = invert(a);
    } catch (const Error&) {
      continue;
    }
    // Crude condition estimate in the max norm.
    if (a.max_abs() * inv.max_abs() * static_cast<double>(n) > 1e6) continue;
    ++checked;
    EXPECT_LE(oracle::max_abs_diff(multiply(a, inv), Matrix::identity(n)),
              1e-9);
    EXPECT_LE(oracle::max_abs_diff(invert(inv), a), 1e-8);
  }
}

TEST(MatrixTest, MatExp) {
  EXPECT_EQ(mat_exp(Matrix(3)), Matrix::identity(3));

  const double c = 0.37;
  const Matrix cj = scale(c, standard_jordan_block(2));
  EXPECT_EQ(mat_exp(cj), linear_combine(1, Matrix::identity(2), 1, cj));

  const Matrix e = mat_exp(Matrix::identity(2));
  EXPECT_NEAR(e(0, 0), std::exp(1.0), 1e-12);
  EXPECT_NEAR(e(1, 1), std::exp(1.0), 1e-12);
  EXPECT_EQ(e(0, 1), 0.0);

  const double diag[] = {-0.5, 0.25, 0.9};
  const Matrix d = mat_exp(Matrix::diagonal(diag));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(d(i, i), std::exp(diag[i]), 1e-15 * std::exp(diag[i]) * 4);
  }
}

TEST(MatrixTest, MatExpOutsideRegimeFails) {
  EXPECT_EQ(error_of([] { mat_exp(scale(500.0, Matrix::identity(2))); }),
            Errc::kExpDidNotConverge);
  EXPECT_EQ(error_of([] { mat_exp(scale(150.0, Matrix::identity(2))); }),
            Errc::kExpDidNotConverge);
}

TEST(MatrixTest, MatExpInverseProperty) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 10;
    Matrix a = oracle::random_matrix(rng, n, -1, 1);
    const double norm = a.frobenius_norm();
    a = scale(0.99 * std::uniform_real_distribution<double>(0, 1)(rng) / norm,
              a);
    ASSERT_LT(a.frobenius_norm(), 1.0);
    const Matrix prod = multiply(mat_exp(a), mat_exp(scale(-1, a)));
    EXPECT_LE(oracle::max_abs_diff(prod, Matrix::identity(n)), 1e-10);
  }
}

TEST(MatrixTest, MatExpOfStrictlyUpperTriangularIsFiniteSum) {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 8;
    Matrix a(n);
    std::uniform_real_distribution<double> u(-1, 1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) a(i, j) = u(rng);
    // Same accumulation order: term_k = term_{k-1} * A / k for k < n.
    Matrix sum = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (std::size_t k = 1; k < n; ++k) {
      term = scale(1.0 / static_cast<double>(k), multiply(term, a));
      sum = linear_combine(1.0, sum, 1.0, term);
    }
    EXPECT_EQ(mat_power(a, static_cast<unsigned>(n)), Matrix(n));
    EXPECT_EQ(mat_exp(a), sum);
  }
}

TEST(MatrixTest, NilpotencyIndex) {
  EXPECT_EQ(nilpotency_index(standard_jordan_block(3)), 3u);
  EXPECT_EQ(nilpotency_index(Matrix(4)), 1u);
  EXPECT_EQ(nilpotency_index(Matrix(1)), 1u);
  EXPECT_EQ(error_of([] { nilpotency_index(Matrix::identity(2)); }),
            Errc::kNotNilpotent);

  Matrix two_blocks(4);  // J2 ⊕ J2
  two_blocks(0, 1) = 1.0;
  two_blocks(2, 3) = 1.0;
  EXPECT_EQ(nilpotency_index(two_blocks), 2u);
}

TEST(MatrixTest, NilpotencyIndexOfLargeAndScaledBlocks) {
  for (std::size_t n = 2; n <= 64; ++n) {
    EXPECT_EQ(nilpotency_index(standard_jordan_block(n)), n);
  }
  EXPECT_EQ(nilpotency_index(scale(1e-6, standard_jordan_block(5))), 5u);
  EXPECT_EQ(nilpotency_index(scale(1e6, standard_jordan_block(5))), 5u);
}

TEST(MatrixTest, JordanBasisOfStandardBlockIsIdentity) {
  EXPECT_EQ(jordan_basis_nilpotent(standard_jordan_block(3)),
            Matrix::identity(3));
  EXPECT_EQ(jordan_basis_nilpotent(Matrix(1)), Matrix::identity(1));
}

TEST(MatrixTest, JordanBasisRejectsOtherShapes) {
  EXPECT_EQ(error_of([] { jordan_basis_nilpotent(Matrix(3)); }),
            Errc::kNotSingleBlock);
  Matrix two_blocks(4);
  two_blocks(0, 1) = 1.0;
  two_blocks(2, 3) = 1.0;
  EXPECT_EQ(error_of([&] { jordan_basis_nilpotent(two_blocks); }),
            Errc::kNotSingleBlock);
  EXPECT_EQ(error_of([] { jordan_basis_nilpotent(Matrix::identity(3)); }),
            Errc::kNotNilpotent);
}

TEST(MatrixTest, JordanBasisOfConjugatedBlock) {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 8;
    const Matrix s = oracle::random_well_conditioned(rng, n);
    const Matrix j = standard_jordan_block(n);
    const Matrix x = multiply(multiply(s, j), invert(s));
    const Matrix q = jordan_basis_nilpotent(x);
    const Matrix back = multiply(multiply(invert(q), x), q);
    EXPECT_LE(oracle::max_abs_diff(back, j), 1e-8) << "n=" << n;
  }
}

TEST(MatrixTest, JordanBasisTieBreakPicksSmallestIndex) {
  // X^{n-1} = e_1 (e_1 + e_2)^T has equal column norms for e_1 and e_2.
  const Matrix s{{1, 0}, {1, 1}};
  const Matrix x = multiply(multiply(invert(s), standard_jordan_block(2)), s);
  const Matrix top = mat_power(x, 1);
  ASSERT_EQ(std::abs(top(0, 0)) + std::abs(top(1, 0)),
            std::abs(top(0, 1)) + std::abs(top(1, 1)));
  const Matrix q = jordan_basis_nilpotent(x);
  EXPECT_EQ(q(0, 1), 1.0);
  EXPECT_EQ(q(1, 1), 0.0);
}

}  // namespace
}  // namespace nilcrypt
