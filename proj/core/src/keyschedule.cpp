#include "nilcrypt/keyschedule.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <utility>

#include "nilcrypt/error.hpp"

namespace nilcrypt {

void SchemeParams::validate() const {
  if (n < 2 || n > kMaxBlockDim) {
    throw Error(Errc::kInvalidParameter,
                "block dimension n = " + std::to_string(n) +
                    " outside [2, " + std::to_string(kMaxBlockDim) + "]");
  }
  dh.validate();
  if (base_a < 2) {
    throw Error(Errc::kInvalidBase, "radix must be >= 2");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(Errc::kInvalidEpsilon, "epsilon must be positive and finite");
  }
}

bool operator==(const SchemeParams& a, const SchemeParams& b) {
  return a.n == b.n && a.dh == b.dh && a.base_a == b.base_a &&
         a.offset == b.offset &&
         std::bit_cast<std::uint64_t>(a.epsilon) ==
             std::bit_cast<std::uint64_t>(b.epsilon);
}

CoefficientMatrix derive_A(std::uint64_t k, const SchemeParams& params) {
  params.validate();
  if (k <= 1) {
    throw Error(Errc::kDegenerateKey,
                "K = " + std::to_string(k) + " yields a constant schedule");
  }
  if (k >= params.dh.p) {
    throw Error(Errc::kInvalidParameter, "K must be below p");
  }
  const std::size_t n = params.n;
  CoefficientMatrix a{n, std::vector<std::uint64_t>(n * n)};
  // Consecutive powers K^1 .. K^(n^2), row-major.
  std::uint64_t power = 1;
  for (std::size_t idx = 0; idx < n * n; ++idx) {
    power = power * k % params.dh.p;
    a.entries[idx] = power;
  }
  return a;
}

Conjugator conjugator(const CoefficientMatrix& a, const SchemeParams& params) {
  params.validate();
  if (a.n != params.n || a.entries.size() != a.n * a.n) {
    throw Error(Errc::kDimensionMismatch,
                "coefficient matrix does not match block dimension");
  }
  const std::size_t n = a.n;
  const double shift =
      static_cast<double>(n) * static_cast<double>(params.dh.p) +
      params.epsilon;
  Matrix s(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      s(i, j) = (i == j ? shift : 0.0) - static_cast<double>(a(i, j));
    }
  }
  const Matrix s_inv = invert(s);
  return Conjugator{mat_exp(s_inv), mat_exp(scale(-1.0, s_inv))};
}

Matrix derive_X(const Matrix& p, const Matrix& p_inv, std::size_t n) {
  if (p.dim() != n || p_inv.dim() != n) {
    throw Error(Errc::kDimensionMismatch, "conjugator does not match n");
  }
  Matrix x = multiply(multiply(p, standard_jordan_block(n)), p_inv);
  unsigned index = 0;
  try {
    index = nilpotency_index(x);
  } catch (const Error& e) {
    if (e.code() != Errc::kNotNilpotent) throw;
    throw Error(Errc::kNotSingleBlock, "conjugated block is not nilpotent");
  }
  if (index != n) {
    throw Error(Errc::kNotSingleBlock,
                "conjugated block has nilpotency index " +
                    std::to_string(index));
  }
  return x;
}

SharedMatrixKey build_shared_key(std::uint64_t k, const SchemeParams& params) {
  CoefficientMatrix a = derive_A(k, params);
  Conjugator c = conjugator(a, params);
  return key_from_conjugator(params, std::move(a), std::move(c.p),
                             std::move(c.p_inv));
}

SharedMatrixKey key_from_conjugator(const SchemeParams& params,
                                    CoefficientMatrix a, Matrix p,
                                    Matrix p_inv) {
  params.validate();
  Matrix x = derive_X(p, p_inv, params.n);
  return SharedMatrixKey{params, std::move(a), std::move(p), std::move(p_inv),
                         std::move(x)};
}

}  // namespace nilcrypt
