#pragma once

#include <cstdint>
#include <vector>

#include "nilcrypt/matrix.hpp"
#include "nilcrypt/modarith.hpp"

namespace nilcrypt {

/// Everything both parties agree on before exchanging any message.
struct SchemeParams {
  std::uint32_t n = 0;          // block dimension, 2..64
  DHParams dh;
  std::uint64_t base_a = 256;   // message radix
  double epsilon = 1.0;
  /// Digit shift applied before the logarithm. Zero is legal only when every
  /// encoded digit is at least 1.
  std::uint32_t offset = 1;

  /// Throws InvalidParameter, InvalidModulus, InvalidBase or InvalidEpsilon.
  void validate() const;

  /// Digits carried by one block.
  std::size_t block_capacity() const noexcept { return n - 1; }

  /// Equality compares epsilon bit-for-bit.
  friend bool operator==(const SchemeParams& a, const SchemeParams& b);
};

inline constexpr std::uint32_t kMaxBlockDim = 64;

/// n×n matrix of residues in [0, p), row-major.
struct CoefficientMatrix {
  std::size_t n = 0;
  std::vector<std::uint64_t> entries;

  std::uint64_t operator()(std::size_t row, std::size_t col) const {
    return entries[row * n + col];
  }
};

struct Conjugator {
  Matrix p;
  Matrix p_inv;
};

/// Key material shared by both parties after the exchange. X = P J P^{-1}
/// where J is the standard Jordan block.
struct SharedMatrixKey {
  SchemeParams params;
  CoefficientMatrix a;
  Matrix p;
  Matrix p_inv;
  Matrix x;
};

/// A[i][j] = K^(i*n + j + 1) mod p.
CoefficientMatrix derive_A(std::uint64_t k, const SchemeParams& params);

/// P = exp(S^{-1}) and P^{-1} = exp(-S^{-1}) with S = (n p + eps) I - A.
Conjugator conjugator(const CoefficientMatrix& a, const SchemeParams& params);

/// X = P J P^{-1}; throws NotSingleBlock if the result does not have
/// nilpotency index n.
Matrix derive_X(const Matrix& p, const Matrix& p_inv, std::size_t n);

SharedMatrixKey build_shared_key(std::uint64_t k, const SchemeParams& params);

/// Assembles a key around a caller-chosen conjugator. Used to reproduce
/// hand-built configurations such as the identity conjugator.
SharedMatrixKey key_from_conjugator(const SchemeParams& params,
                                    CoefficientMatrix a, Matrix p,
                                    Matrix p_inv);

}  // namespace nilcrypt
