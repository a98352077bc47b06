#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nilcrypt/keyschedule.hpp"
#include "nilcrypt/matrix.hpp"

namespace nilcrypt {

/// Little-endian digit expansion of a message in radix base_a.
struct DigitMessage {
  std::uint64_t base_a = 0;
  std::vector<std::uint64_t> digits;

  std::size_t digit_count() const noexcept { return digits.size(); }

  friend bool operator==(const DigitMessage&, const DigitMessage&) = default;
};

/// Public parameters echoed in every ciphertext. Never carries key material.
struct ParamsEcho {
  std::uint32_t n = 0;
  std::uint64_t p = 0;
  std::uint64_t base_a = 0;
  std::uint32_t offset = 0;
  double epsilon = 0.0;

  static ParamsEcho of(const SchemeParams& params);
  /// Bit-exact comparison, epsilon included.
  bool matches(const SchemeParams& params) const;

  friend bool operator==(const ParamsEcho& a, const ParamsEcho& b);
};

struct Ciphertext {
  ParamsEcho params;
  std::uint64_t digit_count = 0;
  std::vector<Matrix> blocks;

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

/// ceil(digit_count / (n - 1)).
std::uint64_t expected_block_count(std::uint64_t digit_count, std::uint32_t n);

DigitMessage digits_of(std::uint64_t m, std::uint64_t base_a);
/// Digit expansion of an unbounded ASCII decimal integer.
DigitMessage digits_of_decimal(std::string_view decimal, std::uint64_t base_a);
/// Inverse of digits_of_decimal: sum of d_i * base_a^i in ASCII decimal.
std::string to_decimal(const DigitMessage& msg);

/// Logarithmic coefficient ln(d + offset). Throws UnencodableDigit when
/// d + offset < 1.
double digit_coefficient(std::uint64_t digit, std::uint32_t offset);

/// sum_j ln(d_j + offset) X^(j+1), built from explicit powers of X.
Matrix encode_block(std::span<const std::uint64_t> digits, const Matrix& x,
                    std::uint32_t offset);

/// Same polynomial, assembled in Jordan coordinates and conjugated by the
/// key's P. Numerically preferable to raw powers of X.
Matrix encode_block(std::span<const std::uint64_t> digits,
                    const SharedMatrixKey& key);

/// A Jordan basis together with its inverse, computed once per key.
struct JordanFrame {
  Matrix q;
  Matrix q_inv;

  static JordanFrame from_basis(Matrix q);
  static JordanFrame of(const Matrix& x);
};

/// Reads digits from Y = Q^{-1} block Q.
///
/// Integrity checks, in order: every entry on or below the diagonal of Y is
/// below 1e-6 in magnitude and each superdiagonal is constant within 1e-6
/// (CorruptCiphertext); exp(Y[0][i]) lies within 0.25 of an integer and the
/// shifted digit falls in [0, base_a) (DigitOutOfRange).
std::vector<std::uint64_t> decode_block(const Matrix& block,
                                        const JordanFrame& frame,
                                        std::uint32_t offset,
                                        std::uint64_t base_a,
                                        std::size_t expected_len);
std::vector<std::uint64_t> decode_block(const Matrix& block, const Matrix& q,
                                        std::uint32_t offset,
                                        std::uint64_t base_a,
                                        std::size_t expected_len);

Ciphertext encrypt_message(const DigitMessage& msg, const SharedMatrixKey& key);
DigitMessage decrypt_message(const Ciphertext& ct, const SharedMatrixKey& key);

/// Decodes every block of ct in the given frame, truncating to digit_count.
/// Shared by honest decryption and the known-plaintext attack.
DigitMessage decode_ciphertext(const Ciphertext& ct, const JordanFrame& frame);

}  // namespace nilcrypt
