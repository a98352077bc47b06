#include "nilcrypt/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "nilcrypt/error.hpp"

namespace nilcrypt {
namespace {

using boost::multiprecision::cpp_int;

constexpr double kStructureTolerance = 1e-6;
constexpr double kRoundingHalfWidth = 0.25;

void require_base(std::uint64_t base_a) {
  if (base_a < 2) throw Error(Errc::kInvalidBase, "radix must be >= 2");
}

// Coefficients for one block, padded with zeros to n-1 entries.
std::vector<double> block_coefficients(std::span<const std::uint64_t> digits,
                                       std::size_t n, std::uint32_t offset) {
  if (digits.size() > n - 1) {
    throw Error(Errc::kBlockOverflow,
                std::to_string(digits.size()) + " digits exceed capacity " +
                    std::to_string(n - 1));
  }
  std::vector<double> coeffs(n - 1, 0.0);
  for (std::size_t j = 0; j < digits.size(); ++j) {
    coeffs[j] = digit_coefficient(digits[j], offset);
  }
  return coeffs;
}

}  // namespace

ParamsEcho ParamsEcho::of(const SchemeParams& params) {
  return ParamsEcho{params.n, params.dh.p, params.base_a, params.offset,
                    params.epsilon};
}

bool ParamsEcho::matches(const SchemeParams& params) const {
  return *this == of(params);
}

bool operator==(const ParamsEcho& a, const ParamsEcho& b) {
  return a.n == b.n && a.p == b.p && a.base_a == b.base_a &&
         a.offset == b.offset &&
         std::bit_cast<std::uint64_t>(a.epsilon) ==
             std::bit_cast<std::uint64_t>(b.epsilon);
}

std::uint64_t expected_block_count(std::uint64_t digit_count,
                                   std::uint32_t n) {
  if (n < 2) throw Error(Errc::kInvalidParameter, "block dimension below 2");
  const std::uint64_t capacity = n - 1;
  return digit_count / capacity + (digit_count % capacity != 0 ? 1 : 0);
}

DigitMessage digits_of(std::uint64_t m, std::uint64_t base_a) {
  require_base(base_a);
  DigitMessage msg{base_a, {}};
  do {
    msg.digits.push_back(m % base_a);
    m /= base_a;
  } while (m != 0);
  return msg;
}

DigitMessage digits_of_decimal(std::string_view decimal,
                               std::uint64_t base_a) {
  require_base(base_a);
  if (decimal.empty() ||
      !std::all_of(decimal.begin(), decimal.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(Errc::kInvalidParameter,
                "message integer must be non-empty ASCII decimal");
  }
  cpp_int value{std::string(decimal)};
  DigitMessage msg{base_a, {}};
  const cpp_int radix = base_a;
  do {
    const cpp_int digit = value % radix;
    msg.digits.push_back(static_cast<std::uint64_t>(digit));
    value /= radix;
  } while (value != 0);
  return msg;
}

std::string to_decimal(const DigitMessage& msg) {
  require_base(msg.base_a);
  cpp_int value = 0;
  for (auto it = msg.digits.rbegin(); it != msg.digits.rend(); ++it) {
    value = value * msg.base_a + *it;
  }
  return value.str();
}

double digit_coefficient(std::uint64_t digit, std::uint32_t offset) {
  if (offset == 0 && digit == 0) {
    throw Error(Errc::kUnencodableDigit,
                "digit 0 has no logarithm with offset 0");
  }
  return std::log(static_cast<double>(digit) + static_cast<double>(offset));
}

Matrix encode_block(std::span<const std::uint64_t> digits, const Matrix& x,
                    std::uint32_t offset) {
  const std::size_t n = x.dim();
  const std::vector<double> coeffs = block_coefficients(digits, n, offset);
  Matrix block(n);
  Matrix power = x;
  for (std::size_t j = 0; j < digits.size(); ++j) {
    if (j > 0) power = multiply(power, x);
    block = linear_combine(1.0, block, coeffs[j], power);
  }
  return block;
}

Matrix encode_block(std::span<const std::uint64_t> digits,
                    const SharedMatrixKey& key) {
  const std::size_t n = key.params.n;
  const std::vector<double> coeffs =
      block_coefficients(digits, n, key.params.offset);
  // sum_j c_j J^(j+1) is upper-triangular Toeplitz: c_j on superdiagonal j+1.
  Matrix jordan(n);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    for (std::size_t r = 0; r + j + 1 < n; ++r) jordan(r, r + j + 1) = coeffs[j];
  }
  return multiply(multiply(key.p, jordan), key.p_inv);
}

JordanFrame JordanFrame::from_basis(Matrix q) {
  Matrix q_inv = invert(q);
  return JordanFrame{std::move(q), std::move(q_inv)};
}

JordanFrame JordanFrame::of(const Matrix& x) {
  return from_basis(jordan_basis_nilpotent(x));
}

std::vector<std::uint64_t> decode_block(const Matrix& block,
                                        const JordanFrame& frame,
                                        std::uint32_t offset,
                                        std::uint64_t base_a,
                                        std::size_t expected_len) {
  require_base(base_a);
  const std::size_t n = frame.q.dim();
  if (block.dim() != n) {
    throw Error(Errc::kCorruptCiphertext,
                "block dimension does not match the key");
  }
  if (expected_len > n - 1) {
    throw Error(Errc::kBlockOverflow, "expected length exceeds capacity");
  }
  const Matrix y = multiply(multiply(frame.q_inv, block), frame.q);

  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c <= r; ++c) {
      if (!(std::abs(y(r, c)) < kStructureTolerance)) {
        throw Error(Errc::kCorruptCiphertext,
                    "entry (" + std::to_string(r) + "," + std::to_string(c) +
                        ") is not strictly upper triangular");
      }
    }
  }
  for (std::size_t d = 1; d < n; ++d) {
    double lo = y(0, d);
    double hi = y(0, d);
    for (std::size_t r = 1; r + d < n; ++r) {
      lo = std::min(lo, y(r, r + d));
      hi = std::max(hi, y(r, r + d));
    }
    if (!(hi - lo <= kStructureTolerance)) {
      throw Error(Errc::kCorruptCiphertext,
                  "superdiagonal " + std::to_string(d) + " is not constant");
    }
  }

  std::vector<std::uint64_t> digits;
  digits.reserve(expected_len);
  for (std::size_t i = 1; i <= expected_len; ++i) {
    const double value = std::exp(y(0, i));
    const double nearest = std::round(value);
    if (!std::isfinite(value) ||
        !(std::abs(value - nearest) <= kRoundingHalfWidth)) {
      throw Error(Errc::kDigitOutOfRange,
                  "coefficient " + std::to_string(i) +
                      " does not decode to an integer");
    }
    const double shifted = nearest - static_cast<double>(offset);
    if (shifted < 0.0 || shifted >= static_cast<double>(base_a)) {
      throw Error(Errc::kDigitOutOfRange,
                  "digit " + std::to_string(i) + " outside [0, base)");
    }
    digits.push_back(static_cast<std::uint64_t>(shifted));
  }
  return digits;
}

std::vector<std::uint64_t> decode_block(const Matrix& block, const Matrix& q,
                                        std::uint32_t offset,
                                        std::uint64_t base_a,
                                        std::size_t expected_len) {
  return decode_block(block, JordanFrame::from_basis(q), offset, base_a,
                      expected_len);
}

Ciphertext encrypt_message(const DigitMessage& msg,
                           const SharedMatrixKey& key) {
  const SchemeParams& params = key.params;
  if (msg.base_a != params.base_a) {
    throw Error(Errc::kParamMismatch,
                "message radix differs from the scheme radix");
  }
  for (std::uint64_t d : msg.digits) {
    if (d >= params.base_a) {
      throw Error(Errc::kUnencodableDigit,
                  "digit " + std::to_string(d) + " not below the radix");
    }
  }

  const std::size_t capacity = params.block_capacity();
  // Padding must encode to coefficient 0: ln(0 + offset) needs offset == 1,
  // ln(1 + 0) covers offset 0. Larger offsets pad with ln(offset) instead,
  // which decryption ignores through digit_count.
  const std::uint64_t pad = params.offset == 0 ? 1 : 0;

  Ciphertext ct{ParamsEcho::of(params), msg.digit_count(), {}};
  ct.blocks.reserve(expected_block_count(msg.digit_count(), params.n));
  std::vector<std::uint64_t> chunk(capacity);
  for (std::size_t start = 0; start < msg.digits.size(); start += capacity) {
    const std::size_t len = std::min(capacity, msg.digits.size() - start);
    std::copy_n(msg.digits.begin() + static_cast<std::ptrdiff_t>(start), len,
                chunk.begin());
    std::fill(chunk.begin() + static_cast<std::ptrdiff_t>(len), chunk.end(),
              pad);
    ct.blocks.push_back(encode_block(chunk, key));
  }
  return ct;
}

DigitMessage decode_ciphertext(const Ciphertext& ct, const JordanFrame& frame) {
  const std::uint32_t n = ct.params.n;
  if (frame.q.dim() != n) {
    throw Error(Errc::kParamMismatch, "key dimension differs from ciphertext");
  }
  if (ct.blocks.size() != expected_block_count(ct.digit_count, n)) {
    throw Error(Errc::kCorruptCiphertext,
                "block count inconsistent with digit count");
  }
  DigitMessage msg{ct.params.base_a, {}};
  msg.digits.reserve(ct.digit_count);
  const std::size_t capacity = n - 1;
  for (const Matrix& block : ct.blocks) {
    const std::size_t len = std::min<std::uint64_t>(
        capacity, ct.digit_count - msg.digits.size());
    const auto digits =
        decode_block(block, frame, ct.params.offset, ct.params.base_a, len);
    msg.digits.insert(msg.digits.end(), digits.begin(), digits.end());
  }
  return msg;
}

DigitMessage decrypt_message(const Ciphertext& ct,
                             const SharedMatrixKey& key) {
  if (!ct.params.matches(key.params)) {
    throw Error(Errc::kParamMismatch,
                "ciphertext parameters differ from the key's scheme");
  }
  return decode_ciphertext(ct, JordanFrame::of(key.x));
}

}  // namespace nilcrypt
