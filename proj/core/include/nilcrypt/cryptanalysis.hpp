#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nilcrypt/codec.hpp"
#include "nilcrypt/keyschedule.hpp"
#include "nilcrypt/matrix.hpp"

namespace nilcrypt {

/// Outcome of one attack run, printed next to the claimed work estimate.
struct AttackReport {
  std::string method;
  /// Which key model was attacked (e.g. the single-K power schedule).
  std::string model;
  std::uint64_t trials = 0;
  double elapsed_seconds = 0.0;
  /// Candidate shared secrets that passed verification (brute force).
  std::vector<std::uint64_t> recovered_keys;
  /// Recovered nilpotent matrix (known-plaintext attack).
  std::optional<Matrix> recovered_matrix;
  /// Digits decrypted with the recovered material, when any.
  std::optional<DigitMessage> decrypted;
  double estimate = 0.0;
};

/// exp(n^2 (1/epsilon + ln base_a)). Overflows to +infinity rather than
/// failing. Throws InvalidEpsilon for epsilon <= 0.
double work_estimate(std::uint32_t n, double epsilon, std::uint64_t base_a);

/// Smallest e >= 0 with x^e = y (mod p), by baby-step giant-step over the
/// subgroup generated by x. Throws NoSolution when y lies outside it.
std::uint64_t dlog_bsgs(std::uint64_t x, std::uint64_t y, std::uint64_t p);

/// Known-plaintext recovery of X from one block.
///
/// The block is f(X) = sum_k c_k X^k with c_k = ln(d_{k-1} + offset); digits
/// past known_digits are taken as zero coefficients (padding). The inverse
/// series g with g(f(t)) = t mod t^n is solved coefficient by coefficient and
/// X is returned as g(block).
Matrix kpa_recover_X(const Matrix& ct_block,
                     std::span<const std::uint64_t> known_digits,
                     std::uint32_t offset);

/// Reversion coefficients b_1..b_{n-1} of f(t) = sum_k c_k t^k, where
/// coeffs[k-1] = c_k. Exposed for testing.
std::vector<double> series_reversion(std::span<const double> coeffs,
                                     std::size_t n);

/// Decrypts every block of other_ct using a Jordan basis of x_hat.
DigitMessage kpa_decrypt(const Ciphertext& other_ct, const Matrix& x_hat,
                         std::uint32_t offset, std::uint64_t base_a);

inline constexpr std::uint64_t kBruteForceMaxModulus = 1'000'000;

/// Enumerates K in [2, p-1], rebuilding the key and decoding the first block
/// for each. Candidates whose decode passes every integrity check (and
/// matches the crib prefix, when given) are reported. Trials run on
/// `threads` workers; 0 picks the hardware concurrency.
AttackReport brute_force_K(const Ciphertext& ct, const SchemeParams& params,
                           std::optional<std::span<const std::uint64_t>> crib,
                           unsigned threads = 1);

/// One-crib break: recovers X from block 0 of ct using known_digits and
/// decrypts the whole ciphertext with it.
AttackReport known_plaintext_attack(const Ciphertext& ct,
                                    std::span<const std::uint64_t> known_digits);

}  // namespace nilcrypt
