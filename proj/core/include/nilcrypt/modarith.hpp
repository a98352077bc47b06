#pragma once

#include <cstdint>

namespace nilcrypt {

/// Prime modulus p (3 <= p < 2^31) and public base x in [2, p-2]. The base
/// need not be a primitive root.
struct DHParams {
  std::uint64_t p = 0;
  std::uint64_t x = 0;

  /// Throws InvalidModulus or InvalidParameter.
  void validate() const;

  friend bool operator==(const DHParams&, const DHParams&) = default;
};

struct DHKeyPair {
  std::uint64_t secret = 0;
  std::uint64_t public_value = 0;
};

inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 31;

/// base^exp mod p by square-and-multiply. Throws InvalidModulus for p < 2.
std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t p);

/// Deterministic Miller-Rabin with witnesses {2, 3, 5, 7}; exact below
/// 3,215,031,751.
bool is_prime(std::uint64_t m);

std::uint64_t dh_public(const DHParams& params, std::uint64_t secret);
DHKeyPair dh_keypair(const DHParams& params, std::uint64_t secret);

/// K = other_public^secret mod p. Throws DegenerateKey when K <= 1.
std::uint64_t dh_shared(const DHParams& params, std::uint64_t secret,
                        std::uint64_t other_public);

/// Multiplicative order of x modulo the prime p.
std::uint64_t multiplicative_order(std::uint64_t x, std::uint64_t p);

}  // namespace nilcrypt
