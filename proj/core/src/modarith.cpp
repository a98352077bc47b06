#include "nilcrypt/modarith.hpp"

#include <string>
#include <vector>

#include "nilcrypt/error.hpp"

namespace nilcrypt {
namespace {

__extension__ using wide = unsigned __int128;

void require_secret(const DHParams& params, std::uint64_t secret) {
  if (secret < 1 || secret >= params.p) {
    throw Error(Errc::kInvalidExponent,
                "secret " + std::to_string(secret) + " outside [1, " +
                    std::to_string(params.p - 1) + "]");
  }
}

// Miller-Rabin round for odd m > 2 with m - 1 = d * 2^s.
bool passes_witness(std::uint64_t m, std::uint64_t witness, std::uint64_t d,
                    unsigned s) {
  std::uint64_t y = mod_pow(witness % m, d, m);
  if (y == 1 || y == m - 1) return true;
  for (unsigned r = 1; r < s; ++r) {
    y = static_cast<std::uint64_t>(wide{y} * y % m);
    if (y == m - 1) return true;
  }
  return false;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t m) {
  std::vector<std::uint64_t> factors;
  for (std::uint64_t f = 2; f * f <= m; ++f) {
    if (m % f != 0) continue;
    factors.push_back(f);
    while (m % f == 0) m /= f;
  }
  if (m > 1) factors.push_back(m);
  return factors;
}

}  // namespace

void DHParams::validate() const {
  if (p < 3 || p >= kMaxModulus || !is_prime(p)) {
    throw Error(Errc::kInvalidModulus,
                "p = " + std::to_string(p) + " is not a prime in [3, 2^31)");
  }
  if (x < 2 || x > p - 2) {
    throw Error(Errc::kInvalidParameter,
                "base x = " + std::to_string(x) + " outside [2, p-2]");
  }
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
  if (p < 2) {
    throw Error(Errc::kInvalidModulus, "modulus must be >= 2");
  }
  // Miller-Rabin calls this with moduli up to 2^64.
  std::uint64_t result = 1 % p;
  std::uint64_t b = base % p;
  while (exp > 0) {
    if (exp & 1) result = static_cast<std::uint64_t>(wide{result} * b % p);
    b = static_cast<std::uint64_t>(wide{b} * b % p);
    exp >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t m) {
  if (m < 2) return false;
  for (std::uint64_t small : {2u, 3u, 5u, 7u}) {
    if (m == small) return true;
    if (m % small == 0) return false;
  }
  std::uint64_t d = m - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t witness : {2u, 3u, 5u, 7u}) {
    if (!passes_witness(m, witness, d, s)) return false;
  }
  return true;
}

std::uint64_t dh_public(const DHParams& params, std::uint64_t secret) {
  params.validate();
  require_secret(params, secret);
  return mod_pow(params.x, secret, params.p);
}

DHKeyPair dh_keypair(const DHParams& params, std::uint64_t secret) {
  return DHKeyPair{secret, dh_public(params, secret)};
}

std::uint64_t dh_shared(const DHParams& params, std::uint64_t secret,
                        std::uint64_t other_public) {
  params.validate();
  require_secret(params, secret);
  if (other_public < 1 || other_public >= params.p) {
    throw Error(Errc::kInvalidPublicValue,
                "public value " + std::to_string(other_public) +
                    " outside [1, p-1]");
  }
  const std::uint64_t k = mod_pow(other_public, secret, params.p);
  if (k <= 1) {
    throw Error(Errc::kDegenerateKey,
                "shared secret K = " + std::to_string(k) +
                    "; choose new secrets");
  }
  return k;
}

std::uint64_t multiplicative_order(std::uint64_t x, std::uint64_t p) {
  if (p < 2) throw Error(Errc::kInvalidModulus, "modulus must be >= 2");
  if (x % p == 0) {
    throw Error(Errc::kInvalidParameter, "zero has no multiplicative order");
  }
  std::uint64_t order = p - 1;
  for (std::uint64_t f : prime_factors(p - 1)) {
    while (order % f == 0 && mod_pow(x, order / f, p) == 1) order /= f;
  }
  return order;
}

}  // namespace nilcrypt
