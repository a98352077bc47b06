#include "nilcrypt/cryptanalysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "nilcrypt/error.hpp"
#include "nilcrypt/modarith.hpp"

namespace nilcrypt {
namespace {

// Truncated product of two series of length n (degree < n).
std::vector<double> series_multiply(const std::vector<double>& a,
                                    const std::vector<double>& b) {
  const std::size_t n = a.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; i + j < n; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

}  // namespace

double work_estimate(std::uint32_t n, double epsilon, std::uint64_t base_a) {
  if (!(epsilon > 0.0)) {
    throw Error(Errc::kInvalidEpsilon, "epsilon must be positive");
  }
  if (n < 1) throw Error(Errc::kInvalidParameter, "n must be >= 1");
  if (base_a < 2) throw Error(Errc::kInvalidBase, "radix must be >= 2");
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  return std::exp(n2 * (1.0 / epsilon + std::log(static_cast<double>(base_a))));
}

std::uint64_t dlog_bsgs(std::uint64_t x, std::uint64_t y, std::uint64_t p) {
  if (p < 3 || p >= kMaxModulus || !is_prime(p)) {
    throw Error(Errc::kInvalidModulus, "p must be a prime below 2^31");
  }
  if (x < 2 || x > p - 2) {
    throw Error(Errc::kInvalidParameter, "base outside [2, p-2]");
  }
  if (y < 1 || y >= p) {
    throw Error(Errc::kInvalidParameter, "target outside [1, p-1]");
  }
  const std::uint64_t order = multiplicative_order(x, p);
  const auto m = static_cast<std::uint64_t>(
      std::ceil(std::sqrt(static_cast<double>(order))));

  // Baby steps x^j for j < m, keeping the smallest j per residue.
  std::unordered_map<std::uint64_t, std::uint64_t> baby;
  baby.reserve(m);
  std::uint64_t value = 1;
  for (std::uint64_t j = 0; j < m; ++j) {
    baby.emplace(value, j);
    value = value * x % p;
  }
  // Giant stride x^{-m} = x^{order - m mod order}.
  const std::uint64_t stride = mod_pow(x, (order - m % order) % order, p);
  std::uint64_t gamma = y;
  for (std::uint64_t i = 0; i <= m; ++i) {
    if (const auto it = baby.find(gamma); it != baby.end()) {
      const std::uint64_t e = i * m + it->second;
      if (e < order) return e;
    }
    gamma = gamma * stride % p;
  }
  throw Error(Errc::kNoSolution,
              std::to_string(y) + " is not a power of " + std::to_string(x) +
                  " mod " + std::to_string(p));
}

std::vector<double> series_reversion(std::span<const double> coeffs,
                                     std::size_t n) {
  if (coeffs.empty() || coeffs[0] == 0.0) {
    throw Error(Errc::kLeadingCoefficientZero,
                "series has no linear term; reversion undefined");
  }
  if (coeffs.size() > n - 1) {
    throw Error(Errc::kBlockOverflow, "more coefficients than degrees");
  }
  // f as a truncated series: index = degree.
  std::vector<double> f(n, 0.0);
  std::copy(coeffs.begin(), coeffs.end(), f.begin() + 1);

  // powers[j] = f^j truncated to degree n-1, for j = 1..n-1.
  std::vector<std::vector<double>> powers(n);
  if (n > 1) powers[1] = f;
  for (std::size_t j = 2; j < n; ++j) {
    powers[j] = series_multiply(powers[j - 1], f);
  }

  // Match [t^k] sum_j b_j f^j = delta_{k1}; f^k starts at c_1^k t^k.
  std::vector<double> b(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    double rhs = k == 1 ? 1.0 : 0.0;
    for (std::size_t j = 1; j < k; ++j) rhs -= b[j] * powers[j][k];
    b[k] = rhs / powers[k][k];
  }
  return {b.begin() + 1, b.end()};
}

Matrix kpa_recover_X(const Matrix& ct_block,
                     std::span<const std::uint64_t> known_digits,
                     std::uint32_t offset) {
  const std::size_t n = ct_block.dim();
  if (n < 2) throw Error(Errc::kInvalidDimension, "block must be at least 2x2");
  if (known_digits.size() > n - 1) {
    throw Error(Errc::kBlockOverflow, "more known digits than block capacity");
  }
  std::vector<double> coeffs;
  coeffs.reserve(known_digits.size());
  for (std::uint64_t d : known_digits) {
    coeffs.push_back(digit_coefficient(d, offset));
  }
  const std::vector<double> b = series_reversion(coeffs, n);

  // Horner: X = M (b_1 I + M (b_2 I + ... + M b_{n-1} I)).
  const Matrix identity = Matrix::identity(n);
  Matrix acc = scale(b.back(), identity);
  for (std::size_t k = b.size() - 1; k-- > 0;) {
    acc = linear_combine(1.0, multiply(ct_block, acc), b[k], identity);
  }
  return multiply(ct_block, acc);
}

DigitMessage kpa_decrypt(const Ciphertext& other_ct, const Matrix& x_hat,
                         std::uint32_t offset, std::uint64_t base_a) {
  if (offset != other_ct.params.offset || base_a != other_ct.params.base_a) {
    throw Error(Errc::kParamMismatch,
                "offset or radix differs from the ciphertext header");
  }
  return decode_ciphertext(other_ct, JordanFrame::of(x_hat));
}

AttackReport brute_force_K(const Ciphertext& ct, const SchemeParams& params,
                           std::optional<std::span<const std::uint64_t>> crib,
                           unsigned threads) {
  if (params.dh.p > kBruteForceMaxModulus) {
    throw Error(Errc::kParameterTooLarge,
                "p = " + std::to_string(params.dh.p) +
                    " exceeds the enumeration cap " +
                    std::to_string(kBruteForceMaxModulus));
  }
  params.validate();
  if (!ct.params.matches(params)) {
    throw Error(Errc::kParamMismatch,
                "ciphertext header differs from the attack parameters");
  }
  if (ct.blocks.empty()) {
    throw Error(Errc::kInvalidParameter, "ciphertext has no blocks to test");
  }

  const auto start = std::chrono::steady_clock::now();
  const Matrix& target = ct.blocks.front();
  const std::size_t len =
      std::min<std::uint64_t>(params.block_capacity(), ct.digit_count);
  const std::uint64_t p = params.dh.p;

  std::atomic<std::uint64_t> next_k{2};
  std::atomic<std::uint64_t> trials{0};
  std::mutex found_mutex;
  std::vector<std::uint64_t> found;

  auto worker = [&] {
    for (std::uint64_t k = next_k.fetch_add(1); k < p;
         k = next_k.fetch_add(1)) {
      trials.fetch_add(1, std::memory_order_relaxed);
      bool accepted = false;
      try {
        const SharedMatrixKey key = build_shared_key(k, params);
        const auto digits =
            decode_block(target, JordanFrame::of(key.x), params.offset,
                         params.base_a, len);
        accepted = true;
        if (crib) {
          const std::size_t check = std::min(digits.size(), crib->size());
          accepted = std::equal(digits.begin(),
                                digits.begin() + static_cast<std::ptrdiff_t>(check),
                                crib->begin());
        }
      } catch (const Error&) {
        accepted = false;
      }
      if (accepted) {
        std::lock_guard lock(found_mutex);
        found.push_back(k);
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  std::sort(found.begin(), found.end());

  AttackReport report;
  report.method = crib ? "brute-force-K (crib)" : "brute-force-K";
  report.model = "single shared secret K expanded by consecutive powers";
  report.trials = trials.load();
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  report.recovered_keys = std::move(found);
  report.estimate = work_estimate(params.n, params.epsilon, params.base_a);
  return report;
}

AttackReport known_plaintext_attack(
    const Ciphertext& ct, std::span<const std::uint64_t> known_digits) {
  if (ct.blocks.empty()) {
    throw Error(Errc::kInvalidParameter, "ciphertext has no blocks to attack");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::size_t first_len =
      std::min<std::uint64_t>(ct.params.n - 1, ct.digit_count);
  if (known_digits.size() < first_len) {
    throw Error(Errc::kInvalidParameter,
                "crib must cover the whole first block (" +
                    std::to_string(first_len) + " digits)");
  }
  const auto crib = known_digits.first(first_len);

  AttackReport report;
  report.method = "known-plaintext reversion";
  report.model = "any nilpotent X; one block with known digits";
  report.trials = 1;
  report.recovered_matrix =
      kpa_recover_X(ct.blocks.front(), crib, ct.params.offset);
  report.decrypted = kpa_decrypt(ct, *report.recovered_matrix,
                                 ct.params.offset, ct.params.base_a);
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  report.estimate =
      work_estimate(ct.params.n, ct.params.epsilon, ct.params.base_a);
  return report;
}

}  // namespace nilcrypt
