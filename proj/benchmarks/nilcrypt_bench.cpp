#include <random>

#include "benchmark/benchmark.h"
#include "nilcrypt/codec.hpp"
#include "nilcrypt/cryptanalysis.hpp"
#include "nilcrypt/keyschedule.hpp"
#include "nilcrypt/matrix.hpp"

namespace nilcrypt {
namespace {

SchemeParams params_for(std::uint32_t n, std::uint64_t p) {
  return SchemeParams{n, DHParams{p, 2}, 256, 1.0, 1};
}

DigitMessage random_message(std::size_t len) {
  std::mt19937_64 rng(1);
  DigitMessage msg{256, std::vector<std::uint64_t>(len)};
  for (auto& d : msg.digits) d = rng() % 256;
  return msg;
}

void BM_MatExp(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const CoefficientMatrix a = derive_A(3, params_for(n, 65537));
  Matrix s(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      s(i, j) = (i == j ? n * 65537.0 + 1.0 : 0.0) - static_cast<double>(a(i, j));
  const Matrix s_inv = invert(s);
  for (auto _ : state) benchmark::DoNotOptimize(mat_exp(s_inv));
}
BENCHMARK(BM_MatExp)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_BuildSharedKey(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const SchemeParams params = params_for(n, 2147483629);
  for (auto _ : state) benchmark::DoNotOptimize(build_shared_key(123456789, params));
}
BENCHMARK(BM_BuildSharedKey)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_Encrypt(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const SharedMatrixKey key = build_shared_key(12345, params_for(n, 65537));
  const DigitMessage msg = random_message(1024);
  for (auto _ : state) benchmark::DoNotOptimize(encrypt_message(msg, key));
  state.SetBytesProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_Encrypt)->Arg(4)->Arg(8)->Arg(16);

void BM_Decrypt(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const SharedMatrixKey key = build_shared_key(12345, params_for(n, 65537));
  const Ciphertext ct = encrypt_message(random_message(1024), key);
  for (auto _ : state) benchmark::DoNotOptimize(decrypt_message(ct, key));
  state.SetBytesProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_Decrypt)->Arg(4)->Arg(8)->Arg(16);

void BM_DlogBsgs(benchmark::State& state) {
  const std::uint64_t p = 2147483629;
  const std::uint64_t y = mod_pow(2, 987654321, p);
  for (auto _ : state) benchmark::DoNotOptimize(dlog_bsgs(2, y, p));
}
BENCHMARK(BM_DlogBsgs)->Unit(benchmark::kMillisecond);

void BM_BruteForceK(benchmark::State& state) {
  const SchemeParams params = params_for(2, static_cast<std::uint64_t>(state.range(0)));
  const SharedMatrixKey key = build_shared_key(5, params);
  const Ciphertext ct = encrypt_message(DigitMessage{256, {17}}, key);
  for (auto _ : state) {
    const AttackReport r = brute_force_K(ct, params, std::nullopt, 1);
    benchmark::DoNotOptimize(r.trials);
  }
}
BENCHMARK(BM_BruteForceK)->Arg(101)->Arg(1009)->Arg(10007)->Unit(benchmark::kMillisecond);

void BM_KnownPlaintextAttack(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const SharedMatrixKey key = build_shared_key(12345, params_for(n, 65537));
  const DigitMessage msg = random_message(4 * (n - 1));
  const Ciphertext ct = encrypt_message(msg, key);
  const std::vector<std::uint64_t> crib(msg.digits.begin(), msg.digits.begin() + (n - 1));
  for (auto _ : state) benchmark::DoNotOptimize(known_plaintext_attack(ct, crib));
}
BENCHMARK(BM_KnownPlaintextAttack)->Arg(4)->Arg(8);

}  // namespace
}  // namespace nilcrypt

BENCHMARK_MAIN();
