#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "nilcrypt/codec.hpp"

namespace nilcrypt {

// Layout, all little-endian:
//   "NILM" | version u8 = 1 | n u32 | p u64 | base_a u64 | offset u32 |
//   epsilon f64 | digit_count u64 | block_count u64 |
//   block_count * n^2 f64, row-major per block.
inline constexpr std::size_t kCiphertextHeaderSize = 53;
inline constexpr std::uint8_t kCiphertextVersion = 1;

std::vector<std::uint8_t> serialize_ciphertext(const Ciphertext& ct);

/// Strict parse: any size, magic, version or count inconsistency, and any
/// non-finite entry, raises CorruptCiphertext.
Ciphertext parse_ciphertext(std::span<const std::uint8_t> bytes);

void write_ciphertext_file(const std::filesystem::path& path,
                           const Ciphertext& ct);
Ciphertext read_ciphertext_file(const std::filesystem::path& path);

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);
void write_binary_file(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes);

}  // namespace nilcrypt
