#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "nilcrypt/modarith.hpp"

namespace nilcrypt {

/// Three LF-terminated ASCII decimal lines: p, x, secret.
struct KeyFile {
  DHParams dh;
  std::uint64_t secret = 0;

  friend bool operator==(const KeyFile&, const KeyFile&) = default;
};

std::string format_keyfile(const KeyFile& key);
/// Throws InvalidKeyFile on malformed text, InvalidModulus / InvalidParameter
/// / InvalidExponent when the values violate the exchange invariants.
KeyFile parse_keyfile(std::string_view text);

KeyFile read_keyfile(const std::filesystem::path& path);
void write_keyfile(const std::filesystem::path& path, const KeyFile& key);

/// Strict unsigned decimal parse, no sign or whitespace.
std::uint64_t parse_u64(std::string_view text, std::string_view what);

}  // namespace nilcrypt
