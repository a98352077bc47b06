#include "nilcrypt/keyfile.hpp"

#include <charconv>
#include <vector>

#include "nilcrypt/ciphertext_file.hpp"
#include "nilcrypt/error.hpp"

namespace nilcrypt {

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(Errc::kInvalidParameter,
                std::string(what) + " is not an unsigned decimal integer: '" +
                    std::string(text) + "'");
  }
  return value;
}

std::string format_keyfile(const KeyFile& key) {
  return std::to_string(key.dh.p) + "\n" + std::to_string(key.dh.x) + "\n" +
         std::to_string(key.secret) + "\n";
}

KeyFile parse_keyfile(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    if (eol == std::string_view::npos) {
      throw Error(Errc::kInvalidKeyFile, "last line is not LF-terminated");
    }
    lines.push_back(text.substr(0, eol));
    text.remove_prefix(eol + 1);
  }
  if (lines.size() != 3) {
    throw Error(Errc::kInvalidKeyFile,
                "expected 3 lines, found " + std::to_string(lines.size()));
  }
  KeyFile key;
  try {
    key.dh.p = parse_u64(lines[0], "p");
    key.dh.x = parse_u64(lines[1], "x");
    key.secret = parse_u64(lines[2], "secret");
  } catch (const Error& e) {
    throw Error(Errc::kInvalidKeyFile, e.what());
  }
  key.dh.validate();
  if (key.secret < 1 || key.secret >= key.dh.p) {
    throw Error(Errc::kInvalidExponent, "secret outside [1, p-1]");
  }
  return key;
}

KeyFile read_keyfile(const std::filesystem::path& path) {
  const auto bytes = read_binary_file(path);
  return parse_keyfile(std::string_view(
      reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void write_keyfile(const std::filesystem::path& path, const KeyFile& key) {
  const std::string text = format_keyfile(key);
  write_binary_file(path, std::span(reinterpret_cast<const std::uint8_t*>(
                                        text.data()),
                                    text.size()));
}

}  // namespace nilcrypt
