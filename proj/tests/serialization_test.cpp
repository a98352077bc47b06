#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "gtest/gtest.h"
#include "nilcrypt/ciphertext_file.hpp"
#include "nilcrypt/error.hpp"
#include "nilcrypt/keyfile.hpp"
#include "test_util.hpp"

namespace nilcrypt {
namespace {

using Bytes = std::vector<std::uint8_t>;

void put_le(Bytes& out, std::uint64_t v, int width) {
  for (int i = 0; i < width; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

// Byte image assembled field by field from the documented layout.
Bytes reference_image(const Ciphertext& ct) {
  Bytes out{'N', 'I', 'L', 'M', 1};
  put_le(out, ct.params.n, 4);
  put_le(out, ct.params.p, 8);
  put_le(out, ct.params.base_a, 8);
  put_le(out, ct.params.offset, 4);
  put_le(out, std::bit_cast<std::uint64_t>(ct.params.epsilon), 8);
  put_le(out, ct.digit_count, 8);
  put_le(out, ct.blocks.size(), 8);
  for (const Matrix& b : ct.blocks)
    for (double v : b.entries()) put_le(out, std::bit_cast<std::uint64_t>(v), 8);
  return out;
}

Ciphertext random_ciphertext(std::mt19937_64& rng) {
  Ciphertext ct;
  ct.params.n = 2 + rng() % 7;
  ct.params.p = rng() % (1ull << 31);
  ct.params.base_a = 2 + rng() % 1000;
  ct.params.offset = rng() % 3;
  ct.params.epsilon = std::uniform_real_distribution<double>(1e-3, 10)(rng);
  const std::size_t blocks = rng() % 5;
  const std::uint64_t cap = ct.params.n - 1;
  ct.digit_count = blocks == 0 ? 0 : (blocks - 1) * cap + 1 + rng() % cap;
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (std::size_t b = 0; b < blocks; ++b) {
    Matrix m(ct.params.n);
    for (std::size_t i = 0; i < ct.params.n; ++i)
      for (std::size_t j = 0; j < ct.params.n; ++j) m(i, j) = u(rng);
    ct.blocks.push_back(m);
  }
  return ct;
}

Ciphertext small_ciphertext() {
  Ciphertext ct;
  ct.params = ParamsEcho{2, 7, 4, 1, 1.0};
  ct.digit_count = 1;
  ct.blocks.push_back(Matrix{{0.0, 1.5}, {0.0, 0.0}});
  return ct;
}

TEST(CiphertextFileTest, HeaderLayout) {
  const Bytes bytes = serialize_ciphertext(small_ciphertext());
  ASSERT_EQ(bytes.size(), kCiphertextHeaderSize + 4 * 8);
  EXPECT_EQ(bytes, reference_image(small_ciphertext()));
  EXPECT_EQ(bytes[5], 2);   // n, low byte first
  EXPECT_EQ(bytes[9], 7);   // p
  EXPECT_EQ(bytes[17], 4);  // base_a
  EXPECT_EQ(bytes[25], 1);  // offset
  // epsilon = 1.0 is 0x3FF0000000000000.
  EXPECT_EQ(bytes[35], 0xF0);
  EXPECT_EQ(bytes[36], 0x3F);
  EXPECT_EQ(bytes[37], 1);  // digit_count
  EXPECT_EQ(bytes[45], 1);  // block_count
}

TEST(CiphertextFileTest, RoundTripIsBitExact) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 1000; ++t) {
    const Ciphertext ct = random_ciphertext(rng);
    const Bytes bytes = serialize_ciphertext(ct);
    ASSERT_EQ(bytes, reference_image(ct));
    const Ciphertext back = parse_ciphertext(bytes);
    ASSERT_EQ(back, ct);
    ASSERT_EQ(serialize_ciphertext(back), bytes);
  }
}

TEST(CiphertextFileTest, RejectsMalformedInput) {
  const Bytes good = serialize_ciphertext(small_ciphertext());
  auto corrupt = [&](auto mutate) {
    Bytes b = good;
    mutate(b);
    return error_of([&] { parse_ciphertext(b); });
  };
  EXPECT_EQ(corrupt([](Bytes& b) { b[0] = 'X'; }), Errc::kCorruptCiphertext);
  EXPECT_EQ(corrupt([](Bytes& b) { b[4] = 2; }), Errc::kCorruptCiphertext);
  EXPECT_EQ(corrupt([](Bytes& b) { b.pop_back(); }), Errc::kCorruptCiphertext);
  EXPECT_EQ(corrupt([](Bytes& b) { b.push_back(0); }),
            Errc::kCorruptCiphertext);
  EXPECT_EQ(corrupt([](Bytes& b) { b.resize(20); }), Errc::kCorruptCiphertext);
  EXPECT_EQ(corrupt([](Bytes& b) { b.clear(); }), Errc::kCorruptCiphertext);
  // block_count disagrees with digit_count.
  EXPECT_EQ(corrupt([](Bytes& b) { b[37] = 2; }), Errc::kCorruptCiphertext);
  // n below 2.
  EXPECT_EQ(corrupt([](Bytes& b) { b[5] = 1; }), Errc::kCorruptCiphertext);
  // Non-finite entry.
  EXPECT_EQ(corrupt([](Bytes& b) {
              const auto nan =
                  std::bit_cast<std::uint64_t>(std::numeric_limits<double>::quiet_NaN());
              for (int i = 0; i < 8; ++i)
                b[kCiphertextHeaderSize + i] = static_cast<std::uint8_t>(nan >> (8 * i));
            }),
            Errc::kCorruptCiphertext);
  // Huge block count must not allocate before the size check.
  EXPECT_EQ(corrupt([](Bytes& b) {
              for (int i = 45; i < 53; ++i) b[i] = 0xFF;
            }),
            Errc::kCorruptCiphertext);
}

TEST(CiphertextFileTest, EmptyCiphertext) {
  Ciphertext ct;
  ct.params = ParamsEcho{3, 101, 256, 1, 1.0};
  const Bytes bytes = serialize_ciphertext(ct);
  EXPECT_EQ(bytes.size(), kCiphertextHeaderSize);
  EXPECT_EQ(parse_ciphertext(bytes), ct);
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("nilcrypt_test_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

TEST(CiphertextFileTest, FileRoundTrip) {
  TempDir dir;
  const auto file = dir.path() / "ct.bin";
  write_ciphertext_file(file, small_ciphertext());
  EXPECT_EQ(read_ciphertext_file(file), small_ciphertext());
  EXPECT_EQ(std::filesystem::file_size(file), kCiphertextHeaderSize + 32);
  EXPECT_EQ(error_of([&] { read_ciphertext_file(dir.path() / "missing"); }),
            Errc::kIoError);
  EXPECT_EQ(error_of([&] {
              write_ciphertext_file(dir.path() / "no" / "such" / "dir",
                                    small_ciphertext());
            }),
            Errc::kIoError);
}

TEST(KeyFileTest, FormatAndParse) {
  const KeyFile key{DHParams{7, 4}, 2};
  EXPECT_EQ(format_keyfile(key), "7\n4\n2\n");
  EXPECT_EQ(parse_keyfile("7\n4\n2\n"), key);
  EXPECT_EQ(parse_keyfile("2147483629\n2\n123456\n"),
            (KeyFile{DHParams{2147483629, 2}, 123456}));
}

TEST(KeyFileTest, RejectsMalformedText) {
  for (const char* text :
       {"7\n4\n2", "7\n4\n", "7\n4\n2\n9\n", " 7\n4\n2\n", "7\n+4\n2\n",
        "7\r\n4\r\n2\r\n", "", "7\n\n2\n", "0x7\n4\n2\n",
        "99999999999999999999999\n4\n2\n"}) {
    EXPECT_EQ(error_of([&] { parse_keyfile(text); }), Errc::kInvalidKeyFile)
        << text;
  }
}

TEST(KeyFileTest, ValidatesValues) {
  EXPECT_EQ(error_of([] { parse_keyfile("8\n3\n2\n"); }),
            Errc::kInvalidModulus);
  EXPECT_EQ(error_of([] { parse_keyfile("7\n1\n2\n"); }),
            Errc::kInvalidParameter);
  EXPECT_EQ(error_of([] { parse_keyfile("7\n4\n0\n"); }),
            Errc::kInvalidExponent);
  EXPECT_EQ(error_of([] { parse_keyfile("7\n4\n7\n"); }),
            Errc::kInvalidExponent);
}

TEST(KeyFileTest, FileRoundTrip) {
  TempDir dir;
  const KeyFile key{DHParams{65537, 3}, 4242};
  write_keyfile(dir.path() / "k", key);
  EXPECT_EQ(read_keyfile(dir.path() / "k"), key);
  EXPECT_EQ(error_of([&] { read_keyfile(dir.path() / "missing"); }),
            Errc::kIoError);
}

TEST(KeyFileTest, ParseU64) {
  EXPECT_EQ(parse_u64("0", "v"), 0u);
  EXPECT_EQ(parse_u64("18446744073709551615", "v"), UINT64_MAX);
  EXPECT_EQ(error_of([] { parse_u64("18446744073709551616", "v"); }),
            Errc::kInvalidParameter);
  EXPECT_EQ(error_of([] { parse_u64("-1", "v"); }), Errc::kInvalidParameter);
  EXPECT_EQ(error_of([] { parse_u64("1 ", "v"); }), Errc::kInvalidParameter);
  EXPECT_EQ(error_of([] { parse_u64("", "v"); }), Errc::kInvalidParameter);
}

}  // namespace
}  // namespace nilcrypt
