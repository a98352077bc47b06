#include "nilcrypt/ciphertext_file.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>

#include <boost/endian/conversion.hpp>

#include "nilcrypt/error.hpp"

namespace nilcrypt {
namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'N', 'I', 'L', 'M'};

class LittleEndianWriter {
 public:
  explicit LittleEndianWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  template <typename T>
  void put(T value) {
    boost::endian::native_to_little_inplace(value);
    const auto* raw = reinterpret_cast<const std::uint8_t*>(&value);
    out_.insert(out_.end(), raw, raw + sizeof(T));
  }
  void put_f64(double value) { put(std::bit_cast<std::uint64_t>(value)); }

 private:
  std::vector<std::uint8_t>& out_;
};

class LittleEndianReader {
 public:
  explicit LittleEndianReader(std::span<const std::uint8_t> in) : in_(in) {}

  template <typename T>
  T get() {
    if (in_.size() - pos_ < sizeof(T)) {
      throw Error(Errc::kCorruptCiphertext, "ciphertext truncated");
    }
    T value;
    std::copy_n(in_.data() + pos_, sizeof(T),
                reinterpret_cast<std::uint8_t*>(&value));
    pos_ += sizeof(T);
    return boost::endian::little_to_native(value);
  }
  double get_f64() { return std::bit_cast<double>(get<std::uint64_t>()); }

  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_ciphertext(const Ciphertext& ct) {
  const std::size_t n = ct.params.n;
  std::vector<std::uint8_t> out;
  out.reserve(kCiphertextHeaderSize + ct.blocks.size() * n * n * 8);
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  out.push_back(kCiphertextVersion);
  LittleEndianWriter w(out);
  w.put<std::uint32_t>(ct.params.n);
  w.put<std::uint64_t>(ct.params.p);
  w.put<std::uint64_t>(ct.params.base_a);
  w.put<std::uint32_t>(ct.params.offset);
  w.put_f64(ct.params.epsilon);
  w.put<std::uint64_t>(ct.digit_count);
  w.put<std::uint64_t>(ct.blocks.size());
  for (const Matrix& block : ct.blocks) {
    if (block.dim() != n) {
      throw Error(Errc::kCorruptCiphertext, "block dimension differs from n");
    }
    for (double v : block.entries()) w.put_f64(v);
  }
  return out;
}

Ciphertext parse_ciphertext(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kCiphertextHeaderSize) {
    throw Error(Errc::kCorruptCiphertext, "ciphertext shorter than header");
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw Error(Errc::kCorruptCiphertext, "bad magic");
  }
  if (bytes[4] != kCiphertextVersion) {
    throw Error(Errc::kCorruptCiphertext,
                "unsupported version " + std::to_string(bytes[4]));
  }
  LittleEndianReader r(bytes.subspan(5));
  Ciphertext ct;
  ct.params.n = r.get<std::uint32_t>();
  ct.params.p = r.get<std::uint64_t>();
  ct.params.base_a = r.get<std::uint64_t>();
  ct.params.offset = r.get<std::uint32_t>();
  ct.params.epsilon = r.get_f64();
  ct.digit_count = r.get<std::uint64_t>();
  const std::uint64_t block_count = r.get<std::uint64_t>();

  const std::uint64_t n = ct.params.n;
  if (n < 2 || n > kMaxBlockDim) {
    throw Error(Errc::kCorruptCiphertext,
                "block dimension " + std::to_string(n) + " out of range");
  }
  if (block_count != expected_block_count(ct.digit_count, ct.params.n)) {
    throw Error(Errc::kCorruptCiphertext,
                "block count inconsistent with digit count");
  }
  const std::uint64_t block_bytes = n * n * 8;
  if (block_count > r.remaining() / block_bytes ||
      r.remaining() != block_count * block_bytes) {
    throw Error(Errc::kCorruptCiphertext,
                "body size does not match the header");
  }
  ct.blocks.reserve(block_count);
  for (std::uint64_t b = 0; b < block_count; ++b) {
    std::vector<double> entries(n * n);
    for (double& v : entries) {
      v = r.get_f64();
      if (!std::isfinite(v)) {
        throw Error(Errc::kCorruptCiphertext, "non-finite block entry");
      }
    }
    ct.blocks.emplace_back(n, std::move(entries));
  }
  return ct;
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::kIoError, "cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::kIoError, "read failed: " + path.string());
  return bytes;
}

void write_binary_file(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::kIoError, "cannot create " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::kIoError, "write failed: " + path.string());
}

void write_ciphertext_file(const std::filesystem::path& path,
                           const Ciphertext& ct) {
  write_binary_file(path, serialize_ciphertext(ct));
}

Ciphertext read_ciphertext_file(const std::filesystem::path& path) {
  return parse_ciphertext(read_binary_file(path));
}

}  // namespace nilcrypt
