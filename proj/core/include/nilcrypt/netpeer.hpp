#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nilcrypt/codec.hpp"
#include "nilcrypt/keyschedule.hpp"

namespace nilcrypt {

enum class FrameKind : std::uint8_t {
  kHello = 0x01,
  kPubkey = 0x02,
  kCiphertext = 0x03,
  kError = 0x7F,
};

/// Wire frame: kind (1 byte) | length (u32 big-endian) | payload.
struct Frame {
  FrameKind kind = FrameKind::kError;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const Frame&, const Frame&) = default;
};

inline constexpr std::size_t kFrameHeaderSize = 5;
inline constexpr std::uint32_t kMaxFramePayload = std::uint32_t{1} << 24;
inline constexpr std::uint16_t kDefaultPort = 4377;

std::vector<std::uint8_t> frame_encode(const Frame& frame);
/// Decodes exactly one frame occupying all of `bytes`. Throws OversizedFrame,
/// TruncatedFrame (short input or trailing bytes) or UnknownKind.
Frame frame_decode(std::span<const std::uint8_t> bytes);

/// Reliable ordered byte stream.
class ByteStream {
 public:
  virtual ~ByteStream() = default;
  /// Both throw ConnectionError on failure or premature end of stream.
  virtual void write_all(std::span<const std::uint8_t> bytes) = 0;
  virtual void read_exact(std::span<std::uint8_t> out) = 0;
  virtual void close() = 0;
};

/// Owns a connected socket descriptor.
class SocketStream final : public ByteStream {
 public:
  explicit SocketStream(int fd) noexcept : fd_(fd) {}
  ~SocketStream() override;
  SocketStream(const SocketStream&) = delete;
  SocketStream& operator=(const SocketStream&) = delete;
  SocketStream(SocketStream&& other) noexcept;
  SocketStream& operator=(SocketStream&& other) noexcept;

  void write_all(std::span<const std::uint8_t> bytes) override;
  void read_exact(std::span<std::uint8_t> out) override;
  void close() override;

  /// A connected AF_UNIX pair, for in-process sessions and tests.
  static std::pair<SocketStream, SocketStream> pair();
  /// TCP connect over IPv4 or IPv6.
  static SocketStream connect(const std::string& host, std::uint16_t port);

 private:
  int fd_ = -1;
};

/// Listening TCP socket.
class TcpListener {
 public:
  /// Port 0 binds an ephemeral port; see port().
  TcpListener(const std::string& host, std::uint16_t port);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  SocketStream accept();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

void send_frame(ByteStream& stream, const Frame& frame);
Frame recv_frame(ByteStream& stream);

/// HELLO payload: version u8 = 1 | n u32 | p u64 | x u64 | base_a u64 |
/// offset u32 | epsilon f64 bits, all big-endian.
std::vector<std::uint8_t> encode_hello(const SchemeParams& params);

enum class Role { kInitiator, kResponder };

/// Runs HELLO echo then PUBKEY exchange and builds the shared key.
///
/// Parameter disagreement yields HandshakeRejected on both sides: the side
/// that detects it sends one ERROR frame and closes. A degenerate shared
/// secret surfaces as DegenerateKey on both sides.
SharedMatrixKey run_handshake(Role role, ByteStream& stream,
                              const SchemeParams& params, std::uint64_t secret);

void send_ciphertext(ByteStream& stream, const Ciphertext& ct);
Ciphertext recv_ciphertext(ByteStream& stream);

/// Sends an ERROR frame carrying `reason` (best effort) and closes.
void abort_session(ByteStream& stream, const std::string& reason);

}  // namespace nilcrypt
