#include "nilcrypt/netpeer.hpp"

#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <bit>
#include <cerrno>
#include <cstring>
#include <utility>

#include <boost/endian/conversion.hpp>

#include "nilcrypt/ciphertext_file.hpp"
#include "nilcrypt/error.hpp"
#include "nilcrypt/modarith.hpp"

namespace nilcrypt {
namespace {

constexpr std::uint8_t kHelloVersion = 1;
constexpr std::size_t kHelloSize = 1 + 4 + 8 + 8 + 8 + 4 + 8;

bool is_known_kind(std::uint8_t kind) {
  switch (static_cast<FrameKind>(kind)) {
    case FrameKind::kHello:
    case FrameKind::kPubkey:
    case FrameKind::kCiphertext:
    case FrameKind::kError:
      return true;
  }
  return false;
}

template <typename T>
void put_be(std::vector<std::uint8_t>& out, T value) {
  boost::endian::native_to_big_inplace(value);
  const auto* raw = reinterpret_cast<const std::uint8_t*>(&value);
  out.insert(out.end(), raw, raw + sizeof(T));
}

std::uint64_t get_be64(std::span<const std::uint8_t> bytes) {
  std::uint64_t value;
  std::memcpy(&value, bytes.data(), sizeof(value));
  return boost::endian::big_to_native(value);
}

std::uint32_t get_be32(std::span<const std::uint8_t> bytes) {
  std::uint32_t value;
  std::memcpy(&value, bytes.data(), sizeof(value));
  return boost::endian::big_to_native(value);
}

void check_header(std::uint8_t kind, std::uint32_t length) {
  if (length > kMaxFramePayload) {
    throw Error(Errc::kOversizedFrame,
                "frame length " + std::to_string(length) + " exceeds 2^24");
  }
  if (!is_known_kind(kind)) {
    throw Error(Errc::kUnknownKind, "frame kind " + std::to_string(kind));
  }
}

std::string errno_text(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

std::vector<std::uint8_t> encode_public(std::uint64_t value) {
  std::vector<std::uint8_t> out;
  put_be<std::uint64_t>(out, value);
  return out;
}

// Frame-level protocol violations abort the session before propagating.
Frame expect_frame(ByteStream& stream, FrameKind want, const char* stage) {
  Frame f;
  try {
    f = recv_frame(stream);
  } catch (const Error& e) {
    if (errc_category(e.code()) == ErrorCategory::kIntegrity) {
      abort_session(stream, e.what());
    }
    throw;
  }
  if (f.kind == FrameKind::kError) {
    stream.close();
    throw Error(Errc::kHandshakeRejected,
                std::string("peer sent ERROR during ") + stage + ": " +
                    std::string(f.payload.begin(), f.payload.end()));
  }
  if (f.kind != want) {
    const std::string reason = std::string("unexpected frame during ") + stage;
    abort_session(stream, reason);
    throw Error(Errc::kHandshakeRejected, reason);
  }
  return f;
}

std::uint64_t expect_public(ByteStream& stream, const SchemeParams& params) {
  const Frame f = expect_frame(stream, FrameKind::kPubkey, "key exchange");
  if (f.payload.size() != 8) {
    const std::string reason = "PUBKEY payload must be 8 bytes";
    abort_session(stream, reason);
    throw Error(Errc::kHandshakeRejected, reason);
  }
  const std::uint64_t value = get_be64(f.payload);
  if (value < 1 || value >= params.dh.p) {
    const std::string reason = "public value outside [1, p-1]";
    abort_session(stream, reason);
    throw Error(Errc::kInvalidPublicValue, reason);
  }
  return value;
}

SharedMatrixKey finish(ByteStream& stream, const SchemeParams& params,
                       std::uint64_t secret, std::uint64_t other_public) {
  try {
    return build_shared_key(dh_shared(params.dh, secret, other_public), params);
  } catch (const Error& e) {
    abort_session(stream, e.what());
    throw;
  }
}

}  // namespace

std::vector<std::uint8_t> frame_encode(const Frame& frame) {
  if (frame.payload.size() > kMaxFramePayload) {
    throw Error(Errc::kOversizedFrame,
                "payload of " + std::to_string(frame.payload.size()) +
                    " bytes exceeds 2^24");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeaderSize + frame.payload.size());
  out.push_back(static_cast<std::uint8_t>(frame.kind));
  put_be<std::uint32_t>(out, static_cast<std::uint32_t>(frame.payload.size()));
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

Frame frame_decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderSize) {
    throw Error(Errc::kTruncatedFrame, "frame header incomplete");
  }
  const std::uint32_t length = get_be32(bytes.subspan(1, 4));
  check_header(bytes[0], length);
  if (bytes.size() - kFrameHeaderSize != length) {
    throw Error(Errc::kTruncatedFrame,
                "frame declares " + std::to_string(length) + " bytes, has " +
                    std::to_string(bytes.size() - kFrameHeaderSize));
  }
  const auto body = bytes.subspan(kFrameHeaderSize);
  return Frame{static_cast<FrameKind>(bytes[0]), {body.begin(), body.end()}};
}

SocketStream::~SocketStream() { close(); }

SocketStream::SocketStream(SocketStream&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)) {}

SocketStream& SocketStream::operator=(SocketStream&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

void SocketStream::write_all(std::span<const std::uint8_t> bytes) {
  if (fd_ < 0) throw Error(Errc::kConnectionError, "stream is closed");
  while (!bytes.empty()) {
    const ssize_t sent = ::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (sent < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::kConnectionError, errno_text("send"));
    }
    bytes = bytes.subspan(static_cast<std::size_t>(sent));
  }
}

void SocketStream::read_exact(std::span<std::uint8_t> out) {
  if (fd_ < 0) throw Error(Errc::kConnectionError, "stream is closed");
  while (!out.empty()) {
    const ssize_t got = ::recv(fd_, out.data(), out.size(), 0);
    if (got < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::kConnectionError, errno_text("recv"));
    }
    if (got == 0) {
      throw Error(Errc::kConnectionError, "peer closed the connection");
    }
    out = out.subspan(static_cast<std::size_t>(got));
  }
}

void SocketStream::close() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
    fd_ = -1;
  }
}

std::pair<SocketStream, SocketStream> SocketStream::pair() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) {
    throw Error(Errc::kConnectionError, errno_text("socketpair"));
  }
  return {SocketStream(fds[0]), SocketStream(fds[1])};
}

SocketStream SocketStream::connect(const std::string& host,
                                   std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* results = nullptr;
  const std::string service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints,
                                   &results);
      rc != 0) {
    throw Error(Errc::kConnectionError,
                "cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  std::string last_error = "no addresses for " + host;
  for (addrinfo* ai = results; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      last_error = errno_text("socket");
      continue;
    }
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      ::freeaddrinfo(results);
      return SocketStream(fd);
    }
    last_error = errno_text("connect");
    ::close(fd);
  }
  ::freeaddrinfo(results);
  throw Error(Errc::kConnectionError, last_error);
}

TcpListener::TcpListener(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* results = nullptr;
  const std::string service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(),
                                   service.c_str(), &hints, &results);
      rc != 0) {
    throw Error(Errc::kConnectionError,
                "cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  std::string last_error = "no addresses to bind";
  for (addrinfo* ai = results; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      last_error = errno_text("socket");
      continue;
    }
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
      fd_ = fd;
      break;
    }
    last_error = errno_text("bind");
    ::close(fd);
  }
  ::freeaddrinfo(results);
  if (fd_ < 0) throw Error(Errc::kConnectionError, last_error);

  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  if (addr.ss_family == AF_INET6) {
    port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
  } else {
    port_ = ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
  }
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

SocketStream TcpListener::accept() {
  for (;;) {
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) return SocketStream(fd);
    if (errno != EINTR) throw Error(Errc::kConnectionError, errno_text("accept"));
  }
}

void send_frame(ByteStream& stream, const Frame& frame) {
  stream.write_all(frame_encode(frame));
}

Frame recv_frame(ByteStream& stream) {
  std::uint8_t header[kFrameHeaderSize];
  stream.read_exact(header);
  const std::uint32_t length = get_be32(std::span(header).subspan(1, 4));
  check_header(header[0], length);
  Frame frame{static_cast<FrameKind>(header[0]),
              std::vector<std::uint8_t>(length)};
  stream.read_exact(frame.payload);
  return frame;
}

std::vector<std::uint8_t> encode_hello(const SchemeParams& params) {
  std::vector<std::uint8_t> out;
  out.reserve(kHelloSize);
  out.push_back(kHelloVersion);
  put_be<std::uint32_t>(out, params.n);
  put_be<std::uint64_t>(out, params.dh.p);
  put_be<std::uint64_t>(out, params.dh.x);
  put_be<std::uint64_t>(out, params.base_a);
  put_be<std::uint32_t>(out, params.offset);
  put_be<std::uint64_t>(out, std::bit_cast<std::uint64_t>(params.epsilon));
  return out;
}

void abort_session(ByteStream& stream, const std::string& reason) {
  try {
    send_frame(stream, Frame{FrameKind::kError,
                             {reason.begin(), reason.end()}});
  } catch (const Error&) {
    // Peer may already be gone.
  }
  stream.close();
}

SharedMatrixKey run_handshake(Role role, ByteStream& stream,
                              const SchemeParams& params,
                              std::uint64_t secret) {
  params.validate();
  const std::vector<std::uint8_t> hello = encode_hello(params);
  const std::uint64_t own_public = dh_public(params.dh, secret);

  if (role == Role::kInitiator) {
    send_frame(stream, Frame{FrameKind::kHello, hello});
    const Frame echo = expect_frame(stream, FrameKind::kHello, "hello");
    if (echo.payload != hello) {
      const std::string reason = "HELLO echo differs from local parameters";
      abort_session(stream, reason);
      throw Error(Errc::kHandshakeRejected, reason);
    }
    send_frame(stream, Frame{FrameKind::kPubkey, encode_public(own_public)});
    const std::uint64_t other = expect_public(stream, params);
    return finish(stream, params, secret, other);
  }

  const Frame offer = expect_frame(stream, FrameKind::kHello, "hello");
  if (offer.payload != hello) {
    const std::string reason = "scheme parameters disagree";
    abort_session(stream, reason);
    throw Error(Errc::kHandshakeRejected, reason);
  }
  send_frame(stream, Frame{FrameKind::kHello, hello});
  const std::uint64_t other = expect_public(stream, params);
  send_frame(stream, Frame{FrameKind::kPubkey, encode_public(own_public)});
  return finish(stream, params, secret, other);
}

void send_ciphertext(ByteStream& stream, const Ciphertext& ct) {
  send_frame(stream, Frame{FrameKind::kCiphertext, serialize_ciphertext(ct)});
}

Ciphertext recv_ciphertext(ByteStream& stream) {
  Frame f;
  try {
    f = recv_frame(stream);
  } catch (const Error& e) {
    if (errc_category(e.code()) == ErrorCategory::kIntegrity) {
      abort_session(stream, e.what());
    }
    throw;
  }
  if (f.kind == FrameKind::kError) {
    stream.close();
    throw Error(Errc::kConnectionError,
                "peer sent ERROR: " +
                    std::string(f.payload.begin(), f.payload.end()));
  }
  if (f.kind != FrameKind::kCiphertext) {
    abort_session(stream, "expected CIPHERTEXT frame");
    throw Error(Errc::kCorruptCiphertext, "expected CIPHERTEXT frame");
  }
  try {
    return parse_ciphertext(f.payload);
  } catch (const Error& e) {
    abort_session(stream, e.what());
    throw;
  }
}

}  // namespace nilcrypt
