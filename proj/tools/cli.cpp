#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "nilcrypt/ciphertext_file.hpp"
#include "nilcrypt/codec.hpp"
#include "nilcrypt/cryptanalysis.hpp"
#include "nilcrypt/error.hpp"
#include "nilcrypt/keyfile.hpp"
#include "nilcrypt/keyschedule.hpp"
#include "nilcrypt/modarith.hpp"
#include "nilcrypt/netpeer.hpp"

namespace nilcrypt::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemeOptions {
  std::uint32_t n = 0;
  std::uint64_t base = 256;
  double epsilon = 1.0;
  std::uint32_t offset = 1;

  SchemeParams to_params(const DHParams& dh) const {
    SchemeParams params{n, dh, base, epsilon, offset};
    params.validate();
    return params;
  }
};

struct PlaintextInput {
  std::string in_path;
  std::string decimal;
};

void add_scheme_options(CLI::App* cmd, SchemeOptions& o) {
  cmd->add_option("--n", o.n, "Block dimension (2..64)")->required();
  cmd->add_option("--base", o.base, "Message radix")->capture_default_str();
  cmd->add_option("--epsilon", o.epsilon, "Conjugator regularizer")
      ->capture_default_str();
  cmd->add_option("--offset", o.offset, "Digit shift before the logarithm")
      ->capture_default_str();
}

void add_plaintext_input(CLI::App* cmd, PlaintextInput& in) {
  auto* file = cmd->add_option("--in", in.in_path,
                               "Message bytes (base 256, byte i = digit i)");
  auto* integer = cmd->add_option("--int", in.decimal,
                                  "Message as an ASCII decimal integer");
  file->excludes(integer);
  integer->excludes(file);
}

DigitMessage load_plaintext(const PlaintextInput& in, std::uint64_t base) {
  if (!in.decimal.empty()) return digits_of_decimal(in.decimal, base);
  if (in.in_path.empty()) throw UsageError("one of --in or --int is required");
  if (base != 256) throw UsageError("--in requires --base 256");
  const auto bytes = read_binary_file(in.in_path);
  return DigitMessage{256, {bytes.begin(), bytes.end()}};
}

std::vector<std::uint8_t> digits_as_bytes(const DigitMessage& msg) {
  if (msg.base_a != 256) {
    throw UsageError("byte output requires a base-256 ciphertext");
  }
  return {msg.digits.begin(), msg.digits.end()};
}

std::vector<std::uint64_t> parse_digit_list(const std::string& text) {
  std::vector<std::uint64_t> digits;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      digits.push_back(parse_u64(item, "digit"));
    } catch (const Error&) {
      throw UsageError("digit list must be comma-separated integers: " + text);
    }
  }
  return digits;
}

std::string join_digits(const std::vector<std::uint64_t>& digits) {
  std::string s = "[";
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(digits[i]);
  }
  return s + "]";
}

void print_matrix(std::ostream& out, const Matrix& m, int precision) {
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(precision);
  for (std::size_t r = 0; r < m.dim(); ++r) {
    out << " ";
    for (std::size_t c = 0; c < m.dim(); ++c) {
      out << " " << std::setw(precision + 4) << m(r, c);
    }
    out << "\n";
  }
  out.flags(flags);
}

nlohmann::json report_json(const AttackReport& r) {
  nlohmann::json j;
  j["method"] = r.method;
  j["model"] = r.model;
  j["trials"] = r.trials;
  j["elapsed_seconds"] = r.elapsed_seconds;
  if (r.recovered_matrix) {
    const Matrix& m = *r.recovered_matrix;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t k = 0; k < m.dim(); ++k) row.push_back(m(i, k));
      rows.push_back(std::move(row));
    }
    j["recovered"] = std::move(rows);
  } else {
    j["recovered"] = r.recovered_keys;
  }
  if (r.decrypted) j["decrypted"] = r.decrypted->digits;
  // JSON has no infinity; an overflowed estimate is reported as null.
  if (std::isfinite(r.estimate)) {
    j["estimate"] = r.estimate;
  } else {
    j["estimate"] = nullptr;
  }
  return j;
}

void print_report(std::ostream& out, const AttackReport& r, bool json) {
  if (json) {
    out << report_json(r).dump() << "\n";
    return;
  }
  out << "method: " << r.method << "\n"
      << "model: " << r.model << "\n"
      << "trials: " << r.trials << "\n"
      << "elapsed_seconds: " << r.elapsed_seconds << "\n";
  if (r.recovered_matrix) {
    out << "recovered X:\n";
    print_matrix(out, *r.recovered_matrix, 9);
  } else {
    out << "recovered: " << join_digits(r.recovered_keys) << "\n";
  }
  if (r.decrypted) out << "decrypted: " << join_digits(r.decrypted->digits) << "\n";
  out << "estimate (claimed operations): " << r.estimate << "\n";
}

SharedMatrixKey key_for(const KeyFile& kf, std::uint64_t peer_public,
                        const SchemeParams& params) {
  return build_shared_key(dh_shared(kf.dh, kf.secret, peer_public), params);
}

void demo_worked_example(std::ostream& out) {
  const Matrix j = standard_jordan_block(3);
  out << "Standard nilpotent Jordan block X (n = 3):\n";
  print_matrix(out, j, 0);

  const DigitMessage m = digits_of(56, 4);
  out << "\nM = 56 = 2*4 + 3*4^2, digits in base 4: " << join_digits(m.digits)
      << "\n";
  const std::vector<std::uint64_t> carried(m.digits.begin() + 1,
                                           m.digits.end());
  const Matrix block = encode_block(carried, j, 0);
  out << "Encoding of digits " << join_digits(carried)
      << " as sum ln(a_i) X^i (offset 0, X = J):\n";
  print_matrix(out, block, 12);
  out << "  ln 2 = " << std::setprecision(15) << std::log(2.0)
      << ", ln 3 = " << std::log(3.0) << "\n";
  const auto decoded =
      decode_block(block, Matrix::identity(3), 0, 4, carried.size());
  out << "Decoded in the Jordan basis: " << join_digits(decoded) << "\n";

  const DHParams dh{7, 4};
  const std::uint64_t a = dh_public(dh, 2);
  const std::uint64_t b = dh_public(dh, 4);
  const std::uint64_t k_alice = dh_shared(dh, 2, b);
  const std::uint64_t k_bob = dh_shared(dh, 4, a);
  out << "\nDiffie-Hellman modulo p = 7 with base x = 4, secrets a = 2, b = 4:\n"
      << "  A = " << a << "  (4^2 mod 7)\n"
      << "  B = " << b << "  (4^4 mod 7)\n"
      << "  K = " << k_alice << "  (4^8 mod 7; Bob computes " << k_bob << ")\n";
}

int exit_code_for(const Error& e) {
  switch (errc_category(e.code())) {
    case ErrorCategory::kIo: return kExitIo;
    case ErrorCategory::kIntegrity: return kExitIntegrity;
    case ErrorCategory::kParameter: break;
  }
  return kExitParameter;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Nilpotent-matrix cryptosystem toolkit", "nilcrypt"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "Seed for every random draw");

  // keygen
  auto* keygen = app.add_subcommand("keygen", "Write a key file (p, x, secret)");
  std::uint64_t kg_p = 0, kg_x = 0;
  std::optional<std::uint64_t> kg_secret;
  std::string kg_out;
  keygen->add_option("--p", kg_p, "Prime modulus")->required();
  keygen->add_option("--x", kg_x, "Public base")->required();
  auto* secret_opt = keygen->add_option("--secret", kg_secret, "Secret exponent");
  keygen->add_option("--seed", seed, "Seed for the secret draw")
      ->excludes(secret_opt);
  keygen->add_option("--out", kg_out, "Key file path")->required();

  // pubkey
  auto* pubkey = app.add_subcommand("pubkey", "Print x^secret mod p");
  std::string pk_key;
  pubkey->add_option("--key", pk_key)->required();

  // encrypt
  auto* encrypt = app.add_subcommand("encrypt", "Encrypt a message");
  std::string enc_key, enc_out;
  std::uint64_t enc_peer = 0;
  SchemeOptions enc_scheme;
  PlaintextInput enc_in;
  encrypt->add_option("--key", enc_key)->required();
  encrypt->add_option("--peer", enc_peer, "Peer public value")->required();
  add_scheme_options(encrypt, enc_scheme);
  add_plaintext_input(encrypt, enc_in);
  encrypt->add_option("--out", enc_out, "Ciphertext path")->required();

  // decrypt
  auto* decrypt = app.add_subcommand("decrypt", "Decrypt a ciphertext file");
  std::string dec_key, dec_in, dec_out;
  std::uint64_t dec_peer = 0;
  bool dec_print_int = false;
  decrypt->add_option("--key", dec_key)->required();
  decrypt->add_option("--peer", dec_peer)->required();
  decrypt->add_option("--in", dec_in, "Ciphertext path")->required();
  auto* dec_out_opt = decrypt->add_option("--out", dec_out, "Plaintext bytes");
  auto* dec_int_opt =
      decrypt->add_flag("--print-int", dec_print_int, "Print as decimal");
  dec_out_opt->excludes(dec_int_opt);

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Claimed work estimate");
  std::uint32_t est_n = 0;
  double est_eps = 1.0;
  std::uint64_t est_base = 256;
  estimate->add_option("--n", est_n)->required();
  estimate->add_option("--epsilon", est_eps)->required();
  estimate->add_option("--base", est_base)->required();

  // attack-kpa
  auto* kpa = app.add_subcommand("attack-kpa", "Known-plaintext attack");
  std::string kpa_cipher, kpa_plain;
  bool kpa_json = false;
  kpa->add_option("--cipher", kpa_cipher)->required();
  kpa->add_option("--plain", kpa_plain,
                  "Comma-separated known digits of the first block")
      ->required();
  kpa->add_flag("--json", kpa_json);

  // attack-brute
  auto* brute = app.add_subcommand("attack-brute", "Enumerate the shared K");
  std::string bf_cipher, bf_crib;
  std::uint64_t bf_x = 0;
  unsigned bf_threads = 1;
  bool bf_json = false;
  brute->add_option("--cipher", bf_cipher)->required();
  brute->add_option("--x", bf_x, "Public base")->required();
  brute->add_option("--crib", bf_crib, "Comma-separated known leading digits");
  brute->add_option("--threads", bf_threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  brute->add_flag("--json", bf_json);

  auto* demo = app.add_subcommand("demo-paper",
                                  "Reproduce the worked encoding and exchange");

  // peer-listen / peer-connect
  auto* listen = app.add_subcommand("peer-listen", "Receive one message");
  auto* connect = app.add_subcommand("peer-connect", "Send one message");
  std::string peer_host, peer_key, peer_out;
  std::uint16_t peer_port = kDefaultPort;
  SchemeOptions peer_scheme;
  PlaintextInput peer_in;
  bool peer_print_int = false;
  unsigned peer_sessions = 1;
  for (auto* cmd : {listen, connect}) {
    cmd->add_option("--port", peer_port)->capture_default_str();
    cmd->add_option("--key", peer_key)->required();
    add_scheme_options(cmd, peer_scheme);
  }
  listen->add_option("--host", peer_host, "Bind address (default: any)");
  auto* lo = listen->add_option("--out", peer_out, "Write plaintext bytes");
  listen->add_flag("--print-int", peer_print_int)->excludes(lo);
  listen->add_option("--sessions", peer_sessions,
                     "Connections to serve concurrently")
      ->capture_default_str();
  connect->add_option("--host", peer_host)->required();
  add_plaintext_input(connect, peer_in);

  std::vector<const char*> argv{"nilcrypt"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::mt19937_64 rng(seed ? *seed : std::random_device{}());

  try {
    if (*keygen) {
      KeyFile kf{DHParams{kg_p, kg_x}, 0};
      kf.dh.validate();
      if (kg_secret) {
        kf.secret = *kg_secret;
      } else {
        kf.secret =
            std::uniform_int_distribution<std::uint64_t>(1, kg_p - 1)(rng);
      }
      dh_public(kf.dh, kf.secret);  // validates the secret range
      write_keyfile(kg_out, kf);
    } else if (*pubkey) {
      const KeyFile kf = read_keyfile(pk_key);
      out << dh_public(kf.dh, kf.secret) << "\n";
    } else if (*encrypt) {
      const KeyFile kf = read_keyfile(enc_key);
      const SchemeParams params = enc_scheme.to_params(kf.dh);
      const DigitMessage msg = load_plaintext(enc_in, params.base_a);
      write_ciphertext_file(
          enc_out, encrypt_message(msg, key_for(kf, enc_peer, params)));
    } else if (*decrypt) {
      if (!dec_print_int && dec_out.empty()) {
        throw UsageError("one of --out or --print-int is required");
      }
      const KeyFile kf = read_keyfile(dec_key);
      const Ciphertext ct = read_ciphertext_file(dec_in);
      if (ct.params.p != kf.dh.p) {
        throw Error(Errc::kParamMismatch,
                    "ciphertext modulus differs from the key file");
      }
      const SchemeParams params{ct.params.n, kf.dh, ct.params.base_a,
                                ct.params.epsilon, ct.params.offset};
      params.validate();
      const DigitMessage msg =
          decrypt_message(ct, key_for(kf, dec_peer, params));
      if (dec_print_int) {
        out << to_decimal(msg) << "\n";
      } else {
        write_binary_file(dec_out, digits_as_bytes(msg));
      }
    } else if (*estimate) {
      out << std::setprecision(17) << work_estimate(est_n, est_eps, est_base)
          << "\n";
    } else if (*kpa) {
      const Ciphertext ct = read_ciphertext_file(kpa_cipher);
      print_report(out, known_plaintext_attack(ct, parse_digit_list(kpa_plain)),
                   kpa_json);
    } else if (*brute) {
      const Ciphertext ct = read_ciphertext_file(bf_cipher);
      const SchemeParams params{ct.params.n, DHParams{ct.params.p, bf_x},
                                ct.params.base_a, ct.params.epsilon,
                                ct.params.offset};
      std::optional<std::vector<std::uint64_t>> crib;
      if (!bf_crib.empty()) crib = parse_digit_list(bf_crib);
      std::optional<std::span<const std::uint64_t>> crib_view;
      if (crib) crib_view = std::span<const std::uint64_t>(*crib);
      print_report(out, brute_force_K(ct, params, crib_view, bf_threads),
                   bf_json);
    } else if (*demo) {
      demo_worked_example(out);
    } else if (*connect) {
      const KeyFile kf = read_keyfile(peer_key);
      const SchemeParams params = peer_scheme.to_params(kf.dh);
      const DigitMessage msg = load_plaintext(peer_in, params.base_a);
      SocketStream stream = SocketStream::connect(peer_host, peer_port);
      const SharedMatrixKey key =
          run_handshake(Role::kInitiator, stream, params, kf.secret);
      send_ciphertext(stream, encrypt_message(msg, key));
    } else if (*listen) {
      const KeyFile kf = read_keyfile(peer_key);
      const SchemeParams params = peer_scheme.to_params(kf.dh);
      if (peer_sessions == 0) throw UsageError("--sessions must be >= 1");
      if (!peer_out.empty() && peer_sessions > 1) {
        throw UsageError("--out serves a single session");
      }
      TcpListener listener(peer_host, peer_port);
      std::mutex out_mutex;
      int status = kExitOk;
      auto session = [&](SocketStream stream) {
        try {
          const SharedMatrixKey key =
              run_handshake(Role::kResponder, stream, params, kf.secret);
          const DigitMessage msg = decrypt_message(recv_ciphertext(stream), key);
          std::lock_guard lock(out_mutex);
          if (!peer_out.empty()) {
            write_binary_file(peer_out, digits_as_bytes(msg));
          } else if (peer_print_int || params.base_a != 256) {
            out << to_decimal(msg) << "\n";
          } else {
            const auto bytes = digits_as_bytes(msg);
            out.write(reinterpret_cast<const char*>(bytes.data()),
                      static_cast<std::streamsize>(bytes.size()));
          }
        } catch (const Error& e) {
          std::lock_guard lock(out_mutex);
          err << "error: " << e.what() << "\n";
          if (status == kExitOk) status = exit_code_for(e);
        }
      };
      {
        std::vector<std::jthread> workers;
        for (unsigned s = 0; s < peer_sessions; ++s) {
          workers.emplace_back(session, listener.accept());
        }
      }
      return status;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitParameter;
  }
  return kExitOk;
}

}  // namespace nilcrypt::cli
