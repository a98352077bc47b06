#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nilcrypt {

enum class Errc {
  // matrixcore
  kInvalidDimension,
  kDimensionMismatch,
  kNonFiniteValue,
  kSingularMatrix,
  kExpDidNotConverge,
  kNotNilpotent,
  kNotSingleBlock,
  // modarith
  kInvalidModulus,
  kInvalidExponent,
  kInvalidPublicValue,
  kDegenerateKey,
  // parameters shared by the scheme
  kInvalidParameter,
  kInvalidEpsilon,
  kInvalidBase,
  // codec
  kUnencodableDigit,
  kBlockOverflow,
  kCorruptCiphertext,
  kDigitOutOfRange,
  kParamMismatch,
  // cryptanalysis
  kNoSolution,
  kLeadingCoefficientZero,
  kParameterTooLarge,
  // netpeer
  kOversizedFrame,
  kTruncatedFrame,
  kUnknownKind,
  kHandshakeRejected,
  kConnectionError,
  // files
  kInvalidKeyFile,
  kIoError,
};

/// Coarse grouping used to pick a process exit status.
enum class ErrorCategory { kParameter, kIo, kIntegrity };

std::string_view errc_name(Errc code);
ErrorCategory errc_category(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace nilcrypt
