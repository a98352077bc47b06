#include "nilcrypt/error.hpp"

namespace nilcrypt {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kInvalidDimension: return "InvalidDimension";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kNonFiniteValue: return "NonFiniteValue";
    case Errc::kSingularMatrix: return "SingularMatrix";
    case Errc::kExpDidNotConverge: return "ExpDidNotConverge";
    case Errc::kNotNilpotent: return "NotNilpotent";
    case Errc::kNotSingleBlock: return "NotSingleBlock";
    case Errc::kInvalidModulus: return "InvalidModulus";
    case Errc::kInvalidExponent: return "InvalidExponent";
    case Errc::kInvalidPublicValue: return "InvalidPublicValue";
    case Errc::kDegenerateKey: return "DegenerateKey";
    case Errc::kInvalidParameter: return "InvalidParameter";
    case Errc::kInvalidEpsilon: return "InvalidEpsilon";
    case Errc::kInvalidBase: return "InvalidBase";
    case Errc::kUnencodableDigit: return "UnencodableDigit";
    case Errc::kBlockOverflow: return "BlockOverflow";
    case Errc::kCorruptCiphertext: return "CorruptCiphertext";
    case Errc::kDigitOutOfRange: return "DigitOutOfRange";
    case Errc::kParamMismatch: return "ParamMismatch";
    case Errc::kNoSolution: return "NoSolution";
    case Errc::kLeadingCoefficientZero: return "LeadingCoefficientZero";
    case Errc::kParameterTooLarge: return "ParameterTooLarge";
    case Errc::kOversizedFrame: return "OversizedFrame";
    case Errc::kTruncatedFrame: return "TruncatedFrame";
    case Errc::kUnknownKind: return "UnknownKind";
    case Errc::kHandshakeRejected: return "HandshakeRejected";
    case Errc::kConnectionError: return "ConnectionError";
    case Errc::kInvalidKeyFile: return "InvalidKeyFile";
    case Errc::kIoError: return "IoError";
  }
  return "Unknown";
}

ErrorCategory errc_category(Errc code) {
  switch (code) {
    case Errc::kCorruptCiphertext:
    case Errc::kDigitOutOfRange:
    case Errc::kOversizedFrame:
    case Errc::kTruncatedFrame:
    case Errc::kUnknownKind:
      return ErrorCategory::kIntegrity;
    case Errc::kIoError:
    case Errc::kConnectionError:
      return ErrorCategory::kIo;
    default:
      return ErrorCategory::kParameter;
  }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what),
      code_(code) {}

}  // namespace nilcrypt
