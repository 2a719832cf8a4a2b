#include "coldwallet/error.hpp"

namespace coldwallet {

ErrorClass ClassOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kConfig:
    case ErrorCode::kSchemeMismatch:
    case ErrorCode::kRoleMismatch:
    case ErrorCode::kShareExists:
    case ErrorCode::kMissingCombinedKey:
    case ErrorCode::kMissingPaillierKey:
    case ErrorCode::kModulusTooSmall:
    case ErrorCode::kInvalidState:
      return ErrorClass::kConfig;
    case ErrorCode::kVerificationFailed:
    case ErrorCode::kDegenerateSignature:
    case ErrorCode::kInconsistentShare:
    case ErrorCode::kRngFailure:
      return ErrorClass::kCrypto;
    case ErrorCode::kIo:
    case ErrorCode::kNotFound:
      return ErrorClass::kIo;
    default:
      return ErrorClass::kIntegrity;
  }
}

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kSchemeMismatch: return "scheme-mismatch";
    case ErrorCode::kRoleMismatch: return "role-mismatch";
    case ErrorCode::kShareExists: return "share-exists";
    case ErrorCode::kMissingCombinedKey: return "missing-combined-key";
    case ErrorCode::kMissingPaillierKey: return "missing-paillier-key";
    case ErrorCode::kModulusTooSmall: return "modulus-too-small";
    case ErrorCode::kInvalidState: return "invalid-state";
    case ErrorCode::kHashMismatch: return "hash-mismatch";
    case ErrorCode::kPolicyViolation: return "policy-violation";
    case ErrorCode::kBadMagic: return "bad-magic";
    case ErrorCode::kBadChecksum: return "bad-checksum";
    case ErrorCode::kVersionMismatch: return "version-mismatch";
    case ErrorCode::kUnknownTag: return "unknown-tag";
    case ErrorCode::kDuplicateTag: return "duplicate-tag";
    case ErrorCode::kMissingField: return "missing-field";
    case ErrorCode::kMalformedField: return "malformed-field";
    case ErrorCode::kOversizeField: return "oversize-field";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kTrailingBytes: return "trailing-bytes";
    case ErrorCode::kUnknownMessageType: return "unknown-message-type";
    case ErrorCode::kInvalidPoint: return "invalid-point";
    case ErrorCode::kInvalidScalar: return "invalid-scalar";
    case ErrorCode::kMalformedCiphertext: return "malformed-ciphertext";
    case ErrorCode::kNonceReuse: return "nonce-reuse";
    case ErrorCode::kAuthenticationFailed: return "authentication-failed";
    case ErrorCode::kBadHeader: return "bad-header";
    case ErrorCode::kVerificationFailed: return "verification-failed";
    case ErrorCode::kDegenerateSignature: return "degenerate-signature";
    case ErrorCode::kInconsistentShare: return "inconsistent-share";
    case ErrorCode::kRngFailure: return "rng-failure";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kNotFound: return "not-found";
  }
  return "unknown";
}

int ExitCodeFor(ErrorClass error_class) {
  switch (error_class) {
    case ErrorClass::kConfig: return 2;
    case ErrorClass::kIntegrity: return 3;
    case ErrorClass::kCrypto: return 4;
    case ErrorClass::kIo: return 5;
  }
  return 1;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message), code_(code) {}

}  // namespace coldwallet
