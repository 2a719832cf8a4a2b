#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coldwallet {

// Coarse grouping used for process exit codes: config=2, integrity/policy=3,
// crypto-verify=4, I/O=5.
enum class ErrorClass {
  kConfig,
  kIntegrity,
  kCrypto,
  kIo,
};

enum class ErrorCode {
  // configuration / caller misuse
  kInvalidArgument,
  kConfig,
  kSchemeMismatch,
  kRoleMismatch,
  kShareExists,
  kMissingCombinedKey,
  kMissingPaillierKey,
  kModulusTooSmall,
  kInvalidState,

  // integrity and policy gates
  kHashMismatch,
  kPolicyViolation,
  kBadMagic,
  kBadChecksum,
  kVersionMismatch,
  kUnknownTag,
  kDuplicateTag,
  kMissingField,
  kMalformedField,
  kOversizeField,
  kTruncated,
  kTrailingBytes,
  kUnknownMessageType,
  kInvalidPoint,
  kInvalidScalar,
  kMalformedCiphertext,
  kNonceReuse,
  kAuthenticationFailed,
  kBadHeader,

  // cryptographic outcome
  kVerificationFailed,
  kDegenerateSignature,
  kInconsistentShare,
  kRngFailure,

  // filesystem
  kIo,
  kNotFound,
};

ErrorClass ClassOf(ErrorCode code);
std::string_view ErrorCodeName(ErrorCode code);
int ExitCodeFor(ErrorClass error_class);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }
  ErrorClass error_class() const { return ClassOf(code_); }

 private:
  ErrorCode code_;
};

}  // namespace coldwallet
