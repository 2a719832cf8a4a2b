#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "coldwallet/bytes.hpp"
#include "coldwallet/sign.hpp"
#include "coldwallet/signature.hpp"

namespace coldwallet {

// Wire layout (all integers big-endian):
//
//   magic "CWv1" (4) | protocol_version (1) | scheme (1) | msg_type (1)
//   | session_id (16) | field_count (1)
//   | field_count * [tag (1) | length (4) | value (length)]
//   | checksum (4) = SHA-256(all preceding bytes)[0..4)

inline constexpr std::array<uint8_t, 4> kEnvelopeMagic = {'C', 'W', 'v', '1'};
inline constexpr uint8_t kEnvelopeVersion = 1;
inline constexpr size_t kEnvelopeHeaderBytes = 7;
inline constexpr size_t kEnvelopeFixedBytes = kEnvelopeHeaderBytes + 16 + 1 + 4;
inline constexpr size_t kFieldHeaderBytes = 5;
inline constexpr size_t kMaxFieldBytes = size_t{1} << 20;

enum class MsgType : uint8_t {
  kKeygenPub = 1,
  kSignMsg1 = 2,
  kSignMsg2 = 3,
};

std::string_view MsgTypeName(MsgType type);

enum class FieldTag : uint8_t {
  kPublicShare = 0x01,       // P_i
  kRole = 0x02,              // sender role, keygen metadata
  kRawTx = 0x10,             // canonical transaction bytes
  kTxHash = 0x11,            // m
  kPaillierModulus = 0x12,   // pk (n; g = n + 1 is implied)
  kEncryptedKey = 0x13,      // C_key
  kNoncePoint1 = 0x14,       // R1
  kCiphertext3 = 0x20,       // C3
  kNoncePoint2 = 0x21,       // R2
  kPartialSignature = 0x22,  // s2
};

std::string_view FieldTagName(FieldTag tag);

struct EnvelopeField {
  uint8_t tag;
  Bytes value;
};

struct Envelope {
  Scheme scheme;
  MsgType type;
  SessionId session_id;
  std::vector<EnvelopeField> fields;

  // Value of the first field carrying `tag`, or nullptr.
  const Bytes* Find(FieldTag tag) const;
};

// The exact field set each (scheme, msg_type) may carry. Anything else is a
// schema violation; no secret-bearing field exists in any set.
std::span<const FieldTag> AllowedFields(Scheme scheme, MsgType type);

// Unknown tag -> kUnknownTag, repeated tag -> kDuplicateTag, absent tag ->
// kMissingField.
void ValidateSchema(const Envelope& envelope);

// Serialises without a schema check (so tests can build hostile envelopes);
// only the per-field size cap is enforced (kOversizeField).
Bytes EncodeEnvelope(const Envelope& envelope);

// Total: every input yields an Envelope or a typed Error, never a crash, and
// no allocation beyond the input size. Error precedence:
//   - a declared structure running past the end of input -> kTruncated
//   - checksum mismatch -> kBadChecksum (trailing garbage after a valid
//     envelope -> kTrailingBytes)
//   - then magic, version, scheme, msg_type, schema, each with its own code.
// A corrupted length or count byte that makes the structure overrun is
// reported as kTruncated; it is indistinguishable from a cut-off file.
Envelope DecodeEnvelope(ByteView bytes);

}  // namespace coldwallet
