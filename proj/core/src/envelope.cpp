#include "coldwallet/envelope.hpp"

#include <algorithm>
#include <bitset>
#include <cstring>
#include <string>

#include "coldwallet/error.hpp"
#include "coldwallet/hash.hpp"

namespace coldwallet {
namespace {

constexpr size_t kChecksumBytes = 4;

constexpr FieldTag kKeygenFields[] = {FieldTag::kPublicShare, FieldTag::kRole};
constexpr FieldTag kEcdsaMsg1Fields[] = {FieldTag::kRawTx, FieldTag::kTxHash,
                                         FieldTag::kPaillierModulus, FieldTag::kEncryptedKey,
                                         FieldTag::kNoncePoint1};
constexpr FieldTag kEcdsaMsg2Fields[] = {FieldTag::kCiphertext3, FieldTag::kNoncePoint2};
constexpr FieldTag kSchnorrMsg1Fields[] = {FieldTag::kRawTx, FieldTag::kNoncePoint1};
constexpr FieldTag kSchnorrMsg2Fields[] = {FieldTag::kPartialSignature, FieldTag::kNoncePoint2};

std::array<uint8_t, kChecksumBytes> Checksum(ByteView data) {
  const Digest digest = Sha256(data);
  std::array<uint8_t, kChecksumBytes> out;
  std::copy_n(digest.begin(), kChecksumBytes, out.begin());
  return out;
}

bool ChecksumMatches(ByteView covered, ByteView stored) {
  const auto expected = Checksum(covered);
  return std::equal(expected.begin(), expected.end(), stored.begin(), stored.end());
}

// Walks header and TLVs without interpreting them and returns the offset
// where the checksum should start. Throws kTruncated if the declared
// structure needs more bytes than are present.
size_t ScanStructure(ByteView bytes) {
  ByteReader reader(bytes);
  reader.ReadBytes(kEnvelopeHeaderBytes + 16);
  const uint8_t count = reader.ReadU8();
  for (uint8_t i = 0; i < count; ++i) {
    reader.ReadU8();
    const uint32_t len = reader.ReadU32Be();
    reader.ReadBytes(len);
  }
  const size_t end = reader.offset();
  if (bytes.size() - end < kChecksumBytes) {
    throw Error(ErrorCode::kTruncated, "envelope ends inside its checksum");
  }
  return end;
}

}  // namespace

std::string_view MsgTypeName(MsgType type) {
  switch (type) {
    case MsgType::kKeygenPub: return "keygen_pub";
    case MsgType::kSignMsg1: return "sign_msg1";
    case MsgType::kSignMsg2: return "sign_msg2";
  }
  return "unknown";
}

std::string_view FieldTagName(FieldTag tag) {
  switch (tag) {
    case FieldTag::kPublicShare: return "P_i";
    case FieldTag::kRole: return "role";
    case FieldTag::kRawTx: return "tx";
    case FieldTag::kTxHash: return "m";
    case FieldTag::kPaillierModulus: return "pk";
    case FieldTag::kEncryptedKey: return "C_key";
    case FieldTag::kNoncePoint1: return "R1";
    case FieldTag::kCiphertext3: return "C3";
    case FieldTag::kNoncePoint2: return "R2";
    case FieldTag::kPartialSignature: return "s2";
  }
  return "unknown";
}

const Bytes* Envelope::Find(FieldTag tag) const {
  for (const auto& f : fields) {
    if (f.tag == static_cast<uint8_t>(tag)) return &f.value;
  }
  return nullptr;
}

std::span<const FieldTag> AllowedFields(Scheme scheme, MsgType type) {
  switch (type) {
    case MsgType::kKeygenPub:
      return kKeygenFields;
    case MsgType::kSignMsg1:
      return scheme == Scheme::kEcdsa ? std::span<const FieldTag>(kEcdsaMsg1Fields)
                                      : std::span<const FieldTag>(kSchnorrMsg1Fields);
    case MsgType::kSignMsg2:
      return scheme == Scheme::kEcdsa ? std::span<const FieldTag>(kEcdsaMsg2Fields)
                                      : std::span<const FieldTag>(kSchnorrMsg2Fields);
  }
  throw Error(ErrorCode::kUnknownMessageType, "unregistered message type");
}

void ValidateSchema(const Envelope& envelope) {
  const auto allowed = AllowedFields(envelope.scheme, envelope.type);
  std::bitset<256> seen;
  for (const auto& field : envelope.fields) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](FieldTag t) {
      return static_cast<uint8_t>(t) == field.tag;
    });
    if (!known) {
      throw Error(ErrorCode::kUnknownTag,
                  "tag 0x" + ToHex(ByteView(&field.tag, 1)) + " is not allowed in " +
                      std::string(SchemeName(envelope.scheme)) + " " +
                      std::string(MsgTypeName(envelope.type)));
    }
    if (seen.test(field.tag)) {
      throw Error(ErrorCode::kDuplicateTag,
                  "field " + std::string(FieldTagName(static_cast<FieldTag>(field.tag))) +
                      " appears twice");
    }
    seen.set(field.tag);
  }
  for (FieldTag t : allowed) {
    if (!seen.test(static_cast<uint8_t>(t))) {
      throw Error(ErrorCode::kMissingField,
                  "required field " + std::string(FieldTagName(t)) + " is absent");
    }
  }
}

Bytes EncodeEnvelope(const Envelope& envelope) {
  if (envelope.fields.size() > 255) {
    throw Error(ErrorCode::kOversizeField, "too many fields");
  }
  Bytes out(kEnvelopeMagic.begin(), kEnvelopeMagic.end());
  AppendU8(kEnvelopeVersion, &out);
  AppendU8(static_cast<uint8_t>(envelope.scheme), &out);
  AppendU8(static_cast<uint8_t>(envelope.type), &out);
  AppendBytes(envelope.session_id, &out);
  AppendU8(static_cast<uint8_t>(envelope.fields.size()), &out);
  for (const auto& field : envelope.fields) {
    if (field.value.size() > kMaxFieldBytes) {
      throw Error(ErrorCode::kOversizeField, "field exceeds 1 MiB");
    }
    AppendU8(field.tag, &out);
    AppendU32Be(static_cast<uint32_t>(field.value.size()), &out);
    AppendBytes(field.value, &out);
  }
  const auto sum = Checksum(out);
  AppendBytes(sum, &out);
  return out;
}

Envelope DecodeEnvelope(ByteView bytes) {
  if (bytes.size() < kEnvelopeFixedBytes) {
    const size_t n = std::min(bytes.size(), kEnvelopeMagic.size());
    if (!std::equal(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(n),
                    kEnvelopeMagic.begin())) {
      throw Error(ErrorCode::kBadMagic, "not a CWv1 envelope");
    }
    throw Error(ErrorCode::kTruncated, "envelope shorter than its fixed header");
  }

  const size_t body_end = ScanStructure(bytes);
  const ByteView stored = bytes.subspan(body_end, kChecksumBytes);
  if (body_end + kChecksumBytes != bytes.size()) {
    if (ChecksumMatches(bytes.first(body_end), stored)) {
      throw Error(ErrorCode::kTrailingBytes, "bytes after a complete envelope");
    }
    throw Error(ErrorCode::kBadChecksum, "checksum mismatch");
  }
  if (!ChecksumMatches(bytes.first(body_end), stored)) {
    throw Error(ErrorCode::kBadChecksum, "checksum mismatch");
  }

  ByteReader reader(bytes.first(body_end));
  const ByteView magic = reader.ReadBytes(kEnvelopeMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kEnvelopeMagic.begin())) {
    throw Error(ErrorCode::kBadMagic, "not a CWv1 envelope");
  }
  const uint8_t version = reader.ReadU8();
  if (version != kEnvelopeVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "envelope version " + std::to_string(version) + ", expected " +
                    std::to_string(kEnvelopeVersion));
  }
  const uint8_t scheme = reader.ReadU8();
  if (scheme != static_cast<uint8_t>(Scheme::kEcdsa) &&
      scheme != static_cast<uint8_t>(Scheme::kSchnorr)) {
    throw Error(ErrorCode::kMalformedField, "unknown scheme byte " + std::to_string(scheme));
  }
  const uint8_t type = reader.ReadU8();
  if (type < static_cast<uint8_t>(MsgType::kKeygenPub) ||
      type > static_cast<uint8_t>(MsgType::kSignMsg2)) {
    throw Error(ErrorCode::kUnknownMessageType, "unknown msg_type " + std::to_string(type));
  }

  Envelope envelope{static_cast<Scheme>(scheme), static_cast<MsgType>(type), {}, {}};
  const ByteView sid = reader.ReadBytes(envelope.session_id.size());
  std::copy(sid.begin(), sid.end(), envelope.session_id.begin());

  const uint8_t count = reader.ReadU8();
  envelope.fields.reserve(count);
  for (uint8_t i = 0; i < count; ++i) {
    const uint8_t tag = reader.ReadU8();
    const uint32_t len = reader.ReadU32Be();
    if (len > kMaxFieldBytes) {
      throw Error(ErrorCode::kOversizeField, "field exceeds 1 MiB");
    }
    const ByteView value = reader.ReadBytes(len);
    envelope.fields.push_back(EnvelopeField{tag, Bytes(value.begin(), value.end())});
  }
  ValidateSchema(envelope);
  return envelope;
}

}  // namespace coldwallet
