#include "coldwallet/messages.hpp"

#include <string>

#include "coldwallet/bigint.hpp"
#include "coldwallet/error.hpp"

namespace coldwallet {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void Put(Envelope& env, FieldTag tag, Bytes value) {
  env.fields.push_back(EnvelopeField{static_cast<uint8_t>(tag), std::move(value)});
}

const Bytes& Get(const Envelope& env, FieldTag tag) {
  const Bytes* value = env.Find(tag);
  if (value == nullptr) {
    throw Error(ErrorCode::kMissingField, std::string(FieldTagName(tag)) + " is absent");
  }
  return *value;
}

Point GetPoint(const Envelope& env, FieldTag tag, const Group& group) {
  Point p = group.Decode(Get(env, tag));
  if (group.IsIdentity(p)) {
    throw Error(ErrorCode::kInvalidPoint, std::string(FieldTagName(tag)) + " is the identity");
  }
  return p;
}

Scalar GetScalar(const Envelope& env, FieldTag tag, const Group& group) {
  return group.ScalarFromBytes(Get(env, tag));
}

mpz_class GetInteger(const Envelope& env, FieldTag tag) {
  const Bytes& raw = Get(env, tag);
  if (raw.empty() || raw.front() == 0) {
    throw Error(ErrorCode::kMalformedField,
                std::string(FieldTagName(tag)) + " must be a minimal non-zero magnitude");
  }
  return DecodeBigEndian(raw);
}

Transaction GetTx(const Envelope& env) { return TxFromCanonicalBytes(Get(env, FieldTag::kRawTx)); }

}  // namespace

Scheme SchemeOf(const ProtocolMessage& message) {
  return std::visit(Overloaded{
                        [](const KeygenPubMsg& m) { return m.scheme; },
                        [](const EcdsaSignMsg1&) { return Scheme::kEcdsa; },
                        [](const EcdsaSignMsg2&) { return Scheme::kEcdsa; },
                        [](const SchnorrSignMsg1&) { return Scheme::kSchnorr; },
                        [](const SchnorrSignMsg2&) { return Scheme::kSchnorr; },
                    },
                    message);
}

MsgType MsgTypeOf(const ProtocolMessage& message) {
  return std::visit(Overloaded{
                        [](const KeygenPubMsg&) { return MsgType::kKeygenPub; },
                        [](const EcdsaSignMsg1&) { return MsgType::kSignMsg1; },
                        [](const EcdsaSignMsg2&) { return MsgType::kSignMsg2; },
                        [](const SchnorrSignMsg1&) { return MsgType::kSignMsg1; },
                        [](const SchnorrSignMsg2&) { return MsgType::kSignMsg2; },
                    },
                    message);
}

Envelope ToEnvelope(const ProtocolMessage& message, const SessionId& session_id) {
  Envelope env{SchemeOf(message), MsgTypeOf(message), session_id, {}};
  const Group& group = GroupForScheme(env.scheme);
  std::visit(Overloaded{
                 [&](const KeygenPubMsg& m) {
                   Put(env, FieldTag::kPublicShare, m.public_share.encoding());
                   Put(env, FieldTag::kRole, Bytes{static_cast<uint8_t>(m.role)});
                 },
                 [&](const EcdsaSignMsg1& m) {
                   Put(env, FieldTag::kRawTx, TxCanonicalBytes(m.tx));
                   Put(env, FieldTag::kTxHash, group.ScalarToBytes(m.m));
                   Put(env, FieldTag::kPaillierModulus, EncodeBigEndian(m.pk.n()));
                   Put(env, FieldTag::kEncryptedKey, EncodeBigEndian(m.encrypted_key.value()));
                   Put(env, FieldTag::kNoncePoint1, m.r1.encoding());
                 },
                 [&](const EcdsaSignMsg2& m) {
                   Put(env, FieldTag::kCiphertext3, EncodeBigEndian(m.c3.value()));
                   Put(env, FieldTag::kNoncePoint2, m.r2.encoding());
                 },
                 [&](const SchnorrSignMsg1& m) {
                   Put(env, FieldTag::kRawTx, TxCanonicalBytes(m.tx));
                   Put(env, FieldTag::kNoncePoint1, m.r1.encoding());
                 },
                 [&](const SchnorrSignMsg2& m) {
                   Put(env, FieldTag::kPartialSignature, group.ScalarToBytes(m.s2));
                   Put(env, FieldTag::kNoncePoint2, m.r2.encoding());
                 },
             },
             message);
  ValidateSchema(env);
  return env;
}

DecodedMessage FromEnvelope(const Envelope& env) {
  ValidateSchema(env);
  const Group& group = GroupForScheme(env.scheme);
  auto decoded = [&]() -> ProtocolMessage {
    switch (env.type) {
      case MsgType::kKeygenPub: {
        const Bytes& role = Get(env, FieldTag::kRole);
        if (role.size() != 1 || role[0] < 1 || role[0] > 3) {
          throw Error(ErrorCode::kMalformedField, "role must be one byte in 1..3");
        }
        return KeygenPubMsg{env.scheme, static_cast<Role>(role[0]),
                            GetPoint(env, FieldTag::kPublicShare, group)};
      }
      case MsgType::kSignMsg1:
        if (env.scheme == Scheme::kEcdsa) {
          PaillierPublicKey pk =
              PaillierPublicKey::FromModulus(GetInteger(env, FieldTag::kPaillierModulus));
          PaillierCiphertext c_key =
              PaillierCiphertext::FromInteger(pk, GetInteger(env, FieldTag::kEncryptedKey));
          return EcdsaSignMsg1{GetTx(env), GetScalar(env, FieldTag::kTxHash, group), std::move(pk),
                               std::move(c_key), GetPoint(env, FieldTag::kNoncePoint1, group)};
        }
        return SchnorrSignMsg1{GetTx(env), GetPoint(env, FieldTag::kNoncePoint1, group)};
      case MsgType::kSignMsg2:
        if (env.scheme == Scheme::kEcdsa) {
          return EcdsaSignMsg2{
              PaillierCiphertext::FromWire(GetInteger(env, FieldTag::kCiphertext3)),
              GetPoint(env, FieldTag::kNoncePoint2, group)};
        }
        return SchnorrSignMsg2{GetScalar(env, FieldTag::kPartialSignature, group),
                               GetPoint(env, FieldTag::kNoncePoint2, group)};
    }
    throw Error(ErrorCode::kUnknownMessageType, "unregistered message type");
  }();
  return DecodedMessage{env.scheme, env.type, env.session_id, std::move(decoded)};
}

Bytes EncodeMessage(const ProtocolMessage& message, const SessionId& session_id) {
  return EncodeEnvelope(ToEnvelope(message, session_id));
}

DecodedMessage DecodeMessage(ByteView bytes) { return FromEnvelope(DecodeEnvelope(bytes)); }

}  // namespace coldwallet
