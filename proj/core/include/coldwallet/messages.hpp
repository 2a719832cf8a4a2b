#pragma once

#include <variant>

#include "coldwallet/envelope.hpp"
#include "coldwallet/keygen.hpp"
#include "coldwallet/sign.hpp"

namespace coldwallet {

// Key generation broadcast: only the sender's public share and role.
struct KeygenPubMsg {
  Scheme scheme;
  Role role;
  Point public_share;
};

using ProtocolMessage =
    std::variant<KeygenPubMsg, EcdsaSignMsg1, EcdsaSignMsg2, SchnorrSignMsg1, SchnorrSignMsg2>;

struct DecodedMessage {
  Scheme scheme;
  MsgType type;
  SessionId session_id;
  ProtocolMessage message;
};

Scheme SchemeOf(const ProtocolMessage& message);
MsgType MsgTypeOf(const ProtocolMessage& message);

// Scalars as 32-byte big-endian, points in their canonical encoding,
// Paillier integers as minimal big-endian magnitudes.
Envelope ToEnvelope(const ProtocolMessage& message, const SessionId& session_id);
DecodedMessage FromEnvelope(const Envelope& envelope);

Bytes EncodeMessage(const ProtocolMessage& message, const SessionId& session_id);
DecodedMessage DecodeMessage(ByteView bytes);

}  // namespace coldwallet
