#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "coldwallet/group.hpp"
#include "coldwallet/keygen.hpp"
#include "coldwallet/paillier.hpp"
#include "coldwallet/random.hpp"
#include "coldwallet/signature.hpp"
#include "coldwallet/transaction.hpp"

namespace coldwallet {

using SessionId = std::array<uint8_t, 16>;

SessionId RandomSessionId(Rng& rng);

// Two-party ECDSA, initiator -> core: the transaction, its hash m, the
// initiator's Paillier public key, C_key = Enc(x1) and R1 = k1*G.
struct EcdsaSignMsg1 {
  Transaction tx;
  Scalar m;
  PaillierPublicKey pk;
  PaillierCiphertext encrypted_key;
  Point r1;
};

// Core -> initiator: C3 = C1 + C2 (homomorphically) and R2 = k2*G.
struct EcdsaSignMsg2 {
  PaillierCiphertext c3;
  Point r2;
};

// Two-party Schnorr, initiator -> core: the raw transaction (signed as its
// canonical bytes) and R1.
struct SchnorrSignMsg1 {
  Transaction tx;
  Point r1;
};

// Core -> initiator: partial signature s2 = k2 + x2*e and R2.
struct SchnorrSignMsg2 {
  Scalar s2;
  Point r2;
};

enum class SessionPhase : uint8_t {
  kInit = 0,
  kAwaitingPeer = 1,
  kComplete = 2,
  kFailed = 3,
};

std::string_view PhaseName(SessionPhase phase);

struct SessionState {
  Scheme scheme;
  Role role;
  SessionId id;
  SessionPhase phase;
  std::optional<SecretScalar> nonce;  // k_i, present only while awaiting the peer
  Point nonce_point;                  // R_i
  Transaction tx;
  Point shared_public;                // binds the session to one wallet
};

// Initiator-side state machine: init -> awaiting_peer -> complete | failed.
// The nonce is single use; once a session leaves awaiting_peer it can never
// sign again.
class SigningSession {
 public:
  // Rebuilds a persisted session, checking the phase/nonce invariants.
  static SigningSession FromState(SessionState state);

  const SessionState& state() const { return state_; }
  Scheme scheme() const { return state_.scheme; }
  Role role() const { return state_.role; }
  const SessionId& id() const { return state_.id; }
  SessionPhase phase() const { return state_.phase; }

 private:
  friend class SessionDriver;
  explicit SigningSession(SessionState state) : state_(std::move(state)) {}

  SessionState state_;
};

// Test hooks. Production callers leave these empty.
struct InitOptions {
  std::optional<Scalar> fixed_nonce;
  std::optional<SessionId> session_id;
};

struct EcdsaRespondOptions {
  std::optional<Scalar> fixed_nonce;
  // Forces the masking term rho (normally uniform in [0, q^2)).
  std::optional<mpz_class> fixed_rho;
};

struct EcdsaInitResult {
  SigningSession session;
  EcdsaSignMsg1 msg;
};

struct SchnorrInitResult {
  SigningSession session;
  SchnorrSignMsg1 msg;
};

EcdsaInitResult EcdsaGatewayInit(const KeyShare& share, const Transaction& tx, Rng& rng,
                                 const InitOptions& options = {});

// Recomputes the transaction hash, applies the destination policy, then
// computes C3 = Enc(rho*q + k2^-1*m mod q) + (k2^-1*r*x2 mod q) * C_key.
EcdsaSignMsg2 EcdsaCoreRespond(const KeyShare& share, const EcdsaSignMsg1& msg1,
                               const Policy& policy, Rng& rng,
                               const EcdsaRespondOptions& options = {});

// s = min{s'', q - s''} with s'' = k1^-1 * (Dec(C3) mod q), r = (k1*R2).x.
// The result is checked with the single-party verifier before release.
Signature EcdsaGatewayFinalize(SigningSession& session, const KeyShare& share,
                               const EcdsaSignMsg2& msg2);

SchnorrInitResult SchnorrGatewayInit(const KeyShare& share, const Transaction& tx, Rng& rng,
                                     const InitOptions& options = {});

SchnorrSignMsg2 SchnorrCoreRespond(const KeyShare& share, const SchnorrSignMsg1& msg1,
                                   const Policy& policy, Rng& rng,
                                   const std::optional<Scalar>& fixed_nonce = std::nullopt);

// s = (k1 + x1*e) + s2, e = H(R1+R2 | P | m), verified before release.
Signature SchnorrGatewayFinalize(SigningSession& session, const KeyShare& share,
                                 const SchnorrSignMsg2& msg2);

// The message each scheme signs for a transaction: the hash scalar for
// ECDSA, the canonical bytes for Schnorr.
bool VerifyTransactionSignature(Scheme scheme, const Point& shared_public, const Transaction& tx,
                                const Signature& sig);

}  // namespace coldwallet
