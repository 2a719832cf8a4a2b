#include "coldwallet/sign.hpp"

#include <string>

#include "coldwallet/bigint.hpp"
#include "coldwallet/error.hpp"

namespace coldwallet {
namespace {

constexpr int kMaxNonceAttempts = 3;

void RequireInitiatorShare(const KeyShare& share, Scheme scheme) {
  if (share.scheme != scheme) {
    throw Error(ErrorCode::kSchemeMismatch, "share is for " + std::string(SchemeName(share.scheme)));
  }
  if (!IsInitiator(share.role)) {
    throw Error(ErrorCode::kRoleMismatch, "only the gateway or user role initiates signing");
  }
  if (!share.shared_public) {
    throw Error(ErrorCode::kMissingCombinedKey, "finish key generation before signing");
  }
}

void RequireCoreShare(const KeyShare& share, Scheme scheme, const Policy& policy) {
  if (share.scheme != scheme) {
    throw Error(ErrorCode::kSchemeMismatch, "share is for " + std::string(SchemeName(share.scheme)));
  }
  if (share.role != Role::kCore) {
    throw Error(ErrorCode::kRoleMismatch, "only the core role responds to signing requests");
  }
  if (!share.shared_public) {
    throw Error(ErrorCode::kMissingCombinedKey, "finish key generation before signing");
  }
  if (policy.whitelist.empty()) {
    throw Error(ErrorCode::kConfig, "core policy has an empty destination whitelist");
  }
}

void RequireNonIdentity(const Group& group, const Point& p, const char* what) {
  if (p.curve() != group.id()) {
    throw Error(ErrorCode::kInvalidPoint, std::string(what) + " is on the wrong curve");
  }
  if (group.IsIdentity(p)) {
    throw Error(ErrorCode::kInvalidPoint, std::string(what) + " is the identity");
  }
}

void EnforcePolicy(const Transaction& tx, const Policy& policy) {
  const PolicyReport report = CheckPolicy(tx, policy);
  if (!report.ok()) {
    std::string message = "transaction refused:";
    for (const auto& v : report.violations) message += " [" + v + "]";
    throw Error(ErrorCode::kPolicyViolation, message);
  }
}

Scalar PickNonce(const Group& group, Rng& rng, const std::optional<Scalar>& fixed) {
  if (!fixed) return group.RandomNonZeroScalar(rng);
  if (fixed->IsZero() || fixed->value() >= group.order()) {
    throw Error(ErrorCode::kInvalidArgument, "injected nonce must lie in [1, q)");
  }
  return *fixed;
}

}  // namespace

// Owns every phase transition of SigningSession.
class SessionDriver {
 public:
  static SigningSession Start(const KeyShare& share, const Transaction& tx, const Scalar& nonce,
                              const Point& nonce_point, const SessionId& id) {
    SigningSession session(SessionState{share.scheme, share.role, id, SessionPhase::kInit,
                                        std::nullopt, nonce_point, tx, *share.shared_public});
    session.state_.nonce = SecretScalar(nonce);
    session.state_.phase = SessionPhase::kAwaitingPeer;
    return session;
  }

  // Returns k_i for a session that may still sign.
  static Scalar Claim(const SigningSession& session, const KeyShare& share, Scheme scheme) {
    const SessionState& st = session.state_;
    switch (st.phase) {
      case SessionPhase::kComplete:
        throw Error(ErrorCode::kNonceReuse, "session already produced its signature");
      case SessionPhase::kFailed:
        throw Error(ErrorCode::kInvalidState, "session has failed; start a new one");
      case SessionPhase::kInit:
        throw Error(ErrorCode::kInvalidState, "session was never started");
      case SessionPhase::kAwaitingPeer:
        break;
    }
    if (st.scheme != scheme) {
      throw Error(ErrorCode::kSchemeMismatch, "session belongs to the other scheme");
    }
    if (!share.shared_public || *share.shared_public != st.shared_public ||
        share.role != st.role || share.scheme != st.scheme) {
      throw Error(ErrorCode::kInconsistentShare, "session was started with a different share");
    }
    return st.nonce->Expose();
  }

  static void Complete(SigningSession& session) {
    session.state_.nonce.reset();
    session.state_.phase = SessionPhase::kComplete;
  }

  [[noreturn]] static void Fail(SigningSession& session, const std::string& why) {
    session.state_.nonce.reset();
    session.state_.phase = SessionPhase::kFailed;
    throw Error(ErrorCode::kVerificationFailed, why);
  }
};

SessionId RandomSessionId(Rng& rng) {
  SessionId id;
  rng.Fill(id);
  return id;
}

std::string_view PhaseName(SessionPhase phase) {
  switch (phase) {
    case SessionPhase::kInit: return "init";
    case SessionPhase::kAwaitingPeer: return "awaiting_peer";
    case SessionPhase::kComplete: return "complete";
    case SessionPhase::kFailed: return "failed";
  }
  return "unknown";
}

SigningSession SigningSession::FromState(SessionState state) {
  const Group& group = GroupForScheme(state.scheme);
  if (state.phase == SessionPhase::kAwaitingPeer) {
    if (!state.nonce || state.nonce->Expose().IsZero() ||
        group.MulBase(state.nonce->Expose()) != state.nonce_point) {
      throw Error(ErrorCode::kInconsistentShare, "persisted session nonce does not match R_i");
    }
  } else if (state.nonce) {
    throw Error(ErrorCode::kInconsistentShare, "finished session still carries a nonce");
  }
  return SigningSession(std::move(state));
}

EcdsaInitResult EcdsaGatewayInit(const KeyShare& share, const Transaction& tx, Rng& rng,
                                 const InitOptions& options) {
  RequireInitiatorShare(share, Scheme::kEcdsa);
  if (!share.paillier || !share.encrypted_secret) {
    throw Error(ErrorCode::kMissingPaillierKey, "ECDSA initiator share has no Paillier keypair");
  }
  const Group& group = share.group();
  if (share.paillier->pub.bits() < RequiredPaillierBits(group)) {
    throw Error(ErrorCode::kModulusTooSmall, "Paillier modulus too small for two-party ECDSA");
  }
  const Scalar k1 = PickNonce(group, rng, options.fixed_nonce);
  const Point r1 = group.MulBase(k1);
  const SessionId id = options.session_id.value_or(RandomSessionId(rng));
  EcdsaSignMsg1 msg{tx, TxHash(tx, group), share.paillier->pub, *share.encrypted_secret, r1};
  return EcdsaInitResult{SessionDriver::Start(share, tx, k1, r1, id), std::move(msg)};
}

EcdsaSignMsg2 EcdsaCoreRespond(const KeyShare& share, const EcdsaSignMsg1& msg1,
                               const Policy& policy, Rng& rng,
                               const EcdsaRespondOptions& options) {
  RequireCoreShare(share, Scheme::kEcdsa, policy);
  const Group& group = share.group();
  const mpz_class& q = group.order();

  if (TxHash(msg1.tx, group) != msg1.m) {
    throw Error(ErrorCode::kHashMismatch, "m does not match the hash of the raw transaction");
  }
  EnforcePolicy(msg1.tx, policy);

  RequireNonIdentity(group, msg1.r1, "R1");
  const PaillierPublicKey& pk = msg1.pk;
  if (pk.bits() < RequiredPaillierBits(group)) {
    throw Error(ErrorCode::kModulusTooSmall,
                "peer Paillier modulus has " + std::to_string(pk.bits()) + " bits, need " +
                    std::to_string(RequiredPaillierBits(group)));
  }
  const PaillierCiphertext c_key = PaillierCiphertext::FromInteger(pk, msg1.encrypted_key.value());

  for (int attempt = 1;; ++attempt) {
    const Scalar k2 = PickNonce(group, rng, options.fixed_nonce);
    const Point big_r = group.Mul(k2, msg1.r1);
    const Scalar r = group.Reduce(group.AffineX(big_r));
    if (r.IsZero()) {
      if (options.fixed_nonce || attempt >= kMaxNonceAttempts) {
        throw Error(ErrorCode::kDegenerateSignature, "r = 0 for every nonce attempt");
      }
      continue;
    }
    const Point r2 = group.MulBase(k2);
    const Scalar k2_inv = group.ScalarInverse(k2);

    const mpz_class rho = options.fixed_rho.value_or(RandomBelow(rng, q * q));
    const Scalar masked_m = group.ScalarMul(k2_inv, msg1.m);
    const PaillierCiphertext c1 = PaillierEncrypt(pk, rho * q + masked_m.value(), rng);

    const Scalar key_coeff = group.ScalarMul(group.ScalarMul(k2_inv, r), share.secret.Expose());
    const PaillierCiphertext c2 = PaillierScalarMul(pk, c_key, key_coeff.value());

    return EcdsaSignMsg2{PaillierAdd(pk, c1, c2), r2};
  }
}

Signature EcdsaGatewayFinalize(SigningSession& session, const KeyShare& share,
                               const EcdsaSignMsg2& msg2) {
  const Scalar k1 = SessionDriver::Claim(session, share, Scheme::kEcdsa);
  const Group& group = share.group();
  const PaillierKeypair& paillier = *share.paillier;

  RequireNonIdentity(group, msg2.r2, "R2");
  const PaillierCiphertext c3 = PaillierCiphertext::FromInteger(paillier.pub, msg2.c3.value());

  const Scalar s_prime = group.Reduce(PaillierDecrypt(paillier.pub, paillier.sec, c3));
  const Scalar s_double = group.ScalarMul(group.ScalarInverse(k1), s_prime);
  const Scalar s = NormalizeLowS(s_double, group);
  const Scalar r = group.Reduce(group.AffineX(group.Mul(k1, msg2.r2)));
  if (r.IsZero() || s.IsZero()) {
    SessionDriver::Fail(session, "degenerate signature component from core response");
  }

  const Signature sig = Signature::Create(Scheme::kEcdsa, r, s, group);
  const Scalar m = TxHash(session.state().tx, group);
  if (!EcdsaVerify(group, *share.shared_public, m, sig)) {
    SessionDriver::Fail(session,
                        "combined ECDSA signature does not verify under the wallet key "
                        "(corrupted core response or mismatched shares)");
  }
  SessionDriver::Complete(session);
  return sig;
}

SchnorrInitResult SchnorrGatewayInit(const KeyShare& share, const Transaction& tx, Rng& rng,
                                     const InitOptions& options) {
  RequireInitiatorShare(share, Scheme::kSchnorr);
  tx.Validate();
  const Group& group = share.group();
  const Scalar k1 = PickNonce(group, rng, options.fixed_nonce);
  const Point r1 = group.MulBase(k1);
  const SessionId id = options.session_id.value_or(RandomSessionId(rng));
  return SchnorrInitResult{SessionDriver::Start(share, tx, k1, r1, id), SchnorrSignMsg1{tx, r1}};
}

SchnorrSignMsg2 SchnorrCoreRespond(const KeyShare& share, const SchnorrSignMsg1& msg1,
                                   const Policy& policy, Rng& rng,
                                   const std::optional<Scalar>& fixed_nonce) {
  RequireCoreShare(share, Scheme::kSchnorr, policy);
  const Group& group = share.group();
  const Bytes m = TxCanonicalBytes(msg1.tx);
  EnforcePolicy(msg1.tx, policy);
  RequireNonIdentity(group, msg1.r1, "R1");

  for (int attempt = 1;; ++attempt) {
    const Scalar k2 = PickNonce(group, rng, fixed_nonce);
    const Point r2 = group.MulBase(k2);
    const Point big_r = group.Add(msg1.r1, r2);
    if (group.IsIdentity(big_r)) {
      if (fixed_nonce || attempt >= kMaxNonceAttempts) {
        throw Error(ErrorCode::kDegenerateSignature, "R1 + R2 is the identity");
      }
      continue;
    }
    const Scalar e = SchnorrChallenge(group, big_r, *share.shared_public, m);
    const Scalar s2 = group.ScalarAdd(k2, group.ScalarMul(share.secret.Expose(), e));
    return SchnorrSignMsg2{s2, r2};
  }
}

Signature SchnorrGatewayFinalize(SigningSession& session, const KeyShare& share,
                                 const SchnorrSignMsg2& msg2) {
  const Scalar k1 = SessionDriver::Claim(session, share, Scheme::kSchnorr);
  const Group& group = share.group();
  RequireNonIdentity(group, msg2.r2, "R2");
  if (msg2.s2.value() >= group.order()) {
    throw Error(ErrorCode::kInvalidScalar, "s2 is not reduced");
  }

  const Bytes m = TxCanonicalBytes(session.state().tx);
  const Point big_r = group.Add(session.state().nonce_point, msg2.r2);
  if (group.IsIdentity(big_r)) {
    SessionDriver::Fail(session, "R1 + R2 is the identity");
  }
  const Scalar e = SchnorrChallenge(group, big_r, *share.shared_public, m);
  const Scalar s1 = group.ScalarAdd(k1, group.ScalarMul(share.secret.Expose(), e));
  const Scalar s = group.ScalarAdd(s1, msg2.s2);
  if (e.IsZero() || s.IsZero()) {
    SessionDriver::Fail(session, "degenerate Schnorr signature component");
  }
  const Signature sig = Signature::Create(Scheme::kSchnorr, e, s, group);
  if (!SchnorrVerify(group, *share.shared_public, m, sig)) {
    SessionDriver::Fail(session,
                        "combined Schnorr signature does not verify under the wallet key "
                        "(corrupted partial signature or mismatched shares)");
  }
  SessionDriver::Complete(session);
  return sig;
}

bool VerifyTransactionSignature(Scheme scheme, const Point& shared_public, const Transaction& tx,
                                const Signature& sig) {
  const Group& group = GroupForScheme(scheme);
  if (sig.scheme() != scheme) return false;
  if (scheme == Scheme::kEcdsa) return EcdsaVerify(group, shared_public, TxHash(tx, group), sig);
  return SchnorrVerify(group, shared_public, TxCanonicalBytes(tx), sig);
}

}  // namespace coldwallet
