#include <gtest/gtest.h>

#include "coldwallet/bigint.hpp"
#include "coldwallet/sign.hpp"
#include "reference.hpp"
#include "test_util.hpp"

using namespace coldwallet;
using cwtest::AllowSampleDestination;
using cwtest::MakePair;
using cwtest::SampleTx;

namespace {

const Group& K1() { return Secp256k1(); }
const Group& R255() { return Ristretto255(); }

mpz_class Decrypt(const KeyShare& initiator, const PaillierCiphertext& c) {
  return PaillierDecrypt(initiator.paillier->pub, initiator.paillier->sec, c);
}

}  // namespace

TEST(EcdsaSession, HonestRunsVerify) {
  SeededRng rng(1);
  auto pair = MakePair(Scheme::kEcdsa, rng);
  for (uint64_t i = 0; i < 10; ++i) {
    Transaction tx = SampleTx(i);
    auto init = EcdsaGatewayInit(pair.initiator, tx, rng);
    EXPECT_EQ(init.session.phase(), SessionPhase::kAwaitingPeer);
    auto msg2 = EcdsaCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng);
    Signature sig = EcdsaGatewayFinalize(init.session, pair.initiator, msg2);
    EXPECT_EQ(init.session.phase(), SessionPhase::kComplete);
    EXPECT_FALSE(init.session.state().nonce.has_value());
    EXPECT_TRUE(EcdsaVerify(K1(), *pair.core.shared_public, TxHash(tx, K1()), sig));
    EXPECT_TRUE(VerifyTransactionSignature(Scheme::kEcdsa, *pair.core.shared_public, tx, sig));
    EXPECT_TRUE(IsLowS(sig.second(), K1()));
  }
}

TEST(EcdsaSession, Msg1CarriesCachedKeyAndFreshNonce) {
  SeededRng rng(2);
  auto pair = MakePair(Scheme::kEcdsa, rng);
  auto a = EcdsaGatewayInit(pair.initiator, SampleTx(), rng);
  auto b = EcdsaGatewayInit(pair.initiator, SampleTx(), rng);
  EXPECT_EQ(Decrypt(pair.initiator, a.msg.encrypted_key), pair.initiator.secret.Expose().value());
  EXPECT_EQ(a.msg.encrypted_key, *pair.initiator.encrypted_secret);
  EXPECT_EQ(a.msg.m, TxHash(SampleTx(), K1()));
  EXPECT_EQ(a.msg.pk, pair.initiator.paillier->pub);
  EXPECT_NE(a.msg.r1, b.msg.r1);
  EXPECT_NE(a.session.id(), b.session.id());
}

TEST(EcdsaSession, MatchesDirectSigningWithComposedSecrets) {
  SeededRng rng(3);
  for (int i = 0; i < 20; ++i) {
    Scalar x1 = K1().RandomNonZeroScalar(rng), x2 = K1().RandomNonZeroScalar(rng);
    Scalar k1 = K1().RandomNonZeroScalar(rng), k2 = K1().RandomNonZeroScalar(rng);
    auto pair = MakePair(Scheme::kEcdsa, rng, x1, x2);
    Transaction tx = SampleTx(100 + static_cast<uint64_t>(i));
    auto init = EcdsaGatewayInit(pair.initiator, tx, rng, InitOptions{k1, std::nullopt});
    auto msg2 = EcdsaCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng,
                                 EcdsaRespondOptions{k2, std::nullopt});
    Signature sig = EcdsaGatewayFinalize(init.session, pair.initiator, msg2);
    const mpz_class& q = K1().order();
    auto [r, s] = oracle::EcdsaSign((x1.value() * x2.value()) % q, TxHash(tx, K1()).value(),
                                   (k1.value() * k2.value()) % q);
    ASSERT_EQ(sig.first().value(), r);
    ASSERT_EQ(sig.second().value(), s);
  }
}

TEST(EcdsaSession, CoreCiphertextDecryptsToMaskedPartialSignature) {
  SeededRng rng(4);
  auto pair = MakePair(Scheme::kEcdsa, rng);
  const mpz_class& q = K1().order();
  const mpz_class x1 = pair.initiator.secret.Expose().value();
  const mpz_class x2 = pair.core.secret.Expose().value();
  Scalar k2 = K1().RandomNonZeroScalar(rng);
  mpz_class rho = RandomBelow(rng, q * q);
  auto init = EcdsaGatewayInit(pair.initiator, SampleTx(), rng);
  auto msg2 = EcdsaCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng,
                               EcdsaRespondOptions{k2, rho});
  EXPECT_EQ(msg2.r2, K1().MulBase(k2));

  const mpz_class m = init.msg.m.value();
  const mpz_class k2_inv = K1().ScalarInverse(k2).value();
  const mpz_class r = K1().Reduce(K1().AffineX(K1().Mul(k2, init.msg.r1))).value();
  const mpz_class plain = Decrypt(pair.initiator, msg2.c3);
  // Exact integer: no reduction mod n happens at this modulus size.
  mpz_class expected = rho * q + (k2_inv * m) % q + ((k2_inv * r % q) * x2 % q) * x1;
  EXPECT_EQ(plain, expected);
  mpz_class reduced = (k2_inv * (m + r * x1 % q * x2)) % q;
  EXPECT_EQ(plain % q, reduced);
}

TEST(EcdsaSession, RhoMasksTheQuotient) {
  SeededRng rng(5);
  auto pair = MakePair(Scheme::kEcdsa, rng);
  const mpz_class& q = K1().order();
  Scalar k2 = K1().RandomNonZeroScalar(rng);
  auto init = EcdsaGatewayInit(pair.initiator, SampleTx(), rng);
  auto unmasked = EcdsaCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng,
                                   EcdsaRespondOptions{k2, mpz_class(0)});
  auto masked = EcdsaCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng,
                                 EcdsaRespondOptions{k2, std::nullopt});
  mpz_class a = Decrypt(pair.initiator, unmasked.c3);
  mpz_class b = Decrypt(pair.initiator, masked.c3);
  EXPECT_EQ(a % q, b % q);
  EXPECT_LT(a, q * q);
  EXPECT_NE(a / q, b / q);
  EXPECT_NE(unmasked.c3, masked.c3);
}

TEST(EcdsaSession, GateHashMismatch) {
  SeededRng rng(6);
  auto pair = MakePair(Scheme::kEcdsa, rng);
  auto init = EcdsaGatewayInit(pair.initiator, SampleTx(), rng);
  EcdsaSignMsg1 msg1 = init.msg;
  msg1.tx.amount = 999999;
  EXPECT_CODE(EcdsaCoreRespond(pair.core, msg1, AllowSampleDestination(), rng),
              ErrorCode::kHashMismatch);
  EXPECT_EQ(ClassOf(ErrorCode::kHashMismatch), ErrorClass::kIntegrity);
}

TEST(EcdsaSession, GateDestinationNotWhitelisted) {
  SeededRng rng(7);
  auto pair = MakePair(Scheme::kEcdsa, rng);
  Transaction tx = SampleTx();
  tx.destination_address = "attacker";
  auto init = EcdsaGatewayInit(pair.initiator, tx, rng);
  EXPECT_CODE(EcdsaCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng),
              ErrorCode::kPolicyViolation);
  EXPECT_CODE(EcdsaCoreRespond(pair.core, init.msg, Policy{}, rng), ErrorCode::kConfig);
}

TEST(EcdsaSession, GateTamperedC3) {
  SeededRng rng(8);
  auto pair = MakePair(Scheme::kEcdsa, rng);
  auto init = EcdsaGatewayInit(pair.initiator, SampleTx(), rng);
  auto msg2 = EcdsaCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng);
  const auto& pk = pair.initiator.paillier->pub;
  EcdsaSignMsg2 tampered = msg2;
  tampered.c3 = PaillierAdd(pk, msg2.c3, PaillierEncrypt(pk, 1, rng));
  EXPECT_CODE(EcdsaGatewayFinalize(init.session, pair.initiator, tampered),
              ErrorCode::kVerificationFailed);
  EXPECT_EQ(init.session.phase(), SessionPhase::kFailed);
  EXPECT_FALSE(init.session.state().nonce.has_value());
  // The genuine response can no longer be used either.
  EXPECT_CODE(EcdsaGatewayFinalize(init.session, pair.initiator, msg2), ErrorCode::kInvalidState);
}

TEST(EcdsaSession, GateAdversarialEncryptedKey) {
  SeededRng rng(9);
  auto pair = MakePair(Scheme::kEcdsa, rng);
  const auto& pk = pair.initiator.paillier->pub;
  for (int forged : {0, 1}) {
    auto init = EcdsaGatewayInit(pair.initiator, SampleTx(), rng);
    init.msg.encrypted_key = PaillierEncrypt(pk, forged, rng);
    // The core cannot tell; it answers with a well-formed ciphertext.
    auto msg2 = EcdsaCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng);
    EXPECT_NO_THROW(PaillierCiphertext::FromInteger(pk, msg2.c3.value()));
    EXPECT_CODE(EcdsaGatewayFinalize(init.session, pair.initiator, msg2),
                ErrorCode::kVerificationFailed);
    EXPECT_EQ(init.session.phase(), SessionPhase::kFailed);
  }
}

TEST(EcdsaSession, RejectsMalformedInputs) {
  SeededRng rng(10);
  auto pair = MakePair(Scheme::kEcdsa, rng);
  auto init = EcdsaGatewayInit(pair.initiator, SampleTx(), rng);
  EcdsaSignMsg1 msg1 = init.msg;
  msg1.r1 = K1().Identity();
  EXPECT_CODE(EcdsaCoreRespond(pair.core, msg1, AllowSampleDestination(), rng),
              ErrorCode::kInvalidPoint);
  msg1 = init.msg;
  msg1.encrypted_key = PaillierCiphertext::FromWire(msg1.pk.n_squared());
  EXPECT_CODE(EcdsaCoreRespond(pair.core, msg1, AllowSampleDestination(), rng),
              ErrorCode::kMalformedCiphertext);

  auto msg2 = EcdsaCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng);
  EcdsaSignMsg2 bad = msg2;
  bad.r2 = K1().Identity();
  EXPECT_CODE(EcdsaGatewayFinalize(init.session, pair.initiator, bad), ErrorCode::kInvalidPoint);
  EXPECT_NO_THROW(EcdsaGatewayFinalize(init.session, pair.initiator, msg2));
}

TEST(EcdsaSession, SmallModulusIsRefused) {
  SeededRng rng(11);
  auto small = PaillierKeygen(768, rng);
  KeyShare initiator =
      ShareFromSecret(Scheme::kEcdsa, Role::kGateway, K1().RandomNonZeroScalar(rng), rng, small);
  KeyShare core = GenerateShare(Scheme::kEcdsa, Role::kCore, rng);
  CombinePublicKey(initiator, core.public_share);
  CombinePublicKey(core, initiator.public_share);
  EXPECT_CODE(EcdsaGatewayInit(initiator, SampleTx(), rng), ErrorCode::kModulusTooSmall);

  // A core must refuse the same modulus if a forged msg1 carries it.
  auto pair = MakePair(Scheme::kEcdsa, rng);
  auto init = EcdsaGatewayInit(pair.initiator, SampleTx(), rng);
  init.msg.pk = small.pub;
  init.msg.encrypted_key = PaillierEncrypt(small.pub, 5, rng);
  EXPECT_CODE(EcdsaCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng),
              ErrorCode::kModulusTooSmall);
}

TEST(EcdsaSession, DoubleFinalizeIsNonceReuse) {
  SeededRng rng(12);
  auto pair = MakePair(Scheme::kEcdsa, rng);
  auto init = EcdsaGatewayInit(pair.initiator, SampleTx(), rng);
  auto msg2 = EcdsaCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng);
  EcdsaGatewayFinalize(init.session, pair.initiator, msg2);
  EXPECT_CODE(EcdsaGatewayFinalize(init.session, pair.initiator, msg2), ErrorCode::kNonceReuse);
}

TEST(EcdsaSession, RoleAndSchemeChecks) {
  SeededRng rng(13);
  auto pair = MakePair(Scheme::kEcdsa, rng);
  auto schnorr = MakePair(Scheme::kSchnorr, rng);
  EXPECT_CODE(EcdsaGatewayInit(pair.core, SampleTx(), rng), ErrorCode::kRoleMismatch);
  EXPECT_CODE(EcdsaGatewayInit(schnorr.initiator, SampleTx(), rng), ErrorCode::kSchemeMismatch);
  auto init = EcdsaGatewayInit(pair.initiator, SampleTx(), rng);
  EXPECT_CODE(EcdsaCoreRespond(pair.initiator, init.msg, AllowSampleDestination(), rng),
              ErrorCode::kRoleMismatch);
  KeyShare lone = GenerateShare(Scheme::kEcdsa, Role::kCore, rng);
  EXPECT_CODE(EcdsaCoreRespond(lone, init.msg, AllowSampleDestination(), rng),
              ErrorCode::kMissingCombinedKey);
  KeyShare no_paillier = pair.initiator;
  no_paillier.paillier.reset();
  EXPECT_CODE(EcdsaGatewayInit(no_paillier, SampleTx(), rng), ErrorCode::kMissingPaillierKey);

  // A session cannot be finished with a share from another wallet.
  auto other = MakePair(Scheme::kEcdsa, rng);
  auto msg2 = EcdsaCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng);
  EXPECT_CODE(EcdsaGatewayFinalize(init.session, other.initiator, msg2),
              ErrorCode::kInconsistentShare);
}

TEST(EcdsaSession, UserRoleInitiates) {
  SeededRng rng(14);
  KeyShare user = ShareFromSecret(Scheme::kEcdsa, Role::kUser, K1().RandomNonZeroScalar(rng), rng,
                                  cwtest::TestPaillier());
  KeyShare core = GenerateShare(Scheme::kEcdsa, Role::kCore, rng);
  CombinePublicKey(user, core.public_share);
  CombinePublicKey(core, user.public_share);
  auto init = EcdsaGatewayInit(user, SampleTx(), rng);
  auto msg2 = EcdsaCoreRespond(core, init.msg, AllowSampleDestination(), rng);
  Signature sig = EcdsaGatewayFinalize(init.session, user, msg2);
  EXPECT_TRUE(VerifyTransactionSignature(Scheme::kEcdsa, *core.shared_public, SampleTx(), sig));
}

TEST(SigningSession, FromStateChecksInvariants) {
  SeededRng rng(15);
  auto pair = MakePair(Scheme::kSchnorr, rng);
  auto init = SchnorrGatewayInit(pair.initiator, SampleTx(), rng);
  SessionState state = init.session.state();
  EXPECT_NO_THROW(SigningSession::FromState(state));
  SessionState wrong_nonce = state;
  wrong_nonce.nonce = SecretScalar(Scalar(12345));
  EXPECT_CODE(SigningSession::FromState(wrong_nonce), ErrorCode::kInconsistentShare);
  SessionState done_with_nonce = state;
  done_with_nonce.phase = SessionPhase::kComplete;
  EXPECT_CODE(SigningSession::FromState(done_with_nonce), ErrorCode::kInconsistentShare);

  auto msg2 = SchnorrCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng);
  SigningSession restored = SigningSession::FromState(state);
  EXPECT_NO_THROW(SchnorrGatewayFinalize(restored, pair.initiator, msg2));
  SigningSession replay = SigningSession::FromState(restored.state());
  EXPECT_CODE(SchnorrGatewayFinalize(replay, pair.initiator, msg2), ErrorCode::kNonceReuse);
}

TEST(SchnorrSession, HonestRunsVerify) {
  SeededRng rng(20);
  auto pair = MakePair(Scheme::kSchnorr, rng);
  for (uint64_t i = 0; i < 10; ++i) {
    Transaction tx = SampleTx(i);
    auto init = SchnorrGatewayInit(pair.initiator, tx, rng);
    EXPECT_EQ(init.msg.tx, tx);
    EXPECT_FALSE(R255().IsIdentity(init.msg.r1));
    auto msg2 = SchnorrCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng);
    Signature sig = SchnorrGatewayFinalize(init.session, pair.initiator, msg2);
    EXPECT_TRUE(SchnorrVerify(R255(), *pair.core.shared_public, TxCanonicalBytes(tx), sig));
  }
}

TEST(SchnorrSession, PartialSignatureIsValid) {
  SeededRng rng(21);
  auto pair = MakePair(Scheme::kSchnorr, rng);
  auto init = SchnorrGatewayInit(pair.initiator, SampleTx(), rng);
  auto msg2 = SchnorrCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng);
  Point big_r = R255().Add(init.msg.r1, msg2.r2);
  Scalar e = SchnorrChallenge(R255(), big_r, *pair.core.shared_public, TxCanonicalBytes(SampleTx()));
  EXPECT_EQ(R255().MulBase(msg2.s2), R255().Add(msg2.r2, R255().Mul(e, pair.core.public_share)));
}

TEST(SchnorrSession, MatchesDirectSigningWithComposedSecrets) {
  SeededRng rng(22);
  for (int i = 0; i < 20; ++i) {
    Scalar x1 = R255().RandomNonZeroScalar(rng), x2 = R255().RandomNonZeroScalar(rng);
    Scalar k1 = R255().RandomNonZeroScalar(rng), k2 = R255().RandomNonZeroScalar(rng);
    auto pair = MakePair(Scheme::kSchnorr, rng, x1, x2);
    Transaction tx = SampleTx(static_cast<uint64_t>(i));
    auto init = SchnorrGatewayInit(pair.initiator, tx, rng, InitOptions{k1, std::nullopt});
    auto msg2 = SchnorrCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng, k2);
    Signature sig = SchnorrGatewayFinalize(init.session, pair.initiator, msg2);
    const mpz_class& l = R255().order();
    Bytes m = TxCanonicalBytes(tx);
    auto [e, s] = oracle::SchnorrSign((x1.value() + x2.value()) % l, oracle::Bytes(m.begin(), m.end()),
                                      (k1.value() + k2.value()) % l);
    ASSERT_EQ(sig.first().value(), e);
    ASSERT_EQ(sig.second().value(), s);
  }
}

TEST(SchnorrSession, GateTamperedPartialSignature) {
  SeededRng rng(23);
  auto pair = MakePair(Scheme::kSchnorr, rng);
  auto init = SchnorrGatewayInit(pair.initiator, SampleTx(), rng);
  auto msg2 = SchnorrCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng);
  SchnorrSignMsg2 tampered = msg2;
  tampered.s2 = R255().ScalarAdd(msg2.s2, Scalar(1));
  EXPECT_CODE(SchnorrGatewayFinalize(init.session, pair.initiator, tampered),
              ErrorCode::kVerificationFailed);
  EXPECT_EQ(init.session.phase(), SessionPhase::kFailed);
  EXPECT_EQ(ClassOf(ErrorCode::kVerificationFailed), ErrorClass::kCrypto);
}

TEST(SchnorrSession, PolicyAndInputChecks) {
  SeededRng rng(24);
  auto pair = MakePair(Scheme::kSchnorr, rng);
  Transaction tx = SampleTx();
  tx.destination_address = "attacker";
  auto bad = SchnorrGatewayInit(pair.initiator, tx, rng);
  EXPECT_CODE(SchnorrCoreRespond(pair.core, bad.msg, AllowSampleDestination(), rng),
              ErrorCode::kPolicyViolation);

  auto init = SchnorrGatewayInit(pair.initiator, SampleTx(), rng);
  SchnorrSignMsg1 msg1 = init.msg;
  msg1.r1 = R255().Identity();
  EXPECT_CODE(SchnorrCoreRespond(pair.core, msg1, AllowSampleDestination(), rng),
              ErrorCode::kInvalidPoint);
  // k2 = -k1 would make R the identity.
  Scalar k1 = R255().RandomNonZeroScalar(rng);
  auto fixed = SchnorrGatewayInit(pair.initiator, SampleTx(), rng, InitOptions{k1, std::nullopt});
  EXPECT_CODE(SchnorrCoreRespond(pair.core, fixed.msg, AllowSampleDestination(), rng,
                                 R255().ScalarNegate(k1)),
              ErrorCode::kDegenerateSignature);

  auto msg2 = SchnorrCoreRespond(pair.core, init.msg, AllowSampleDestination(), rng);
  SchnorrSignMsg2 unreduced = msg2;
  unreduced.s2 = Scalar(R255().order());
  EXPECT_CODE(SchnorrGatewayFinalize(init.session, pair.initiator, unreduced),
              ErrorCode::kInvalidScalar);
  EXPECT_CODE(SchnorrGatewayInit(pair.core, SampleTx(), rng), ErrorCode::kRoleMismatch);
  Transaction zero = SampleTx();
  zero.amount = 0;
  EXPECT_CODE(SchnorrGatewayInit(pair.initiator, zero, rng), ErrorCode::kInvalidArgument);
}
