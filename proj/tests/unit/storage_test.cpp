#include <gtest/gtest.h>

#include <filesystem>
#include <sys/stat.h>

#include "coldwallet/bigint.hpp"
#include "coldwallet/storage.hpp"
#include "test_util.hpp"

using namespace coldwallet;
using cwtest::MakePair;
using cwtest::SampleTx;

namespace {

void ExpectSameShare(const KeyShare& a, const KeyShare& b) {
  EXPECT_EQ(a.scheme, b.scheme);
  EXPECT_EQ(a.role, b.role);
  EXPECT_EQ(a.secret, b.secret);
  EXPECT_EQ(a.public_share, b.public_share);
  EXPECT_EQ(a.shared_public, b.shared_public);
  EXPECT_EQ(a.recoverable, b.recoverable);
  ASSERT_EQ(a.paillier.has_value(), b.paillier.has_value());
  if (a.paillier) {
    EXPECT_EQ(a.paillier->pub, b.paillier->pub);
    EXPECT_EQ(a.paillier->sec.p(), b.paillier->sec.p());
    EXPECT_EQ(a.encrypted_secret, b.encrypted_secret);
  }
}

const std::string kPass = "correct horse";

}  // namespace

TEST(Storage, ShareRoundTripBothSchemes) {
  SeededRng rng(1);
  for (Scheme scheme : {Scheme::kEcdsa, Scheme::kSchnorr}) {
    auto pair = MakePair(scheme, rng);
    for (const KeyShare* share : {&pair.initiator, &pair.core}) {
      Bytes sealed = SealShare(*share, kPass, rng, KdfParams::Fast());
      ExpectSameShare(OpenShare(sealed, kPass), *share);
      Bytes plain = SealShare(*share, std::nullopt, rng);
      ExpectSameShare(OpenShare(plain, std::nullopt), *share);
      ExpectSameShare(DeserializeShare(SerializeShare(*share), share->scheme, share->role), *share);
    }
  }
}

TEST(Storage, SealedFileHidesSecrets) {
  SeededRng rng(2);
  auto pair = MakePair(Scheme::kEcdsa, rng);
  const KeyShare& share = pair.initiator;
  Bytes x = Secp256k1().ScalarToBytes(share.secret.Expose());
  Bytes p = EncodeBigEndian(share.paillier->sec.p());
  Bytes sealed = SealShare(share, kPass, rng, KdfParams::Fast());
  EXPECT_FALSE(ContainsSubsequence(sealed, x));
  EXPECT_FALSE(ContainsSubsequence(sealed, ByteView(p).first(16)));
  // Sanity: the unprotected form does carry them, so the scan can see them.
  Bytes plain = SealShare(share, std::nullopt, rng);
  EXPECT_TRUE(ContainsSubsequence(plain, x));
  EXPECT_TRUE(ContainsSubsequence(plain, ByteView(p).first(16)));
}

TEST(Storage, WrongPassphraseAndTampering) {
  SeededRng rng(3);
  auto pair = MakePair(Scheme::kSchnorr, rng);
  Bytes sealed = SealShare(pair.core, kPass, rng, KdfParams::Fast());
  EXPECT_CODE(OpenShare(sealed, std::string("wrong")), ErrorCode::kAuthenticationFailed);
  EXPECT_CODE(OpenShare(sealed, std::nullopt), ErrorCode::kAuthenticationFailed);

  Bytes bad = sealed;
  bad.back() ^= 1;
  EXPECT_CODE(OpenShare(bad, kPass), ErrorCode::kAuthenticationFailed);
  bad = sealed;
  bad[6] = static_cast<uint8_t>(Role::kGateway);  // header is authenticated
  EXPECT_CODE(OpenShare(bad, kPass), ErrorCode::kAuthenticationFailed);
  bad = sealed;
  bad[30] ^= 1;  // salt
  EXPECT_CODE(OpenShare(bad, kPass), ErrorCode::kAuthenticationFailed);
}

TEST(Storage, BadHeaders) {
  SeededRng rng(4);
  auto pair = MakePair(Scheme::kSchnorr, rng);
  Bytes sealed = SealShare(pair.core, kPass, rng, KdfParams::Fast());
  ASSERT_GT(sealed.size(), kStorageHeaderBytes);
  Bytes bad = sealed;
  bad[0] = 'X';
  EXPECT_CODE(OpenShare(bad, kPass), ErrorCode::kBadHeader);
  bad = sealed;
  bad[4] = 9;
  EXPECT_CODE(OpenShare(bad, kPass), ErrorCode::kBadHeader);
  bad = sealed;
  bad[7] = 7;
  EXPECT_CODE(OpenShare(bad, kPass), ErrorCode::kBadHeader);
  bad = sealed;
  bad[8] = 0xff;  // opslimit far beyond the accepted bound
  EXPECT_CODE(OpenShare(bad, kPass), ErrorCode::kBadHeader);
  EXPECT_CODE(OpenShare(ByteView(sealed).first(20), kPass), ErrorCode::kBadHeader);
  EXPECT_CODE(OpenShare(ByteView(sealed).first(sealed.size() - 1), kPass), ErrorCode::kBadHeader);
  // A session file is not a share file.
  auto init = SchnorrGatewayInit(pair.initiator, SampleTx(), rng);
  Bytes session = SealSession(init.session.state(), kPass, rng, KdfParams::Fast());
  EXPECT_CODE(OpenShare(session, kPass), ErrorCode::kBadHeader);
}

TEST(Storage, FilesOnDisk) {
  SeededRng rng(5);
  auto dir = cwtest::TempDir("storage");
  auto pair = MakePair(Scheme::kEcdsa, rng);
  auto path = dir / "gateway.cwsk";
  SaveShare(pair.initiator, path, kPass, rng, KdfParams::Fast());
  struct stat st{};
  ASSERT_EQ(::stat(path.c_str(), &st), 0);
  EXPECT_EQ(st.st_mode & 0777, 0600u);
  ExpectSameShare(LoadShare(path, kPass), pair.initiator);
  StorageHeader header = ReadStorageHeader(path);
  EXPECT_EQ(header.scheme, Scheme::kEcdsa);
  EXPECT_EQ(header.role, Role::kGateway);
  EXPECT_EQ(header.protection, Protection::kArgon2idXChaCha20Poly1305);

  EXPECT_CODE(SaveShare(pair.core, path, kPass, rng, KdfParams::Fast()), ErrorCode::kShareExists);
  SaveShare(pair.core, path, kPass, rng, KdfParams::Fast(), true);
  EXPECT_EQ(LoadShare(path, kPass).role, Role::kCore);
  EXPECT_CODE(LoadShare(dir / "missing.cwsk", kPass), ErrorCode::kNotFound);
  EXPECT_CODE(ReadFileBytes(dir / "missing"), ErrorCode::kNotFound);
  std::filesystem::remove_all(dir);
}

TEST(Storage, SessionRoundTripAndSecrecy) {
  SeededRng rng(6);
  auto dir = cwtest::TempDir("session");
  auto pair = MakePair(Scheme::kEcdsa, rng);
  Scalar k1 = Secp256k1().RandomNonZeroScalar(rng);
  auto init = EcdsaGatewayInit(pair.initiator, SampleTx(), rng, InitOptions{k1, std::nullopt});
  auto path = SessionPath(dir, init.session.id());
  EXPECT_EQ(path.parent_path(), dir);
  EXPECT_EQ(path.filename().string().rfind("session-", 0), 0u);
  SaveSession(init.session.state(), path, kPass, rng, KdfParams::Fast());
  EXPECT_FALSE(ContainsSubsequence(ReadFileBytes(path), Secp256k1().ScalarToBytes(k1)));

  SessionState loaded = LoadSession(path, kPass);
  EXPECT_EQ(loaded.id, init.session.id());
  EXPECT_EQ(loaded.phase, SessionPhase::kAwaitingPeer);
  EXPECT_EQ(loaded.nonce, init.session.state().nonce);
  EXPECT_EQ(loaded.tx, SampleTx());
  EXPECT_EQ(loaded.shared_public, *pair.initiator.shared_public);

  SigningSession restored = SigningSession::FromState(loaded);
  auto msg2 = EcdsaCoreRespond(pair.core, init.msg, cwtest::AllowSampleDestination(), rng);
  EcdsaGatewayFinalize(restored, pair.initiator, msg2);
  SaveSession(restored.state(), path, kPass, rng, KdfParams::Fast());
  SessionState done = LoadSession(path, kPass);
  EXPECT_EQ(done.phase, SessionPhase::kComplete);
  EXPECT_FALSE(done.nonce.has_value());
  std::filesystem::remove_all(dir);
}

TEST(Storage, FileLockIsExclusiveWithinScope) {
  auto dir = cwtest::TempDir("lock");
  {
    FileLock lock(dir / "x");
    EXPECT_TRUE(std::filesystem::exists(dir / "x.lock"));
  }
  FileLock again(dir / "x");
  std::filesystem::remove_all(dir);
}
