#include "coldwallet/keygen.hpp"

#include "json.hpp"

#include "coldwallet/bigint.hpp"
#include "coldwallet/error.hpp"
#include "coldwallet/hash.hpp"

namespace coldwallet {
namespace {

void CheckPaillierSize(const Group& group, size_t bits) {
  if (bits < RequiredPaillierBits(group)) {
    throw Error(ErrorCode::kModulusTooSmall,
                "Paillier modulus of " + std::to_string(bits) + " bits is below the " +
                    std::to_string(RequiredPaillierBits(group)) + "-bit minimum for " +
                    std::string(group.name()));
  }
}

}  // namespace

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kGateway: return "gateway";
    case Role::kCore: return "core";
    case Role::kUser: return "user";
  }
  return "unknown";
}

Role ParseRole(std::string_view name) {
  if (name == "gateway") return Role::kGateway;
  if (name == "core") return Role::kCore;
  if (name == "user") return Role::kUser;
  throw Error(ErrorCode::kConfig, "unknown role '" + std::string(name) + "'");
}

size_t RequiredPaillierBits(const Group& group) { return 3 * BitLength(group.order()) + 64; }

void KeyShare::Validate() const {
  const Group& g = group();
  if (secret.Expose().IsZero() || secret.Expose().value() >= g.order()) {
    throw Error(ErrorCode::kInconsistentShare, "share secret must lie in [1, q)");
  }
  if (g.MulBase(secret.Expose()) != public_share) {
    throw Error(ErrorCode::kInconsistentShare, "public share does not match secret");
  }
  if (needs_paillier() != paillier.has_value() ||
      needs_paillier() != encrypted_secret.has_value()) {
    throw Error(ErrorCode::kInconsistentShare, "Paillier material does not match scheme/role");
  }
  if (paillier &&
      PaillierDecrypt(paillier->pub, paillier->sec, *encrypted_secret) != secret.Expose().value()) {
    throw Error(ErrorCode::kInconsistentShare, "cached C_key does not decrypt to the share");
  }
  if (shared_public && (shared_public->curve() != g.id() || g.IsIdentity(*shared_public))) {
    throw Error(ErrorCode::kInconsistentShare, "invalid combined public key");
  }
}

KeyShare ShareFromSecret(Scheme scheme, Role role, const Scalar& secret, Rng& rng,
                         std::optional<PaillierKeypair> paillier, size_t paillier_bits) {
  const Group& group = GroupForScheme(scheme);
  if (secret.IsZero() || secret.value() >= group.order()) {
    throw Error(ErrorCode::kInvalidArgument, "share secret must lie in [1, q)");
  }
  KeyShare share{scheme, role, SecretScalar(secret), group.MulBase(secret),
                 std::nullopt, std::nullopt, std::nullopt, false};
  if (share.needs_paillier()) {
    if (!paillier) {
      CheckPaillierSize(group, paillier_bits);
      paillier = PaillierKeygen(paillier_bits, rng);
    }
    share.encrypted_secret = PaillierEncrypt(paillier->pub, secret.value(), rng);
    share.paillier = std::move(paillier);
  }
  return share;
}

KeyShare GenerateShare(Scheme scheme, Role role, Rng& rng, size_t paillier_bits) {
  const Group& group = GroupForScheme(scheme);
  if (scheme == Scheme::kEcdsa && IsInitiator(role)) CheckPaillierSize(group, paillier_bits);
  return ShareFromSecret(scheme, role, group.RandomNonZeroScalar(rng), rng, std::nullopt,
                         paillier_bits);
}

KeyShare DeriveRecoverableShare(Scheme scheme, Role role, ByteView master_seed,
                                std::string_view account_id, Rng& rng, size_t paillier_bits) {
  if (master_seed.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "master seed must not be empty");
  }
  const Group& group = GroupForScheme(scheme);
  Bytes preimage(master_seed.begin(), master_seed.end());
  AppendBytes(ToBytes(account_id), &preimage);
  const Scalar secret = HashToScalar(preimage, group);
  if (secret.IsZero()) {
    throw Error(ErrorCode::kInvalidArgument, "derived share is zero; choose another account id");
  }
  KeyShare share = ShareFromSecret(scheme, role, secret, rng, std::nullopt, paillier_bits);
  share.recoverable = true;
  return share;
}

Point CombinePublicKey(KeyShare& own, const Point& peer_public) {
  const Group& group = own.group();
  if (peer_public.curve() != group.id()) {
    throw Error(ErrorCode::kSchemeMismatch, "peer public key is on the wrong curve");
  }
  if (group.IsIdentity(peer_public)) {
    throw Error(ErrorCode::kInvalidPoint, "peer public key is the identity");
  }
  if (peer_public == own.public_share) {
    throw Error(ErrorCode::kInvalidPoint, "peer public key equals our own (reflected message?)");
  }
  Point combined = own.scheme == Scheme::kEcdsa
                       ? group.Mul(own.secret.Expose(), peer_public)
                       : group.Add(own.public_share, peer_public);
  if (own.shared_public && *own.shared_public != combined) {
    throw Error(ErrorCode::kInconsistentShare,
                "share is already bound to a different combined public key");
  }
  own.shared_public = combined;
  return combined;
}

std::string DeriveAddress(Scheme, const Point& shared_public) {
  const Digest digest = Sha256(shared_public.encoding());
  return "cw1" + ToHex(digest).substr(0, 40);
}

std::string WalletDescriptor::ToJson() const {
  nlohmann::ordered_json doc;
  doc["scheme"] = SchemeName(scheme);
  doc["curve"] = CurveName(shared_public.curve());
  doc["public_key"] = ToHex(shared_public.encoding());
  doc["address"] = address;
  doc["created_at"] = created_at;
  return doc.dump(2);
}

WalletDescriptor DescribeWallet(const KeyShare& share, int64_t created_at) {
  if (!share.shared_public) {
    throw Error(ErrorCode::kMissingCombinedKey, "share has no combined public key yet");
  }
  return WalletDescriptor{share.scheme, *share.shared_public,
                          DeriveAddress(share.scheme, *share.shared_public), created_at};
}

}  // namespace coldwallet
