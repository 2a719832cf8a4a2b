#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "coldwallet/group.hpp"
#include "coldwallet/paillier.hpp"
#include "coldwallet/random.hpp"
#include "coldwallet/signature.hpp"

namespace coldwallet {

enum class Role : uint8_t {
  kGateway = 1,
  kCore = 2,
  kUser = 3,  // takes the gateway's seat in user-held wallets
};

std::string_view RoleName(Role role);
Role ParseRole(std::string_view name);

// Gateway and user run the initiating side of signing.
inline bool IsInitiator(Role role) { return role == Role::kGateway || role == Role::kUser; }

// Smallest Paillier modulus that keeps the two-party ECDSA plaintext
// (rho*q + products of mod-q values, < q^3 + q^2 + q) from wrapping:
// 3*|q| + 64 bits.
size_t RequiredPaillierBits(const Group& group);

// One party's half of a wallet. The combined secret (x1*x2 for ECDSA,
// x1+x2 for Schnorr) is never formed; only the public combination is.
struct KeyShare {
  Scheme scheme;
  Role role;
  SecretScalar secret;  // x_i
  Point public_share;   // P_i = x_i * G
  std::optional<Point> shared_public;
  // ECDSA initiator only: Paillier keypair and the cached C_key = Enc(x_i).
  std::optional<PaillierKeypair> paillier;
  std::optional<PaillierCiphertext> encrypted_secret;
  // Set for shares derived from an exchange-held master seed.
  bool recoverable = false;

  const Group& group() const { return GroupForScheme(scheme); }
  bool needs_paillier() const { return scheme == Scheme::kEcdsa && IsInitiator(role); }

  // P_i == x_i*G, x_i != 0, Paillier material present exactly when needed and
  // Dec(C_key) == x_i. Throws Error(kInconsistentShare).
  void Validate() const;
};

KeyShare GenerateShare(Scheme scheme, Role role, Rng& rng,
                       size_t paillier_bits = kDefaultPaillierBits);

// Builds a share around a caller-chosen secret. `paillier` is used as given
// when supplied (no size check, so callers can exercise the session-start
// guard); otherwise a fresh keypair of `paillier_bits` is generated when the
// role needs one.
KeyShare ShareFromSecret(Scheme scheme, Role role, const Scalar& secret, Rng& rng,
                         std::optional<PaillierKeypair> paillier = std::nullopt,
                         size_t paillier_bits = kDefaultPaillierBits);

// x = SHA-256(master_seed || account_id) mod q, flagged recoverable. The
// exchange can re-derive it from the seed; the user trades privacy for
// recoverability.
KeyShare DeriveRecoverableShare(Scheme scheme, Role role, ByteView master_seed,
                                std::string_view account_id, Rng& rng,
                                size_t paillier_bits = kDefaultPaillierBits);

// ECDSA: x_own * peer_public. Schnorr: P_own + peer_public. Stores the result
// in own.shared_public and returns it. Repeating with the same peer is a no-op.
Point CombinePublicKey(KeyShare& own, const Point& peer_public);

// "cw1" + first 40 hex chars of SHA-256(encoding of the shared point).
std::string DeriveAddress(Scheme scheme, const Point& shared_public);

struct WalletDescriptor {
  Scheme scheme;
  Point shared_public;
  std::string address;
  int64_t created_at;  // unix seconds

  std::string ToJson() const;
};

WalletDescriptor DescribeWallet(const KeyShare& share, int64_t created_at);

}  // namespace coldwallet
