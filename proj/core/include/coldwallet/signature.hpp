#pragma once

#include <cstdint>
#include <string_view>

#include "coldwallet/bytes.hpp"
#include "coldwallet/group.hpp"
#include "coldwallet/random.hpp"

namespace coldwallet {

enum class Scheme : uint8_t {
  kEcdsa = 1,
  kSchnorr = 2,
};

std::string_view SchemeName(Scheme scheme);
Scheme ParseScheme(std::string_view name);

// ECDSA runs over secp256k1, Schnorr over ristretto255.
const Group& GroupForScheme(Scheme scheme);

// SHA-256(data) read big-endian, reduced mod q.
Scalar HashToScalar(ByteView data, const Group& group);

// (r, s) for ECDSA, (e, s) for Schnorr. Construction enforces nonzero
// components and, for ECDSA, the low-s form s <= (q-1)/2, so each message has
// exactly one well-formed ECDSA signature per nonce.
class Signature {
 public:
  static Signature Create(Scheme scheme, Scalar first, Scalar second, const Group& group);

  // 64 bytes: first || second, 32-byte big-endian each.
  static Signature FromBytes(Scheme scheme, ByteView bytes, const Group& group);
  Bytes ToBytes() const;

  Scheme scheme() const { return scheme_; }
  const Scalar& first() const { return first_; }
  const Scalar& second() const { return second_; }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  Signature(Scheme scheme, Scalar first, Scalar second)
      : scheme_(scheme), first_(std::move(first)), second_(std::move(second)) {}

  Scheme scheme_;
  Scalar first_;
  Scalar second_;
};

bool IsLowS(const Scalar& s, const Group& group);
// min{s, q - s}
Scalar NormalizeLowS(const Scalar& s, const Group& group);

Signature EcdsaSign(const Group& group, const Scalar& x, const Scalar& m, Rng& rng);
// Fixed-nonce variant for test vectors. A degenerate r or s is an error here
// rather than a retry.
Signature EcdsaSignWithNonce(const Group& group, const Scalar& x, const Scalar& m, const Scalar& k);

// Textbook verification with no low-s requirement; r and s may be any
// integers and anything outside [1, q-1] yields false.
bool EcdsaVerifyRaw(const Group& group, const Point& pub, const Scalar& m, const mpz_class& r,
                    const mpz_class& s);
bool EcdsaVerify(const Group& group, const Point& pub, const Scalar& m, const Signature& sig);

// e = H(encode(R) || encode(P) || m)
Scalar SchnorrChallenge(const Group& group, const Point& nonce_point, const Point& pub, ByteView m);

Signature SchnorrSign(const Group& group, const Scalar& x, const Point& pub, ByteView m, Rng& rng);
Signature SchnorrSignWithNonce(const Group& group, const Scalar& x, const Point& pub, ByteView m,
                               const Scalar& k);
bool SchnorrVerify(const Group& group, const Point& pub, ByteView m, const Signature& sig);

}  // namespace coldwallet
