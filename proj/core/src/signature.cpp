#include "coldwallet/signature.hpp"

#include "coldwallet/bigint.hpp"
#include "coldwallet/error.hpp"
#include "coldwallet/hash.hpp"

namespace coldwallet {
namespace {

constexpr int kMaxSignAttempts = 3;

Signature EcdsaSignOnce(const Group& group, const Scalar& x, const Scalar& m, const Scalar& k) {
  const Point nonce_point = group.MulBase(k);
  if (group.IsIdentity(nonce_point)) {
    throw Error(ErrorCode::kDegenerateSignature, "nonce point is the identity");
  }
  const Scalar r = group.Reduce(group.AffineX(nonce_point));
  if (r.IsZero()) {
    throw Error(ErrorCode::kDegenerateSignature, "r = 0");
  }
  const Scalar s = group.ScalarMul(group.ScalarInverse(k),
                                   group.ScalarAdd(m, group.ScalarMul(r, x)));
  if (s.IsZero()) {
    throw Error(ErrorCode::kDegenerateSignature, "s = 0");
  }
  return Signature::Create(Scheme::kEcdsa, r, NormalizeLowS(s, group), group);
}

void RequireNonZeroKey(const Scalar& x) {
  if (x.IsZero()) {
    throw Error(ErrorCode::kInvalidArgument, "private key must be nonzero");
  }
}

}  // namespace

std::string_view SchemeName(Scheme scheme) {
  switch (scheme) {
    case Scheme::kEcdsa: return "ecdsa";
    case Scheme::kSchnorr: return "schnorr";
  }
  return "unknown";
}

Scheme ParseScheme(std::string_view name) {
  if (name == "ecdsa") return Scheme::kEcdsa;
  if (name == "schnorr") return Scheme::kSchnorr;
  throw Error(ErrorCode::kConfig, "unknown scheme '" + std::string(name) + "'");
}

const Group& GroupForScheme(Scheme scheme) {
  switch (scheme) {
    case Scheme::kEcdsa: return Secp256k1();
    case Scheme::kSchnorr: return Ristretto255();
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown scheme");
}

Scalar HashToScalar(ByteView data, const Group& group) {
  const Digest digest = Sha256(data);
  return group.Reduce(DecodeBigEndian(digest));
}

Signature Signature::Create(Scheme scheme, Scalar first, Scalar second, const Group& group) {
  if (first.IsZero() || second.IsZero() || first.value() >= group.order() ||
      second.value() >= group.order()) {
    throw Error(ErrorCode::kInvalidScalar, "signature components must lie in [1, q-1]");
  }
  if (scheme == Scheme::kEcdsa && !IsLowS(second, group)) {
    throw Error(ErrorCode::kInvalidScalar, "ECDSA signature is not in low-s form");
  }
  return Signature(scheme, std::move(first), std::move(second));
}

Signature Signature::FromBytes(Scheme scheme, ByteView bytes, const Group& group) {
  if (bytes.size() != 2 * Group::kScalarBytes) {
    throw Error(ErrorCode::kInvalidArgument, "signature must be 64 bytes");
  }
  return Create(scheme, group.ScalarFromBytes(bytes.subspan(0, 32)),
                group.ScalarFromBytes(bytes.subspan(32, 32)), group);
}

Bytes Signature::ToBytes() const {
  Bytes out = EncodeBigEndian(first_.value(), 32);
  AppendBytes(EncodeBigEndian(second_.value(), 32), &out);
  return out;
}

bool IsLowS(const Scalar& s, const Group& group) { return s.value() <= (group.order() - 1) / 2; }

Scalar NormalizeLowS(const Scalar& s, const Group& group) {
  if (IsLowS(s, group)) return s;
  return group.ScalarNegate(s);
}

Signature EcdsaSign(const Group& group, const Scalar& x, const Scalar& m, Rng& rng) {
  RequireNonZeroKey(x);
  for (int attempt = 1;; ++attempt) {
    try {
      return EcdsaSignOnce(group, x, m, group.RandomNonZeroScalar(rng));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateSignature || attempt >= kMaxSignAttempts) throw;
    }
  }
}

Signature EcdsaSignWithNonce(const Group& group, const Scalar& x, const Scalar& m, const Scalar& k) {
  RequireNonZeroKey(x);
  if (k.IsZero()) {
    throw Error(ErrorCode::kInvalidArgument, "nonce must be nonzero");
  }
  return EcdsaSignOnce(group, x, m, k);
}

bool EcdsaVerifyRaw(const Group& group, const Point& pub, const Scalar& m, const mpz_class& r,
                    const mpz_class& s) {
  if (pub.curve() != group.id() || group.IsIdentity(pub)) return false;
  if (r < 1 || r >= group.order() || s < 1 || s >= group.order()) return false;
  const Scalar s_inv = group.ScalarInverse(Scalar(s));
  const Scalar u1 = group.ScalarMul(m, s_inv);
  const Scalar u2 = group.ScalarMul(Scalar(r), s_inv);
  const Point candidate = group.Add(group.MulBase(u1), group.Mul(u2, pub));
  if (group.IsIdentity(candidate)) return false;
  return group.Reduce(group.AffineX(candidate)).value() == r;
}

bool EcdsaVerify(const Group& group, const Point& pub, const Scalar& m, const Signature& sig) {
  if (sig.scheme() != Scheme::kEcdsa) return false;
  return EcdsaVerifyRaw(group, pub, m, sig.first().value(), sig.second().value());
}

Scalar SchnorrChallenge(const Group& group, const Point& nonce_point, const Point& pub, ByteView m) {
  Sha256Hasher hasher;
  hasher.Update(nonce_point.encoding()).Update(pub.encoding()).Update(m);
  const Digest digest = hasher.Finalize();
  return group.Reduce(DecodeBigEndian(digest));
}

Signature SchnorrSignWithNonce(const Group& group, const Scalar& x, const Point& pub, ByteView m,
                               const Scalar& k) {
  RequireNonZeroKey(x);
  if (group.MulBase(x) != pub) {
    throw Error(ErrorCode::kInconsistentShare, "public key does not match private key");
  }
  const Point nonce_point = group.MulBase(k);
  if (group.IsIdentity(nonce_point)) {
    throw Error(ErrorCode::kDegenerateSignature, "nonce point is the identity");
  }
  const Scalar e = SchnorrChallenge(group, nonce_point, pub, m);
  const Scalar s = group.ScalarAdd(k, group.ScalarMul(x, e));
  return Signature::Create(Scheme::kSchnorr, e, s, group);
}

Signature SchnorrSign(const Group& group, const Scalar& x, const Point& pub, ByteView m, Rng& rng) {
  for (int attempt = 1;; ++attempt) {
    try {
      return SchnorrSignWithNonce(group, x, pub, m, group.RandomNonZeroScalar(rng));
    } catch (const Error& e) {
      // e = 0 or s = 0 surface as kInvalidScalar from Signature::Create.
      const bool degenerate =
          e.code() == ErrorCode::kDegenerateSignature || e.code() == ErrorCode::kInvalidScalar;
      if (!degenerate || attempt >= kMaxSignAttempts) throw;
    }
  }
}

bool SchnorrVerify(const Group& group, const Point& pub, ByteView m, const Signature& sig) {
  if (sig.scheme() != Scheme::kSchnorr) return false;
  if (pub.curve() != group.id() || group.IsIdentity(pub)) return false;
  const Point candidate =
      group.Subtract(group.MulBase(sig.second()), group.Mul(sig.first(), pub));
  return SchnorrChallenge(group, candidate, pub, m) == sig.first();
}

}  // namespace coldwallet
