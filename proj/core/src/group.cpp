#include "coldwallet/group.hpp"

#include "coldwallet/bigint.hpp"
#include "coldwallet/error.hpp"
#include "coldwallet/op_counter.hpp"

namespace coldwallet {

std::string_view CurveName(CurveId curve) {
  switch (curve) {
    case CurveId::kSecp256k1: return "secp256k1";
    case CurveId::kRistretto255: return "ristretto255";
  }
  return "unknown";
}

const Group& GroupFor(CurveId curve) {
  switch (curve) {
    case CurveId::kSecp256k1: return Secp256k1();
    case CurveId::kRistretto255: return Ristretto255();
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown curve id");
}

bool Group::IsIdentity(const Point& p) const {
  CheckCurve(p);
  return p == Identity();
}

mpz_class Group::AffineX(const Point&) const {
  throw Error(ErrorCode::kInvalidArgument, std::string(name()) + " has no affine x-coordinate");
}

void Group::CheckCurve(const Point& p) const {
  if (p.curve() != id()) {
    throw Error(ErrorCode::kInvalidPoint, "point belongs to " + std::string(CurveName(p.curve())) +
                                              ", expected " + std::string(name()));
  }
}

Scalar Group::Reduce(const mpz_class& value) const {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), value.get_mpz_t(), order_.get_mpz_t());
  return Scalar(std::move(r));
}

Scalar Group::ScalarFromBytes(ByteView bytes) const {
  if (bytes.size() != kScalarBytes) {
    throw Error(ErrorCode::kInvalidScalar, "scalar must be 32 bytes");
  }
  mpz_class v = DecodeBigEndian(bytes);
  if (v >= order_) {
    throw Error(ErrorCode::kInvalidScalar, "scalar is not reduced modulo the group order");
  }
  return Scalar(std::move(v));
}

Bytes Group::ScalarToBytes(const Scalar& s) const { return EncodeBigEndian(s.value(), kScalarBytes); }

Scalar Group::ScalarAdd(const Scalar& a, const Scalar& b) const { return Reduce(a.value() + b.value()); }

Scalar Group::ScalarSub(const Scalar& a, const Scalar& b) const { return Reduce(a.value() - b.value()); }

Scalar Group::ScalarMul(const Scalar& a, const Scalar& b) const { return Reduce(a.value() * b.value()); }

Scalar Group::ScalarNegate(const Scalar& a) const { return Reduce(-a.value()); }

Scalar Group::ScalarInverse(const Scalar& a) const {
  if (a.IsZero()) {
    throw Error(ErrorCode::kInvalidScalar, "zero has no inverse");
  }
  ++ThreadOpCounts().mod_inv;
  return Scalar(ModInverse(a.value(), order_));
}

Scalar Group::RandomScalar(Rng& rng) const { return Scalar(RandomBelow(rng, order_)); }

Scalar Group::RandomNonZeroScalar(Rng& rng) const {
  while (true) {
    Scalar s = RandomScalar(rng);
    if (!s.IsZero()) return s;
  }
}

}  // namespace coldwallet
