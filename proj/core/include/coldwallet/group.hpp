#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "coldwallet/bytes.hpp"
#include "coldwallet/random.hpp"

namespace coldwallet {

enum class CurveId : uint8_t {
  kSecp256k1 = 1,
  kRistretto255 = 2,
};

std::string_view CurveName(CurveId curve);

// Element of Z_q for the group it came from. The value is always reduced;
// construct through Group::Reduce / Group::ScalarFromBytes for untrusted input.
class Scalar {
 public:
  Scalar() = default;
  explicit Scalar(mpz_class value) : value_(std::move(value)) {}

  const mpz_class& value() const { return value_; }
  bool IsZero() const { return sgn(value_) == 0; }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.value_ == b.value_; }

 private:
  mpz_class value_;
};

// A Scalar that must never cross the air gap. It has no wire encoder; the
// only way to get bytes out is an explicit Expose(), used by share storage
// and the protocol arithmetic.
class SecretScalar {
 public:
  explicit SecretScalar(Scalar value) : value_(std::move(value)) {}

  const Scalar& Expose() const { return value_; }

  friend bool operator==(const SecretScalar&, const SecretScalar&) = default;

 private:
  Scalar value_;
};

// Group element held in its canonical encoding: 33-byte compressed SEC1 for
// secp256k1 (a single 0x00 byte for the point at infinity), 32 bytes for
// ristretto255 (all zeros for the identity). Canonical encodings make byte
// equality the same as group equality.
class Point {
 public:
  CurveId curve() const { return curve_; }
  const Bytes& encoding() const { return encoding_; }

  friend bool operator==(const Point& a, const Point& b) {
    return a.curve_ == b.curve_ && a.encoding_ == b.encoding_;
  }

 private:
  friend class Group;
  Point(CurveId curve, Bytes encoding) : curve_(curve), encoding_(std::move(encoding)) {}

  CurveId curve_;
  Bytes encoding_;
};

// Prime-order group plus its scalar field. The two-party protocols are written
// against this interface only.
class Group {
 public:
  virtual ~Group() = default;
  Group(const Group&) = delete;
  Group& operator=(const Group&) = delete;

  virtual CurveId id() const = 0;
  std::string_view name() const { return CurveName(id()); }
  const mpz_class& order() const { return order_; }
  static constexpr size_t kScalarBytes = 32;
  virtual size_t point_bytes() const = 0;

  virtual Point Generator() const = 0;
  virtual Point Identity() const = 0;
  bool IsIdentity(const Point& p) const;

  virtual Point Add(const Point& a, const Point& b) const = 0;
  virtual Point Negate(const Point& p) const = 0;
  Point Subtract(const Point& a, const Point& b) const { return Add(a, Negate(b)); }
  virtual Point Mul(const Scalar& k, const Point& p) const = 0;
  virtual Point MulBase(const Scalar& k) const = 0;

  // Accepts only canonical encodings of points in the group (identity
  // included); throws Error(kInvalidPoint) otherwise.
  virtual Point Decode(ByteView encoding) const = 0;

  // x-coordinate of an affine point, for ECDSA's r. Only meaningful on
  // Weierstrass curves; other groups throw Error(kInvalidArgument).
  virtual mpz_class AffineX(const Point& p) const;

  Scalar Reduce(const mpz_class& value) const;
  // Exactly 32 big-endian bytes with value < q, else Error(kInvalidScalar).
  Scalar ScalarFromBytes(ByteView bytes) const;
  Bytes ScalarToBytes(const Scalar& s) const;

  Scalar ScalarAdd(const Scalar& a, const Scalar& b) const;
  Scalar ScalarSub(const Scalar& a, const Scalar& b) const;
  Scalar ScalarMul(const Scalar& a, const Scalar& b) const;
  Scalar ScalarNegate(const Scalar& a) const;
  Scalar ScalarInverse(const Scalar& a) const;

  Scalar RandomScalar(Rng& rng) const;
  Scalar RandomNonZeroScalar(Rng& rng) const;

 protected:
  explicit Group(mpz_class order) : order_(std::move(order)) {}

  Point MakePoint(Bytes encoding) const { return Point(id(), std::move(encoding)); }
  void CheckCurve(const Point& p) const;

 private:
  mpz_class order_;
};

const Group& Secp256k1();
const Group& Ristretto255();
const Group& GroupFor(CurveId curve);

}  // namespace coldwallet
