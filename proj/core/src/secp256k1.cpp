#include <array>

#include "coldwallet/bigint.hpp"
#include "coldwallet/error.hpp"
#include "coldwallet/group.hpp"
#include "coldwallet/op_counter.hpp"

namespace coldwallet {
namespace {

// y^2 = x^3 + 7 over F_p. Jacobian coordinates, 4-bit fixed-window scalar
// multiplication. Not constant time.

const mpz_class kP("fffffffffffffffffffffffffffffffffffffffffffffffffffffffefffffc2f", 16);
const mpz_class kN("fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141", 16);
const mpz_class kGx("79be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798", 16);
const mpz_class kGy("483ada7726a3c4655da4fbfc0e1108a8fd17b448a68554199c47d08ffb10d4b8", 16);
const mpz_class kSqrtExp = (kP + 1) / 4;

constexpr size_t kCompressedLen = 33;
constexpr unsigned kWindowBits = 4;

mpz_class Mod(const mpz_class& v) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), kP.get_mpz_t());
  return r;
}

struct Affine {
  mpz_class x;
  mpz_class y;
  bool infinity = false;
};

struct Jacobian {
  mpz_class x;
  mpz_class y;
  mpz_class z;  // zero at infinity

  bool IsInfinity() const { return sgn(z) == 0; }
};

Jacobian ToJacobian(const Affine& a) {
  if (a.infinity) return Jacobian{1, 1, 0};
  return Jacobian{a.x, a.y, 1};
}

Affine ToAffine(const Jacobian& j) {
  if (j.IsInfinity()) return Affine{0, 0, true};
  const mpz_class zinv = ModInverse(j.z, kP);
  const mpz_class zinv2 = Mod(zinv * zinv);
  return Affine{Mod(j.x * zinv2), Mod(j.y * Mod(zinv2 * zinv)), false};
}

Jacobian Double(const Jacobian& p) {
  if (p.IsInfinity() || sgn(p.y) == 0) return Jacobian{1, 1, 0};
  const mpz_class a = Mod(p.x * p.x);
  const mpz_class b = Mod(p.y * p.y);
  const mpz_class c = Mod(b * b);
  const mpz_class t = p.x + b;
  const mpz_class d = Mod(2 * (t * t - a - c));
  const mpz_class e = Mod(3 * a);
  const mpz_class f = Mod(e * e);
  Jacobian r;
  r.x = Mod(f - 2 * d);
  r.y = Mod(e * (d - r.x) - 8 * c);
  r.z = Mod(2 * p.y * p.z);
  return r;
}

Jacobian AddJ(const Jacobian& p, const Jacobian& q) {
  if (p.IsInfinity()) return q;
  if (q.IsInfinity()) return p;
  const mpz_class z1z1 = Mod(p.z * p.z);
  const mpz_class z2z2 = Mod(q.z * q.z);
  const mpz_class u1 = Mod(p.x * z2z2);
  const mpz_class u2 = Mod(q.x * z1z1);
  const mpz_class s1 = Mod(p.y * Mod(q.z * z2z2));
  const mpz_class s2 = Mod(q.y * Mod(p.z * z1z1));
  if (u1 == u2) {
    if (s1 != s2) return Jacobian{1, 1, 0};
    return Double(p);
  }
  const mpz_class h = Mod(u2 - u1);
  const mpz_class i = Mod(4 * h * h);
  const mpz_class j = Mod(h * i);
  const mpz_class r = Mod(2 * (s2 - s1));
  const mpz_class v = Mod(u1 * i);
  Jacobian out;
  out.x = Mod(r * r - j - 2 * v);
  out.y = Mod(r * (v - out.x) - 2 * s1 * j);
  const mpz_class zs = p.z + q.z;
  out.z = Mod((zs * zs - z1z1 - z2z2) * h);
  return out;
}

Jacobian ScalarMulJ(const mpz_class& k, const Affine& base) {
  if (sgn(k) == 0 || base.infinity) return Jacobian{1, 1, 0};
  std::array<Jacobian, (1u << kWindowBits)> table;
  table[0] = Jacobian{1, 1, 0};
  table[1] = ToJacobian(base);
  for (size_t i = 2; i < table.size(); ++i) table[i] = AddJ(table[i - 1], table[1]);

  const size_t bits = mpz_sizeinbase(k.get_mpz_t(), 2);
  const size_t windows = (bits + kWindowBits - 1) / kWindowBits;
  Jacobian acc{1, 1, 0};
  for (size_t w = windows; w-- > 0;) {
    for (unsigned d = 0; d < kWindowBits; ++d) acc = Double(acc);
    unsigned digit = 0;
    for (unsigned b = kWindowBits; b-- > 0;) {
      digit = (digit << 1) | static_cast<unsigned>(mpz_tstbit(k.get_mpz_t(), w * kWindowBits + b));
    }
    if (digit != 0) acc = AddJ(acc, table[digit]);
  }
  return acc;
}

class Secp256k1Group final : public Group {
 public:
  Secp256k1Group() : Group(kN), generator_(Encode(Affine{kGx, kGy, false})) {}

  CurveId id() const override { return CurveId::kSecp256k1; }
  size_t point_bytes() const override { return kCompressedLen; }

  Point Generator() const override { return generator_; }
  Point Identity() const override { return MakePoint(Bytes{0x00}); }

  Point Add(const Point& a, const Point& b) const override {
    return Encode(ToAffine(AddJ(ToJacobian(Unpack(a)), ToJacobian(Unpack(b)))));
  }

  Point Negate(const Point& p) const override {
    Affine a = Unpack(p);
    if (a.infinity) return p;
    a.y = Mod(-a.y);
    return Encode(a);
  }

  Point Mul(const Scalar& k, const Point& p) const override {
    ++ThreadOpCounts().ec_mul;
    return Encode(ToAffine(ScalarMulJ(Reduce(k.value()).value(), Unpack(p))));
  }

  Point MulBase(const Scalar& k) const override { return Mul(k, generator_); }

  Point Decode(ByteView encoding) const override { return Encode(Parse(encoding)); }

  mpz_class AffineX(const Point& p) const override {
    CheckCurve(p);
    if (p.encoding().size() != kCompressedLen) {
      throw Error(ErrorCode::kInvalidPoint, "point at infinity has no x-coordinate");
    }
    return DecodeBigEndian(ByteView(p.encoding()).subspan(1));
  }

 private:
  Point Encode(const Affine& a) const {
    if (a.infinity) return Identity();
    Bytes out;
    out.reserve(kCompressedLen);
    out.push_back(mpz_odd_p(a.y.get_mpz_t()) ? 0x03 : 0x02);
    AppendBytes(EncodeBigEndian(a.x, 32), &out);
    return MakePoint(std::move(out));
  }

  Affine Unpack(const Point& p) const {
    CheckCurve(p);
    return Parse(p.encoding());
  }

  static Affine Parse(ByteView enc) {
    if (enc.size() == 1 && enc[0] == 0x00) return Affine{0, 0, true};
    if (enc.size() != kCompressedLen || (enc[0] != 0x02 && enc[0] != 0x03)) {
      throw Error(ErrorCode::kInvalidPoint, "expected 33-byte compressed secp256k1 point");
    }
    const mpz_class x = DecodeBigEndian(enc.subspan(1));
    if (x >= kP) {
      throw Error(ErrorCode::kInvalidPoint, "x-coordinate not reduced");
    }
    const mpz_class rhs = Mod(x * x * x + 7);
    mpz_class y;
    mpz_powm(y.get_mpz_t(), rhs.get_mpz_t(), kSqrtExp.get_mpz_t(), kP.get_mpz_t());
    if (Mod(y * y) != rhs) {
      throw Error(ErrorCode::kInvalidPoint, "x-coordinate is not on secp256k1");
    }
    const bool want_odd = enc[0] == 0x03;
    if (static_cast<bool>(mpz_odd_p(y.get_mpz_t())) != want_odd) y = kP - y;
    return Affine{x, y, false};
  }

  Point generator_;
};

}  // namespace

const Group& Secp256k1() {
  static const Secp256k1Group group;
  return group;
}

}  // namespace coldwallet
