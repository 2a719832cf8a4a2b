#include <sodium.h>

#include <algorithm>

#include "coldwallet/bigint.hpp"
#include "coldwallet/error.hpp"
#include "coldwallet/group.hpp"
#include "coldwallet/op_counter.hpp"

namespace coldwallet {
namespace {

// l = 2^252 + 27742317777372353535851937790883648493
const mpz_class kOrder("1000000000000000000000000000000014def9dea2f79cd65812631a5cf5d3ed", 16);

constexpr size_t kEncodedLen = crypto_core_ristretto255_BYTES;

class Ristretto255Group final : public Group {
 public:
  Ristretto255Group() : Group(kOrder) { EnsureSodiumInitialized(); }

  CurveId id() const override { return CurveId::kRistretto255; }
  size_t point_bytes() const override { return kEncodedLen; }

  Point Generator() const override { return MulBase(Scalar(1)); }
  Point Identity() const override { return MakePoint(Bytes(kEncodedLen, 0)); }

  Point Add(const Point& a, const Point& b) const override {
    CheckCurve(a);
    CheckCurve(b);
    Bytes out(kEncodedLen);
    if (crypto_core_ristretto255_add(out.data(), a.encoding().data(), b.encoding().data()) != 0) {
      throw Error(ErrorCode::kInvalidPoint, "ristretto255 addition rejected its operands");
    }
    return MakePoint(std::move(out));
  }

  Point Negate(const Point& p) const override {
    CheckCurve(p);
    Bytes out(kEncodedLen);
    const Bytes zero(kEncodedLen, 0);
    if (crypto_core_ristretto255_sub(out.data(), zero.data(), p.encoding().data()) != 0) {
      throw Error(ErrorCode::kInvalidPoint, "ristretto255 negation rejected its operand");
    }
    return MakePoint(std::move(out));
  }

  Point Mul(const Scalar& k, const Point& p) const override {
    CheckCurve(p);
    ++ThreadOpCounts().ec_mul;
    const Bytes le = ToLittleEndian(k);
    Bytes out(kEncodedLen);
    // libsodium reports an identity result as failure; in a prime-order group
    // that only happens for k = 0 mod l or p = identity.
    if (crypto_scalarmult_ristretto255(out.data(), le.data(), p.encoding().data()) != 0) {
      return Identity();
    }
    return MakePoint(std::move(out));
  }

  Point MulBase(const Scalar& k) const override {
    ++ThreadOpCounts().ec_mul;
    const Bytes le = ToLittleEndian(k);
    Bytes out(kEncodedLen);
    if (crypto_scalarmult_ristretto255_base(out.data(), le.data()) != 0) {
      return Identity();
    }
    return MakePoint(std::move(out));
  }

  Point Decode(ByteView encoding) const override {
    if (encoding.size() != kEncodedLen) {
      throw Error(ErrorCode::kInvalidPoint, "expected 32-byte ristretto255 encoding");
    }
    const bool zero = std::all_of(encoding.begin(), encoding.end(), [](uint8_t b) { return b == 0; });
    if (!zero && crypto_core_ristretto255_is_valid_point(encoding.data()) != 1) {
      throw Error(ErrorCode::kInvalidPoint, "not a canonical ristretto255 encoding");
    }
    return MakePoint(Bytes(encoding.begin(), encoding.end()));
  }

 private:
  Bytes ToLittleEndian(const Scalar& k) const {
    Bytes le = EncodeBigEndian(Reduce(k.value()).value(), kScalarBytes);
    std::reverse(le.begin(), le.end());
    return le;
  }
};

}  // namespace

const Group& Ristretto255() {
  static const Ristretto255Group group;
  return group;
}

}  // namespace coldwallet
