#include "coldwallet/bigint.hpp"

#include "coldwallet/error.hpp"

namespace coldwallet {

Bytes EncodeBigEndian(const mpz_class& value) {
  if (sgn(value) < 0) {
    throw Error(ErrorCode::kInvalidArgument, "cannot encode negative integer");
  }
  if (sgn(value) == 0) return {};
  const size_t len = (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
  Bytes out(len);
  size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, value.get_mpz_t());
  out.resize(written);
  return out;
}

Bytes EncodeBigEndian(const mpz_class& value, size_t width) {
  Bytes raw = EncodeBigEndian(value);
  if (raw.size() > width) {
    throw Error(ErrorCode::kInvalidArgument, "integer does not fit in " + std::to_string(width) +
                                                 " bytes");
  }
  Bytes out(width - raw.size(), 0);
  out.insert(out.end(), raw.begin(), raw.end());
  return out;
}

mpz_class DecodeBigEndian(ByteView bytes) {
  mpz_class out;
  if (!bytes.empty()) {
    mpz_import(out.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return out;
}

size_t BitLength(const mpz_class& value) {
  if (sgn(value) == 0) return 0;
  return mpz_sizeinbase(value.get_mpz_t(), 2);
}

mpz_class RandomBits(Rng& rng, size_t bits) {
  if (bits == 0) return 0;
  Bytes buf((bits + 7) / 8);
  rng.Fill(buf);
  const size_t excess = buf.size() * 8 - bits;
  buf[0] &= static_cast<uint8_t>(0xFF >> excess);
  return DecodeBigEndian(buf);
}

mpz_class RandomBelow(Rng& rng, const mpz_class& bound) {
  if (sgn(bound) <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "RandomBelow requires a positive bound");
  }
  const size_t bits = BitLength(bound);
  while (true) {
    mpz_class candidate = RandomBits(rng, bits);
    if (candidate < bound) return candidate;
  }
}

mpz_class ModInverse(const mpz_class& value, const mpz_class& modulus) {
  mpz_class out;
  if (mpz_invert(out.get_mpz_t(), value.get_mpz_t(), modulus.get_mpz_t()) == 0) {
    throw Error(ErrorCode::kInvalidArgument, "value is not invertible modulo the given modulus");
  }
  return out;
}

}  // namespace coldwallet
