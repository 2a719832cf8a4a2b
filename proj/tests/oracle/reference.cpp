#include "reference.hpp"

#include <sodium.h>

#include <stdexcept>

namespace oracle {

const mpz_class& K1Prime() {
  static const mpz_class p(
      "fffffffffffffffffffffffffffffffffffffffffffffffffffffffefffffc2f", 16);
  return p;
}

const mpz_class& K1Order() {
  static const mpz_class n(
      "fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141", 16);
  return n;
}

namespace {

mpz_class Mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r = a % m;
  if (r < 0) r += m;
  return r;
}

mpz_class Inv(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw std::runtime_error("not invertible");
  }
  return r;
}

Bytes Le32(const mpz_class& v) {
  Bytes be = Be32(v);
  return Bytes(be.rbegin(), be.rend());
}

}  // namespace

Affine K1Generator() {
  return {mpz_class("79be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798", 16),
          mpz_class("483ada7726a3c4655da4fbfc0e1108a8fd17b448a68554199c47d08ffb10d4b8", 16),
          false};
}

Affine K1Add(const Affine& a, const Affine& b) {
  const mpz_class& p = K1Prime();
  if (a.infinity) return b;
  if (b.infinity) return a;
  mpz_class lambda;
  if (a.x == b.x) {
    if (Mod(a.y + b.y, p) == 0) return {};
    lambda = Mod(3 * a.x * a.x * Inv(Mod(2 * a.y, p), p), p);
  } else {
    lambda = Mod((b.y - a.y) * Inv(Mod(b.x - a.x, p), p), p);
  }
  mpz_class x = Mod(lambda * lambda - a.x - b.x, p);
  mpz_class y = Mod(lambda * (a.x - x) - a.y, p);
  return {x, y, false};
}

Affine K1Mul(mpz_class k, Affine p) {
  k = Mod(k, K1Order());
  Affine acc;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) acc = K1Add(acc, p);
    p = K1Add(p, p);
    k >>= 1;
  }
  return acc;
}

Bytes K1Compress(const Affine& p) {
  if (p.infinity) return Bytes{0};
  Bytes out{static_cast<uint8_t>(mpz_odd_p(p.y.get_mpz_t()) ? 3 : 2)};
  Bytes x = Be32(p.x);
  out.insert(out.end(), x.begin(), x.end());
  return out;
}

Affine K1Decompress(const Bytes& enc) {
  const mpz_class& p = K1Prime();
  mpz_class x;
  mpz_import(x.get_mpz_t(), 32, 1, 1, 1, 0, enc.data() + 1);
  mpz_class rhs = Mod(x * x * x + 7, p);
  mpz_class y;
  mpz_class e = (p + 1) / 4;
  mpz_powm(y.get_mpz_t(), rhs.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
  if (Mod(y * y, p) != rhs) throw std::runtime_error("not on curve");
  if ((mpz_odd_p(y.get_mpz_t()) ? 3 : 2) != enc[0]) y = p - y;
  return {x, y, false};
}

mpz_class Sha256Mod(const Bytes& data, const mpz_class& modulus) {
  uint8_t digest[32];
  crypto_hash_sha256(digest, data.data(), data.size());
  mpz_class v;
  mpz_import(v.get_mpz_t(), 32, 1, 1, 1, 0, digest);
  return Mod(v, modulus);
}

std::pair<mpz_class, mpz_class> EcdsaSign(const mpz_class& x, const mpz_class& m,
                                          const mpz_class& k) {
  const mpz_class& n = K1Order();
  mpz_class r = Mod(K1Mul(k, K1Generator()).x, n);
  mpz_class s = Mod(Inv(k, n) * (m + r * x), n);
  if (s > n - s) s = n - s;
  return {r, s};
}

const mpz_class& R255Order() {
  static const mpz_class l(
      "1000000000000000000000000000000014def9dea2f79cd65812631a5cf5d3ed", 16);
  return l;
}

Bytes R255Base(const mpz_class& k) {
  if (sodium_init() < 0) throw std::runtime_error("sodium");
  Bytes out(32);
  Bytes s = Le32(Mod(k, R255Order()));
  if (crypto_scalarmult_ristretto255_base(out.data(), s.data()) != 0) return Bytes(32, 0);
  return out;
}

Bytes R255Add(const Bytes& a, const Bytes& b) {
  Bytes out(32);
  if (crypto_core_ristretto255_add(out.data(), a.data(), b.data()) != 0) {
    throw std::runtime_error("bad point");
  }
  return out;
}

std::pair<mpz_class, mpz_class> SchnorrSign(const mpz_class& x, const Bytes& msg,
                                            const mpz_class& k) {
  const mpz_class& l = R255Order();
  Bytes preimage = R255Base(k);
  Bytes pub = R255Base(x);
  preimage.insert(preimage.end(), pub.begin(), pub.end());
  preimage.insert(preimage.end(), msg.begin(), msg.end());
  mpz_class e = Sha256Mod(preimage, l);
  return {e, Mod(k + x * e, l)};
}

Bytes Hex(const std::string& hex) {
  Bytes out;
  for (size_t i = 0; i + 1 < hex.size(); i += 2) {
    out.push_back(static_cast<uint8_t>(std::stoi(hex.substr(i, 2), nullptr, 16)));
  }
  return out;
}

std::string ToHex(const Bytes& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (uint8_t b : bytes) {
    out += digits[b >> 4];
    out += digits[b & 15];
  }
  return out;
}

Bytes Be32(const mpz_class& v) {
  Bytes out(32, 0);
  size_t count = 0;
  Bytes tmp((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8 + 1);
  mpz_export(tmp.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
  if (count > 32) throw std::runtime_error("too wide");
  std::copy(tmp.begin(), tmp.begin() + static_cast<long>(count), out.end() - static_cast<long>(count));
  return out;
}

}  // namespace oracle
