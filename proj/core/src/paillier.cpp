#include "coldwallet/paillier.hpp"

#include "coldwallet/bigint.hpp"
#include "coldwallet/error.hpp"
#include "coldwallet/op_counter.hpp"
#include "coldwallet/primes.hpp"

namespace coldwallet {
namespace {

mpz_class PowMod(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
  ++ThreadOpCounts().modexp;
  mpz_class out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return out;
}

mpz_class Gcd(const mpz_class& a, const mpz_class& b) {
  mpz_class out;
  mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

void CheckPlaintext(const PaillierPublicKey& pk, const mpz_class& m) {
  if (sgn(m) < 0 || m >= pk.n()) {
    throw Error(ErrorCode::kInvalidArgument, "Paillier plaintext must lie in [0, n)");
  }
}

}  // namespace

PaillierPublicKey PaillierPublicKey::FromModulus(mpz_class n) {
  if (n <= 1 || mpz_even_p(n.get_mpz_t())) {
    throw Error(ErrorCode::kMalformedField, "Paillier modulus must be odd and greater than 1");
  }
  PaillierPublicKey pk;
  pk.g_ = n + 1;
  pk.n_squared_ = n * n;
  pk.n_ = std::move(n);
  return pk;
}

size_t PaillierPublicKey::bits() const { return BitLength(n_); }

PaillierKeypair PaillierKeypair::FromPrimes(const mpz_class& p, const mpz_class& q_p) {
  if (p == q_p) {
    throw Error(ErrorCode::kInvalidArgument, "Paillier primes must be distinct");
  }
  SystemRng rng;
  if (!IsProbablePrime(p, rng) || !IsProbablePrime(q_p, rng)) {
    throw Error(ErrorCode::kInvalidArgument, "Paillier factors must be prime");
  }
  const mpz_class n = p * q_p;
  const mpz_class lambda = (p - 1) * (q_p - 1);
  if (Gcd(n, lambda) != 1) {
    throw Error(ErrorCode::kInvalidArgument, "gcd(n, (p-1)(q_p-1)) must be 1");
  }
  PaillierSecretKey sec;
  sec.p_ = p;
  sec.q_p_ = q_p;
  sec.lambda_ = lambda;
  sec.mu_ = ModInverse(lambda, n);
  return PaillierKeypair{PaillierPublicKey::FromModulus(n), std::move(sec)};
}

PaillierCiphertext PaillierCiphertext::FromInteger(const PaillierPublicKey& pk, mpz_class c) {
  if (sgn(c) <= 0 || c >= pk.n_squared()) {
    throw Error(ErrorCode::kMalformedCiphertext, "ciphertext must lie in (0, n^2)");
  }
  if (Gcd(c, pk.n()) != 1) {
    throw Error(ErrorCode::kMalformedCiphertext, "ciphertext is not a unit modulo n");
  }
  return PaillierCiphertext(std::move(c));
}

PaillierCiphertext PaillierCiphertext::FromWire(mpz_class c) {
  if (sgn(c) <= 0) {
    throw Error(ErrorCode::kMalformedCiphertext, "ciphertext must be positive");
  }
  return PaillierCiphertext(std::move(c));
}

PaillierKeypair PaillierKeygen(size_t bits, Rng& rng) {
  if (bits < kMinPaillierKeygenBits || bits % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "Paillier modulus size must be even and at least 64 bits");
  }
  while (true) {
    const mpz_class p = RandomPrime(bits / 2, rng);
    const mpz_class q_p = RandomPrime(bits / 2, rng);
    if (p == q_p) continue;
    const mpz_class n = p * q_p;
    if (Gcd(n, (p - 1) * (q_p - 1)) != 1) continue;
    return PaillierKeypair::FromPrimes(p, q_p);
  }
}

PaillierCiphertext PaillierEncryptWithRandomness(const PaillierPublicKey& pk, const mpz_class& m,
                                                 const mpz_class& r) {
  CheckPlaintext(pk, m);
  if (sgn(r) <= 0 || r >= pk.n() || Gcd(r, pk.n()) != 1) {
    throw Error(ErrorCode::kInvalidArgument, "Paillier randomness must be a unit in (0, n)");
  }
  const mpz_class gm = PowMod(pk.g(), m, pk.n_squared());
  const mpz_class rn = PowMod(r, pk.n(), pk.n_squared());
  return PaillierCiphertext::FromInteger(pk, (gm * rn) % pk.n_squared());
}

PaillierCiphertext PaillierEncrypt(const PaillierPublicKey& pk, const mpz_class& m, Rng& rng) {
  CheckPlaintext(pk, m);
  while (true) {
    const mpz_class r = RandomBelow(rng, pk.n());
    if (sgn(r) != 0 && Gcd(r, pk.n()) == 1) return PaillierEncryptWithRandomness(pk, m, r);
  }
}

mpz_class PaillierDecrypt(const PaillierPublicKey& pk, const PaillierSecretKey& sk,
                          const PaillierCiphertext& c) {
  // Re-check: the ciphertext may have been built against another key.
  const PaillierCiphertext checked = PaillierCiphertext::FromInteger(pk, c.value());
  const mpz_class u = PowMod(checked.value(), sk.lambda(), pk.n_squared());
  const mpz_class numerator = u - 1;
  if (mpz_divisible_p(numerator.get_mpz_t(), pk.n().get_mpz_t()) == 0) {
    throw Error(ErrorCode::kMalformedCiphertext, "c^lambda mod n^2 is not 1 mod n");
  }
  mpz_class l;
  mpz_divexact(l.get_mpz_t(), numerator.get_mpz_t(), pk.n().get_mpz_t());
  return (l * sk.mu()) % pk.n();
}

PaillierCiphertext PaillierAdd(const PaillierPublicKey& pk, const PaillierCiphertext& c1,
                               const PaillierCiphertext& c2) {
  PaillierCiphertext::FromInteger(pk, c1.value());
  PaillierCiphertext::FromInteger(pk, c2.value());
  return PaillierCiphertext::FromInteger(pk, (c1.value() * c2.value()) % pk.n_squared());
}

PaillierCiphertext PaillierScalarMul(const PaillierPublicKey& pk, const PaillierCiphertext& c,
                                     const mpz_class& a) {
  if (sgn(a) < 0) {
    throw Error(ErrorCode::kInvalidArgument, "Paillier scalar must be non-negative");
  }
  PaillierCiphertext::FromInteger(pk, c.value());
  return PaillierCiphertext::FromInteger(pk, PowMod(c.value(), a, pk.n_squared()));
}

}  // namespace coldwallet
