#pragma once

#include <gmpxx.h>

#include <cstddef>

#include "coldwallet/random.hpp"

namespace coldwallet {

// Paillier with g = n + 1 and lambda = (p-1)(q-1), mu = lambda^-1 mod n.
//
// Caveat: PaillierScalarMul does not re-randomise its output. Callers that
// forward c^a to the key owner must fold in a fresh encryption first (the
// two-party ECDSA response does, through C1).

inline constexpr size_t kDefaultPaillierBits = 2048;
inline constexpr size_t kMinPaillierKeygenBits = 64;

class PaillierPublicKey {
 public:
  // Validates n > 1 and odd; g and n^2 are derived.
  static PaillierPublicKey FromModulus(mpz_class n);

  const mpz_class& n() const { return n_; }
  const mpz_class& g() const { return g_; }
  const mpz_class& n_squared() const { return n_squared_; }
  size_t bits() const;

  friend bool operator==(const PaillierPublicKey& a, const PaillierPublicKey& b) {
    return a.n_ == b.n_;
  }

 private:
  PaillierPublicKey() = default;

  mpz_class n_;
  mpz_class g_;
  mpz_class n_squared_;
};

class PaillierSecretKey {
 public:
  const mpz_class& p() const { return p_; }
  // Second prime factor, named q_p to keep it apart from the curve order q.
  const mpz_class& q_p() const { return q_p_; }
  const mpz_class& lambda() const { return lambda_; }
  const mpz_class& mu() const { return mu_; }

 private:
  friend struct PaillierKeypair;
  PaillierSecretKey() = default;

  mpz_class p_;
  mpz_class q_p_;
  mpz_class lambda_;
  mpz_class mu_;
};

struct PaillierKeypair {
  PaillierPublicKey pub;
  PaillierSecretKey sec;

  // Checks p != q_p, both prime, gcd(n, (p-1)(q_p-1)) = 1. No minimum size,
  // so hand-sized fixtures such as (11, 13) are accepted.
  static PaillierKeypair FromPrimes(const mpz_class& p, const mpz_class& q_p);
};

class PaillierCiphertext {
 public:
  // Enforces 0 < c < n^2 and gcd(c, n) = 1; Error(kMalformedCiphertext) otherwise.
  static PaillierCiphertext FromInteger(const PaillierPublicKey& pk, mpz_class c);
  // For values read off the wire before the key is known: only checks c > 0.
  // Every operation re-validates against its key.
  static PaillierCiphertext FromWire(mpz_class c);

  const mpz_class& value() const { return c_; }

  friend bool operator==(const PaillierCiphertext& a, const PaillierCiphertext& b) {
    return a.c_ == b.c_;
  }

 private:
  explicit PaillierCiphertext(mpz_class c) : c_(std::move(c)) {}
  mpz_class c_;
};

// |n| == bits exactly; bits must be even and >= kMinPaillierKeygenBits.
PaillierKeypair PaillierKeygen(size_t bits, Rng& rng);

PaillierCiphertext PaillierEncrypt(const PaillierPublicKey& pk, const mpz_class& m, Rng& rng);
// Caller-chosen r; requires 0 < r < n and gcd(r, n) = 1.
PaillierCiphertext PaillierEncryptWithRandomness(const PaillierPublicKey& pk, const mpz_class& m,
                                                 const mpz_class& r);

mpz_class PaillierDecrypt(const PaillierPublicKey& pk, const PaillierSecretKey& sk,
                          const PaillierCiphertext& c);

// Enc(m1) * Enc(m2) mod n^2 -> Enc(m1 + m2 mod n)
PaillierCiphertext PaillierAdd(const PaillierPublicKey& pk, const PaillierCiphertext& c1,
                               const PaillierCiphertext& c2);

// Enc(m)^a mod n^2 -> Enc(a * m mod n). a = 0 gives the trivial encryption 1.
PaillierCiphertext PaillierScalarMul(const PaillierPublicKey& pk, const PaillierCiphertext& c,
                                     const mpz_class& a);

}  // namespace coldwallet
