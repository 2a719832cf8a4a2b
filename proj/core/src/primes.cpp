#include "coldwallet/primes.hpp"

#include <vector>

#include "coldwallet/bigint.hpp"
#include "coldwallet/error.hpp"

namespace coldwallet {
namespace {

const std::vector<unsigned long>& SmallPrimes() {
  static const std::vector<unsigned long> primes = [] {
    constexpr unsigned long kLimit = 2000;
    std::vector<bool> composite(kLimit, false);
    std::vector<unsigned long> out;
    for (unsigned long i = 2; i < kLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (unsigned long j = i * i; j < kLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

bool MillerRabinRound(const mpz_class& n, const mpz_class& n_minus_1, const mpz_class& d,
                      unsigned long s, const mpz_class& base) {
  mpz_class x;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = (x * x) % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

}  // namespace

bool IsProbablePrime(const mpz_class& n, Rng& rng, int rounds) {
  if (n < 2) return false;
  for (unsigned long p : SmallPrimes()) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) return false;
  }

  // n - 1 = d * 2^s with d odd
  const mpz_class n_minus_1 = n - 1;
  const unsigned long s = mpz_scan1(n_minus_1.get_mpz_t(), 0);
  mpz_class d;
  mpz_fdiv_q_2exp(d.get_mpz_t(), n_minus_1.get_mpz_t(), s);

  const mpz_class base_range = n - 3;  // bases in [2, n-2]
  for (int round = 0; round < rounds; ++round) {
    const mpz_class base = RandomBelow(rng, base_range) + 2;
    if (!MillerRabinRound(n, n_minus_1, d, s, base)) return false;
  }
  return true;
}

mpz_class RandomPrime(size_t bits, Rng& rng, int rounds) {
  if (bits < 16) {
    throw Error(ErrorCode::kInvalidArgument, "prime size must be at least 16 bits");
  }
  while (true) {
    mpz_class candidate = RandomBits(rng, bits);
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (IsProbablePrime(candidate, rng, rounds)) return candidate;
  }
}

}  // namespace coldwallet
