#pragma once

#include <gmpxx.h>

#include <cstddef>

#include "coldwallet/random.hpp"

namespace coldwallet {

inline constexpr int kMillerRabinRounds = 40;

// Trial division by small primes followed by `rounds` Miller-Rabin rounds
// with random bases. False-positive probability <= 4^-rounds.
bool IsProbablePrime(const mpz_class& n, Rng& rng, int rounds = kMillerRabinRounds);

// Random prime of exactly `bits` bits with the top two bits set, so the
// product of two such primes has exactly 2*bits bits.
mpz_class RandomPrime(size_t bits, Rng& rng, int rounds = kMillerRabinRounds);

}  // namespace coldwallet
