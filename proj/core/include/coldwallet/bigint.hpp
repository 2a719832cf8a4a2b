#pragma once

#include <gmpxx.h>

#include <cstddef>

#include "coldwallet/bytes.hpp"
#include "coldwallet/random.hpp"

namespace coldwallet {

// Big-endian magnitude without leading zeros (zero encodes as empty).
Bytes EncodeBigEndian(const mpz_class& value);

// Big-endian magnitude left-padded to exactly `width` bytes. Throws
// Error(kInvalidArgument) if the value does not fit or is negative.
Bytes EncodeBigEndian(const mpz_class& value, size_t width);

mpz_class DecodeBigEndian(ByteView bytes);

size_t BitLength(const mpz_class& value);

// Uniform in [0, bound) by rejection on the bit length of bound.
mpz_class RandomBelow(Rng& rng, const mpz_class& bound);

// Uniform odd-or-even integer of exactly `bits` random bits (top bit may be 0).
mpz_class RandomBits(Rng& rng, size_t bits);

mpz_class ModInverse(const mpz_class& value, const mpz_class& modulus);

}  // namespace coldwallet
