#include "coldwallet/random.hpp"

#include <sodium.h>

#include <cstring>
#include <vector>

#include "coldwallet/error.hpp"

namespace coldwallet {

void EnsureSodiumInitialized() {
  static const int status = sodium_init();
  if (status < 0) {
    throw Error(ErrorCode::kRngFailure, "libsodium initialisation failed");
  }
}

SystemRng::SystemRng() { EnsureSodiumInitialized(); }

void SystemRng::Fill(std::span<uint8_t> out) { randombytes_buf(out.data(), out.size()); }

SeededRng::SeededRng(uint64_t seed) {
  EnsureSodiumInitialized();
  uint8_t seed_bytes[8];
  for (int i = 0; i < 8; ++i) seed_bytes[i] = static_cast<uint8_t>(seed >> (8 * i));
  crypto_hash_sha256(key_.data(), seed_bytes, sizeof(seed_bytes));
}

SeededRng::SeededRng(const std::array<uint8_t, 32>& seed) : key_(seed) { EnsureSodiumInitialized(); }

void SeededRng::Fill(std::span<uint8_t> out) {
  // One keystream call per request, nonce = request counter.
  uint8_t nonce[crypto_stream_chacha20_ietf_NONCEBYTES] = {0};
  for (int i = 0; i < 8; ++i) nonce[i] = static_cast<uint8_t>(counter_ >> (8 * i));
  ++counter_;
  crypto_stream_chacha20_ietf(out.data(), out.size(), nonce, key_.data());
}

}  // namespace coldwallet
