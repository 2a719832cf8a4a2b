#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace coldwallet {

// Injected randomness source. Protocol code never reaches for a global RNG;
// every operation that samples takes an Rng&.
class Rng {
 public:
  virtual ~Rng() = default;
  virtual void Fill(std::span<uint8_t> out) = 0;
};

// OS CSPRNG (libsodium randombytes).
class SystemRng final : public Rng {
 public:
  SystemRng();
  void Fill(std::span<uint8_t> out) override;
};

// ChaCha20 keystream under a fixed 32-byte seed. Reproducible; for tests and
// benchmarks only.
class SeededRng final : public Rng {
 public:
  explicit SeededRng(uint64_t seed);
  explicit SeededRng(const std::array<uint8_t, 32>& seed);
  void Fill(std::span<uint8_t> out) override;

 private:
  std::array<uint8_t, 32> key_{};
  uint64_t counter_ = 0;
};

// Idempotent libsodium initialisation; throws on failure.
void EnsureSodiumInitialized();

}  // namespace coldwallet
