#pragma once

#include <array>
#include <cstdint>

#include "coldwallet/bytes.hpp"

namespace coldwallet {

using Digest = std::array<uint8_t, 32>;

Digest Sha256(ByteView data);

// Incremental SHA-256 for concatenations such as encode(R) || encode(P) || m.
class Sha256Hasher {
 public:
  Sha256Hasher();
  ~Sha256Hasher();
  Sha256Hasher(const Sha256Hasher&) = delete;
  Sha256Hasher& operator=(const Sha256Hasher&) = delete;

  Sha256Hasher& Update(ByteView data);
  Digest Finalize();

 private:
  struct State;
  State* state_;
};

}  // namespace coldwallet
