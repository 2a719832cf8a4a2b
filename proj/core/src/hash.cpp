#include "coldwallet/hash.hpp"

#include <sodium.h>

#include "coldwallet/random.hpp"

namespace coldwallet {

struct Sha256Hasher::State {
  crypto_hash_sha256_state ctx;
};

Digest Sha256(ByteView data) {
  EnsureSodiumInitialized();
  Digest out;
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Sha256Hasher::Sha256Hasher() : state_(new State) {
  EnsureSodiumInitialized();
  crypto_hash_sha256_init(&state_->ctx);
}

Sha256Hasher::~Sha256Hasher() {
  sodium_memzero(state_, sizeof(State));
  delete state_;
}

Sha256Hasher& Sha256Hasher::Update(ByteView data) {
  crypto_hash_sha256_update(&state_->ctx, data.data(), data.size());
  return *this;
}

Digest Sha256Hasher::Finalize() {
  Digest out;
  crypto_hash_sha256_final(&state_->ctx, out.data());
  return out;
}

}  // namespace coldwallet
