#pragma once

#include <cstdint>

namespace coldwallet {

// Per-thread tallies of the expensive primitives, used to audit the static
// operation-count table in complexity.hpp against what the code really does.
struct OpCounts {
  uint64_t modexp = 0;     // Paillier modular exponentiation (E_m)
  uint64_t ec_mul = 0;     // elliptic-curve scalar multiplication (M_ec)
  uint64_t mod_inv = 0;    // scalar-field inversion (I_m)

  friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

OpCounts& ThreadOpCounts();
void ResetOpCounts();

}  // namespace coldwallet
