#include "coldwallet/op_counter.hpp"

namespace coldwallet {

OpCounts& ThreadOpCounts() {
  thread_local OpCounts counts;
  return counts;
}

void ResetOpCounts() { ThreadOpCounts() = OpCounts{}; }

}  // namespace coldwallet
