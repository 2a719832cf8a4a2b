#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "coldwallet/bytes.hpp"
#include "coldwallet/group.hpp"

namespace coldwallet {

// Chain-agnostic stand-in for a raw transaction.
struct Transaction {
  uint8_t version = 1;
  std::string asset;
  std::string source_address;
  std::string destination_address;
  uint64_t amount = 0;  // base units
  uint64_t nonce = 0;

  // amount > 0, addresses non-empty; Error(kInvalidArgument) otherwise.
  void Validate() const;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

// version(1) | asset | source | destination | amount(8 BE) | nonce(8 BE),
// text fields as u32-BE length + UTF-8 bytes.
Bytes TxCanonicalBytes(const Transaction& tx);
Transaction TxFromCanonicalBytes(ByteView bytes);

// HashToScalar(TxCanonicalBytes(tx)).
Scalar TxHash(const Transaction& tx, const Group& group);

// {"version":1,"asset":"BTC","source":"...","destination":"...","amount":1000,"nonce":7}
Transaction TxFromJson(std::string_view json);
std::string TxToJson(const Transaction& tx);

struct Policy {
  std::set<std::string> whitelist;
  std::optional<uint64_t> max_amount;
};

struct PolicyReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Violations are values; every failed rule is listed.
PolicyReport CheckPolicy(const Transaction& tx, const Policy& policy);

// One destination address per line; `max_amount <n>` sets the cap; blank
// lines and lines starting with '#' are ignored.
Policy ParsePolicy(std::string_view text);

}  // namespace coldwallet
