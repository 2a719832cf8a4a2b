#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coldwallet/envelope.hpp"
#include "coldwallet/keygen.hpp"
#include "coldwallet/op_counter.hpp"
#include "coldwallet/transaction.hpp"
#include "coldwallet/signature.hpp"

namespace coldwallet {

// Counts of E_m (modular exponentiation), M_s (modular scalar
// multiplication), M_ec (curve multiplication) and I_m (modular inversion).
struct OpTally {
  int modexp = 0;
  int scalar_mul = 0;
  int ec_mul = 0;
  int mod_inv = 0;

  OpTally& operator+=(const OpTally& other);
  OpTally& operator-=(const OpTally& other);
  friend OpTally operator+(OpTally a, const OpTally& b) { return a += b; }
  friend OpTally operator-(OpTally a, const OpTally& b) { return a -= b; }
  friend bool operator==(const OpTally&, const OpTally&) = default;

  // e.g. "3E_m+6M_s+4M_ec+2I_m"; zero terms are left out.
  std::string ToString() const;
};

enum class Party { kGateway, kCore };
enum class Method { kSingleParty, kTwoParty };

std::string_view PartyName(Party party);
std::string_view MethodName(Method method);

// Cost of one single-party signature verification.
OpTally VerifyCost(Scheme scheme);

struct ComplexityStep {
  std::string_view label;
  OpTally ops;
  bool plus_verify = false;
  // Part of `ops` computed once at key generation and cached in the share.
  OpTally at_keygen = {};
};

struct ComplexityRow {
  Method method;
  Scheme scheme;
  Party party;
  std::vector<ComplexityStep> steps;

  OpTally Total() const;
  OpTally AtKeygen() const;
  OpTally PerSession() const { return Total() - AtKeygen(); }
};

// Per-party, per-step operation counts of the signing flows, audited by
// reading the code in sign.cpp and signature.cpp.
std::span<const ComplexityRow> ComplexityTable();
const ComplexityRow& FindComplexityRow(Method method, Scheme scheme, Party party);

// The columns the runtime counters observe (M_s is not instrumented).
bool MatchesMeasured(const OpTally& expected, const OpCounts& measured);

std::string RenderComplexityTable();

struct PartyCounts {
  OpCounts gateway_keygen;  // producing the cached C_key
  OpCounts gateway;         // init + finalize
  OpCounts core;            // respond
};

// Runs one signing session between the two shares on this thread and tallies
// the instrumented operations each side performed, plus the keygen-time
// encryption of the initiator's share.
PartyCounts CountSessionOps(const KeyShare& initiator, const KeyShare& core,
                            const Transaction& tx, const Policy& policy, Rng& rng);

// Communication cost of one signing step, split the way the theory row
// splits it: transaction data (raw tx and its hash) + the multisig values +
// envelope framing.
struct SizeRow {
  Scheme scheme;
  int step;                    // 1 = gateway to core, 2 = core to gateway
  size_t envelope_bytes;       // whole envelope as encoded
  size_t envelope_packed;      // after PackForTransfer
  size_t tx_bytes;             // raw tx + hash field values
  size_t extra_payload;        // multisig field values
  size_t extra_packed;         // multisig values alone, deflated if smaller
  size_t framing;              // envelope_bytes - all field values
  double theory_bytes;         // multisig terms of the theory row, bits / 8
  size_t impl_row_as_bytes;  // implementation row read literally
  size_t impl_row_as_bits;   // same row with the 256-bit terms read as bits
};

// `paillier_bits` is the bit length of n (ignored for Schnorr).
SizeRow MeasureSizes(const Envelope& envelope, size_t paillier_bits);

// One signing session; returns the step-one and step-two rows.
std::vector<SizeRow> MeasureSessionSizes(const KeyShare& initiator, const KeyShare& core,
                                         const Transaction& tx, const Policy& policy, Rng& rng);

std::string RenderSizeTable(std::span<const SizeRow> rows);

}  // namespace coldwallet
