#include "coldwallet/complexity.hpp"

#include <cstdio>
#include <sstream>

#include "coldwallet/compress.hpp"
#include "coldwallet/bigint.hpp"
#include "coldwallet/error.hpp"
#include "coldwallet/messages.hpp"
#include "coldwallet/sign.hpp"

namespace coldwallet {

OpTally& OpTally::operator+=(const OpTally& other) {
  modexp += other.modexp;
  scalar_mul += other.scalar_mul;
  ec_mul += other.ec_mul;
  mod_inv += other.mod_inv;
  return *this;
}

OpTally& OpTally::operator-=(const OpTally& other) {
  modexp -= other.modexp;
  scalar_mul -= other.scalar_mul;
  ec_mul -= other.ec_mul;
  mod_inv -= other.mod_inv;
  return *this;
}

std::string OpTally::ToString() const {
  std::string out;
  auto term = [&out](int count, std::string_view symbol) {
    if (count == 0) return;
    if (!out.empty()) out += '+';
    if (count != 1) out += std::to_string(count);
    out += symbol;
  };
  term(modexp, "E_m");
  term(scalar_mul, "M_s");
  term(ec_mul, "M_ec");
  term(mod_inv, "I_m");
  return out.empty() ? "0" : out;
}

std::string_view PartyName(Party party) {
  return party == Party::kGateway ? "gateway" : "core";
}

std::string_view MethodName(Method method) {
  return method == Method::kSingleParty ? "single-party" : "two-party";
}

OpTally VerifyCost(Scheme scheme) {
  // ECDSA: w = s^-1, u1 = m*w, u2 = r*w, u1*G + u2*P.
  // Schnorr: s*G - e*P.
  if (scheme == Scheme::kEcdsa) return {.scalar_mul = 2, .ec_mul = 2, .mod_inv = 1};
  return {.ec_mul = 2};
}

OpTally ComplexityRow::Total() const {
  OpTally total;
  for (const auto& step : steps) {
    total += step.ops;
    if (step.plus_verify) total += VerifyCost(scheme);
  }
  return total;
}

OpTally ComplexityRow::AtKeygen() const {
  OpTally total;
  for (const auto& step : steps) total += step.at_keygen;
  return total;
}

std::span<const ComplexityRow> ComplexityTable() {
  static const std::vector<ComplexityRow> table = {
      // Single-party baseline: the core signs, the gateway verifies.
      {Method::kSingleParty, Scheme::kEcdsa, Party::kGateway, {{"verify", {}, true}}},
      {Method::kSingleParty,
       Scheme::kEcdsa,
       Party::kCore,
       {{"sign: k*G, k^-1, k^-1*(m + r*x)", {.scalar_mul = 2, .ec_mul = 1, .mod_inv = 1}}}},
      {Method::kSingleParty, Scheme::kSchnorr, Party::kGateway, {{"verify", {}, true}}},
      {Method::kSingleParty,
       Scheme::kSchnorr,
       Party::kCore,
       {{"sign: k*G, k + x*e", {.scalar_mul = 1, .ec_mul = 1}}}},

      {Method::kTwoParty,
       Scheme::kEcdsa,
       Party::kGateway,
       {{"step one: C_key = Enc(x1) (g^x1, r^n), m, R1 = k1*G",
         {.modexp = 2, .scalar_mul = 1, .ec_mul = 1},
         false,
         {.modexp = 2}},
        {"step three: Dec(C3), mod q, k1^-1, s = k1^-1*s', r = (k1*R2).x",
         {.modexp = 1, .scalar_mul = 3, .ec_mul = 1, .mod_inv = 1},
         true}}},
      {Method::kTwoParty,
       Scheme::kEcdsa,
       Party::kCore,
       {{"step two: R = k2*R1, R2 = k2*G, k2^-1, k2^-1*m, k2^-1*r",
         {.scalar_mul = 2, .ec_mul = 2, .mod_inv = 1}},
        {"step two: C1 = Enc(rho*q + k2^-1*m) (2 E_m), rho*q, k2^-1*r*x2, "
         "C2 = C_key^(k2^-1*r*x2), C3 = C1*C2",
         {.modexp = 3, .scalar_mul = 4}}}},
      {Method::kTwoParty,
       Scheme::kSchnorr,
       Party::kGateway,
       {{"step one: R1 = k1*G", {.ec_mul = 1}},
        {"step three: s = s1 + s2", {.scalar_mul = 1}, true}}},
      {Method::kTwoParty,
       Scheme::kSchnorr,
       Party::kCore,
       {{"step two: R2 = k2*G, s2 = k2 + x2*e", {.scalar_mul = 1, .ec_mul = 1}}}},
  };
  return table;
}

const ComplexityRow& FindComplexityRow(Method method, Scheme scheme, Party party) {
  for (const auto& row : ComplexityTable()) {
    if (row.method == method && row.scheme == scheme && row.party == party) return row;
  }
  throw Error(ErrorCode::kInvalidArgument, "no such complexity row");
}

bool MatchesMeasured(const OpTally& expected, const OpCounts& measured) {
  return static_cast<uint64_t>(expected.modexp) == measured.modexp &&
         static_cast<uint64_t>(expected.ec_mul) == measured.ec_mul &&
         static_cast<uint64_t>(expected.mod_inv) == measured.mod_inv;
}

std::string RenderComplexityTable() {
  std::ostringstream out;
  for (const auto& row : ComplexityTable()) {
    out << MethodName(row.method) << ' ' << SchemeName(row.scheme) << ' '
        << PartyName(row.party) << '\n';
    for (const auto& step : row.steps) {
      out << "  " << step.label << ": ";
      const bool has_ops = step.ops != OpTally{};
      if (has_ops) out << step.ops.ToString();
      if (step.plus_verify) {
        out << (has_ops ? " + " : "") << "verify(" << VerifyCost(row.scheme).ToString() << ')';
      }
      if (step.at_keygen != OpTally{}) out << " [" << step.at_keygen.ToString() << " at keygen]";
      out << '\n';
    }
    out << "  total: " << row.Total().ToString() << '\n';
  }
  return out.str();
}

PartyCounts CountSessionOps(const KeyShare& initiator, const KeyShare& core,
                            const Transaction& tx, const Policy& policy, Rng& rng) {
  PartyCounts counts;
  auto tally = [](OpCounts& into, auto&& step) {
    ResetOpCounts();
    auto result = step();
    into.modexp += ThreadOpCounts().modexp;
    into.ec_mul += ThreadOpCounts().ec_mul;
    into.mod_inv += ThreadOpCounts().mod_inv;
    return result;
  };
  if (initiator.scheme == Scheme::kEcdsa) {
    tally(counts.gateway_keygen, [&] {
      return PaillierEncrypt(initiator.paillier->pub, initiator.secret.Expose().value(), rng);
    });
    auto init = tally(counts.gateway, [&] { return EcdsaGatewayInit(initiator, tx, rng); });
    auto msg2 =
        tally(counts.core, [&] { return EcdsaCoreRespond(core, init.msg, policy, rng); });
    tally(counts.gateway, [&] { return EcdsaGatewayFinalize(init.session, initiator, msg2); });
  } else {
    auto init = tally(counts.gateway, [&] { return SchnorrGatewayInit(initiator, tx, rng); });
    auto msg2 =
        tally(counts.core, [&] { return SchnorrCoreRespond(core, init.msg, policy, rng); });
    tally(counts.gateway, [&] { return SchnorrGatewayFinalize(init.session, initiator, msg2); });
  }
  ResetOpCounts();
  return counts;
}

namespace {

bool IsTxField(uint8_t tag) {
  return tag == static_cast<uint8_t>(FieldTag::kRawTx) ||
         tag == static_cast<uint8_t>(FieldTag::kTxHash);
}

}  // namespace

SizeRow MeasureSizes(const Envelope& envelope, size_t paillier_bits) {
  const Bytes encoded = EncodeEnvelope(envelope);
  SizeRow row{};
  row.scheme = envelope.scheme;
  row.step = envelope.type == MsgType::kSignMsg1 ? 1 : 2;
  row.envelope_bytes = encoded.size();
  row.envelope_packed = PackForTransfer(encoded).size();
  Bytes multisig;
  size_t values = 0;
  for (const auto& field : envelope.fields) {
    values += field.value.size();
    if (IsTxField(field.tag)) {
      row.tx_bytes += field.value.size();
    } else {
      AppendBytes(field.value, &multisig);
    }
  }
  row.extra_payload = multisig.size();
  row.extra_packed = PackForTransfer(multisig).size();
  row.framing = encoded.size() - values;

  const double q = static_cast<double>(BitLength(GroupForScheme(envelope.scheme).order()));
  const double n = static_cast<double>(paillier_bits);
  if (envelope.scheme == Scheme::kEcdsa) {
    // step one: R1 + C_key + pk; step two: R2 + C3
    row.theory_bytes = row.step == 1 ? (q + 2 * n + n) / 8 : (q + 2 * n) / 8;
    row.impl_row_as_bytes = row.step == 1 ? 256 + 512 + 256 : 256 + 512;
    row.impl_row_as_bits = row.step == 1 ? 32 + 512 + 256 : 32 + 512;
  } else {
    // step one: R1; step two: R2 + s2
    row.theory_bytes = row.step == 1 ? q / 8 : 2 * q / 8;
    row.impl_row_as_bytes = row.step == 1 ? 256 : 512;
    row.impl_row_as_bits = row.step == 1 ? 32 : 64;
  }
  return row;
}

std::vector<SizeRow> MeasureSessionSizes(const KeyShare& initiator, const KeyShare& core,
                                         const Transaction& tx, const Policy& policy, Rng& rng) {
  const SessionId id = RandomSessionId(rng);
  std::vector<SizeRow> rows;
  if (initiator.scheme == Scheme::kEcdsa) {
    const size_t bits = initiator.paillier->pub.bits();
    auto init = EcdsaGatewayInit(initiator, tx, rng, InitOptions{std::nullopt, id});
    auto msg2 = EcdsaCoreRespond(core, init.msg, policy, rng);
    rows.push_back(MeasureSizes(ToEnvelope(init.msg, id), bits));
    rows.push_back(MeasureSizes(ToEnvelope(msg2, id), bits));
    EcdsaGatewayFinalize(init.session, initiator, msg2);
  } else {
    auto init = SchnorrGatewayInit(initiator, tx, rng, InitOptions{std::nullopt, id});
    auto msg2 = SchnorrCoreRespond(core, init.msg, policy, rng);
    rows.push_back(MeasureSizes(ToEnvelope(init.msg, id), 0));
    rows.push_back(MeasureSizes(ToEnvelope(msg2, id), 0));
    SchnorrGatewayFinalize(init.session, initiator, msg2);
  }
  return rows;
}

std::string RenderSizeTable(std::span<const SizeRow> rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-8s %-4s %9s %9s %6s %8s %8s %7s %8s %10s %9s\n", "scheme",
                "step", "envelope", "packed", "tx", "extra", "extra_z", "framing", "theory",
                "impl(B)", "impl(b)");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-8s %-4d %9zu %9zu %6zu %8zu %8zu %7zu %8.1f %10zu %9zu\n",
                  std::string(SchemeName(r.scheme)).c_str(), r.step, r.envelope_bytes,
                  r.envelope_packed, r.tx_bytes, r.extra_payload, r.extra_packed, r.framing,
                  r.theory_bytes, r.impl_row_as_bytes, r.impl_row_as_bits);
    out << line;
  }
  return out.str();
}

}  // namespace coldwallet
