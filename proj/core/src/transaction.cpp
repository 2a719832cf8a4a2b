#include "coldwallet/transaction.hpp"

#include <charconv>
#include <limits>

#include "json.hpp"

#include "coldwallet/error.hpp"
#include "coldwallet/signature.hpp"

namespace coldwallet {
namespace {

constexpr size_t kMaxTextField = 1024;

void AppendText(std::string_view text, Bytes* out) {
  AppendU32Be(static_cast<uint32_t>(text.size()), out);
  out->insert(out->end(), text.begin(), text.end());
}

std::string ReadText(ByteReader& reader) {
  const uint32_t len = reader.ReadU32Be();
  if (len > kMaxTextField) {
    throw Error(ErrorCode::kMalformedField, "transaction text field too long");
  }
  ByteView raw = reader.ReadBytes(len);
  return std::string(raw.begin(), raw.end());
}

std::string_view Trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void Transaction::Validate() const {
  if (amount == 0) {
    throw Error(ErrorCode::kInvalidArgument, "transaction amount must be positive");
  }
  if (source_address.empty() || destination_address.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "transaction addresses must be non-empty");
  }
  if (asset.size() > kMaxTextField || source_address.size() > kMaxTextField ||
      destination_address.size() > kMaxTextField) {
    throw Error(ErrorCode::kInvalidArgument, "transaction text field too long");
  }
}

Bytes TxCanonicalBytes(const Transaction& tx) {
  tx.Validate();
  Bytes out;
  AppendU8(tx.version, &out);
  AppendText(tx.asset, &out);
  AppendText(tx.source_address, &out);
  AppendText(tx.destination_address, &out);
  AppendU64Be(tx.amount, &out);
  AppendU64Be(tx.nonce, &out);
  return out;
}

Transaction TxFromCanonicalBytes(ByteView bytes) {
  ByteReader reader(bytes);
  Transaction tx;
  try {
    tx.version = reader.ReadU8();
    tx.asset = ReadText(reader);
    tx.source_address = ReadText(reader);
    tx.destination_address = ReadText(reader);
    tx.amount = reader.ReadU64Be();
    tx.nonce = reader.ReadU64Be();
  } catch (const Error& e) {
    throw Error(ErrorCode::kMalformedField, std::string("raw transaction: ") + e.what());
  }
  if (!reader.empty()) {
    throw Error(ErrorCode::kMalformedField, "raw transaction has trailing bytes");
  }
  try {
    tx.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kMalformedField, e.what());
  }
  return tx;
}

Scalar TxHash(const Transaction& tx, const Group& group) {
  return HashToScalar(TxCanonicalBytes(tx), group);
}

Transaction TxFromJson(std::string_view json) {
  Transaction tx;
  try {
    const auto doc = nlohmann::json::parse(json);
    const auto version = doc.at("version").get<uint64_t>();
    if (version > std::numeric_limits<uint8_t>::max()) {
      throw Error(ErrorCode::kInvalidArgument, "transaction version must fit in one byte");
    }
    tx.version = static_cast<uint8_t>(version);
    tx.asset = doc.at("asset").get<std::string>();
    tx.source_address = doc.at("source").get<std::string>();
    tx.destination_address = doc.at("destination").get<std::string>();
    tx.amount = doc.at("amount").get<uint64_t>();
    tx.nonce = doc.at("nonce").get<uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("transaction JSON: ") + e.what());
  }
  tx.Validate();
  return tx;
}

std::string TxToJson(const Transaction& tx) {
  nlohmann::ordered_json doc;
  doc["version"] = tx.version;
  doc["asset"] = tx.asset;
  doc["source"] = tx.source_address;
  doc["destination"] = tx.destination_address;
  doc["amount"] = tx.amount;
  doc["nonce"] = tx.nonce;
  return doc.dump(2);
}

PolicyReport CheckPolicy(const Transaction& tx, const Policy& policy) {
  PolicyReport report;
  if (!policy.whitelist.contains(tx.destination_address)) {
    report.violations.push_back("destination '" + tx.destination_address +
                                "' is not a whitelisted address");
  }
  if (policy.max_amount && tx.amount > *policy.max_amount) {
    report.violations.push_back("amount " + std::to_string(tx.amount) + " exceeds max_amount " +
                                std::to_string(*policy.max_amount));
  }
  return report;
}

Policy ParsePolicy(std::string_view text) {
  Policy policy;
  size_t line_no = 0;
  while (!text.empty()) {
    const size_t nl = text.find('\n');
    std::string_view line = Trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    constexpr std::string_view kCapKey = "max_amount";
    if (line.starts_with(kCapKey) &&
        (line.size() == kCapKey.size() || line[kCapKey.size()] == ' ' ||
         line[kCapKey.size()] == '\t')) {
      const std::string_view value = Trim(line.substr(kCapKey.size()));
      uint64_t cap = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), cap);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw Error(ErrorCode::kConfig,
                    "policy line " + std::to_string(line_no) + ": bad max_amount value");
      }
      policy.max_amount = cap;
      continue;
    }
    if (line.find_first_of(" \t") != std::string_view::npos) {
      throw Error(ErrorCode::kConfig,
                  "policy line " + std::to_string(line_no) + ": addresses may not contain spaces");
    }
    policy.whitelist.emplace(line);
  }
  return policy;
}

}  // namespace coldwallet
