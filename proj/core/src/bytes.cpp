#include "coldwallet/bytes.hpp"

#include <algorithm>

#include "coldwallet/error.hpp"

namespace coldwallet {
namespace {

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string ToHex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0F]);
  }
  return out;
}

Bytes FromHex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "hex string has odd length");
  }
  Bytes out;
  out.reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2) {
    const int hi = HexValue(hex[i]);
    const int lo = HexValue(hex[i + 1]);
    if (hi < 0 || lo < 0) {
      throw Error(ErrorCode::kInvalidArgument, "invalid hex character");
    }
    out.push_back(static_cast<uint8_t>((hi << 4) | lo));
  }
  return out;
}

Bytes ToBytes(std::string_view text) { return Bytes(text.begin(), text.end()); }

void AppendU8(uint8_t value, Bytes* out) { out->push_back(value); }

void AppendU32Be(uint32_t value, Bytes* out) {
  out->push_back(static_cast<uint8_t>((value >> 24) & 0xFF));
  out->push_back(static_cast<uint8_t>((value >> 16) & 0xFF));
  out->push_back(static_cast<uint8_t>((value >> 8) & 0xFF));
  out->push_back(static_cast<uint8_t>(value & 0xFF));
}

void AppendU64Be(uint64_t value, Bytes* out) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out->push_back(static_cast<uint8_t>((value >> shift) & 0xFF));
  }
}

void AppendBytes(ByteView data, Bytes* out) { out->insert(out->end(), data.begin(), data.end()); }

void ByteReader::Require(size_t len) const {
  if (len > remaining()) {
    throw Error(ErrorCode::kTruncated, "need " + std::to_string(len) + " bytes at offset " +
                                           std::to_string(offset_) + ", have " +
                                           std::to_string(remaining()));
  }
}

uint8_t ByteReader::ReadU8() {
  Require(1);
  return data_[offset_++];
}

uint32_t ByteReader::ReadU32Be() {
  Require(4);
  const size_t i = offset_;
  offset_ += 4;
  return (static_cast<uint32_t>(data_[i]) << 24) | (static_cast<uint32_t>(data_[i + 1]) << 16) |
         (static_cast<uint32_t>(data_[i + 2]) << 8) | static_cast<uint32_t>(data_[i + 3]);
}

uint64_t ByteReader::ReadU64Be() {
  Require(8);
  uint64_t value = 0;
  for (int i = 0; i < 8; ++i) {
    value = (value << 8) | data_[offset_ + i];
  }
  offset_ += 8;
  return value;
}

ByteView ByteReader::ReadBytes(size_t len) {
  Require(len);
  ByteView view = data_.subspan(offset_, len);
  offset_ += len;
  return view;
}

bool ContainsSubsequence(ByteView haystack, ByteView needle) {
  if (needle.empty()) return true;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

}  // namespace coldwallet
