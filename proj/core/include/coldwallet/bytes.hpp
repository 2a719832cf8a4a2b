#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coldwallet {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

std::string ToHex(ByteView data);

// Accepts upper or lower case; throws Error(kInvalidArgument) on odd length or
// non-hex characters.
Bytes FromHex(std::string_view hex);

Bytes ToBytes(std::string_view text);

void AppendU8(uint8_t value, Bytes* out);
void AppendU32Be(uint32_t value, Bytes* out);
void AppendU64Be(uint64_t value, Bytes* out);
void AppendBytes(ByteView data, Bytes* out);

// Bounds-checked cursor over a byte buffer. Every read past the end throws
// Error(kTruncated), so decoders built on it are total.
class ByteReader {
 public:
  explicit ByteReader(ByteView data) : data_(data) {}

  uint8_t ReadU8();
  uint32_t ReadU32Be();
  uint64_t ReadU64Be();
  ByteView ReadBytes(size_t len);

  size_t offset() const { return offset_; }
  size_t remaining() const { return data_.size() - offset_; }
  bool empty() const { return remaining() == 0; }

 private:
  void Require(size_t len) const;

  ByteView data_;
  size_t offset_ = 0;
};

// Searches for `needle` anywhere in `haystack`.
bool ContainsSubsequence(ByteView haystack, ByteView needle);

}  // namespace coldwallet
