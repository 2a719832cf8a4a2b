#include "coldwallet/compress.hpp"

#include <zlib.h>

#include <algorithm>

#include "coldwallet/envelope.hpp"
#include "coldwallet/error.hpp"

namespace coldwallet {
namespace {

// Protocol envelopes are a few kilobytes; anything inflating past this is
// treated as hostile.
constexpr size_t kMaxInflatedBytes = 4 * kMaxFieldBytes;

bool HasEnvelopeMagic(ByteView data) {
  return data.size() >= kEnvelopeMagic.size() &&
         std::equal(kEnvelopeMagic.begin(), kEnvelopeMagic.end(), data.begin());
}

}  // namespace

Bytes Deflate(ByteView data) {
  uLongf bound = compressBound(static_cast<uLong>(data.size()));
  Bytes out(bound);
  if (compress2(out.data(), &bound, data.data(), static_cast<uLong>(data.size()),
                Z_BEST_COMPRESSION) != Z_OK) {
    throw Error(ErrorCode::kIo, "zlib compression failed");
  }
  out.resize(bound);
  return out;
}

Bytes Inflate(ByteView data, size_t max_output) {
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) throw Error(ErrorCode::kIo, "zlib init failed");
  zs.next_in = const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  Bytes out;
  uint8_t chunk[16384];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = chunk;
    zs.avail_out = sizeof(chunk);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc == Z_BUF_ERROR && zs.avail_in == 0) {
      inflateEnd(&zs);
      throw Error(ErrorCode::kTruncated, "compressed stream ends early");
    }
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw Error(ErrorCode::kMalformedField, "corrupt compressed stream");
    }
    size_t produced = sizeof(chunk) - zs.avail_out;
    if (out.size() + produced > max_output) {
      inflateEnd(&zs);
      throw Error(ErrorCode::kOversizeField, "decompressed data exceeds the size cap");
    }
    out.insert(out.end(), chunk, chunk + produced);
    if (rc == Z_OK && produced == 0 && zs.avail_in == 0) {
      inflateEnd(&zs);
      throw Error(ErrorCode::kTruncated, "compressed stream ends early");
    }
  }
  bool trailing = zs.avail_in != 0;
  inflateEnd(&zs);
  if (trailing) throw Error(ErrorCode::kTrailingBytes, "bytes after the compressed stream");
  return out;
}

Bytes PackForTransfer(ByteView envelope) {
  Bytes packed = Deflate(envelope);
  if (packed.size() < envelope.size()) return packed;
  return Bytes(envelope.begin(), envelope.end());
}

Bytes UnpackTransfer(ByteView file) {
  if (HasEnvelopeMagic(file)) return Bytes(file.begin(), file.end());
  return Inflate(file, kMaxInflatedBytes);
}

}  // namespace coldwallet
