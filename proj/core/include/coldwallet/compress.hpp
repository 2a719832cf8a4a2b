#pragma once

#include <cstddef>

#include "coldwallet/bytes.hpp"

namespace coldwallet {

// zlib stream (RFC 1950) at the best compression level.
Bytes Deflate(ByteView data);

// Refuses output larger than `max_output` (kOversizeField). A corrupt stream
// is kMalformedField, one that stops early kTruncated, and bytes after the
// end of the stream kTrailingBytes.
Bytes Inflate(ByteView data, size_t max_output);

// Envelope bytes as they go onto the removable medium: the deflated form
// when it is strictly smaller, the raw envelope otherwise.
Bytes PackForTransfer(ByteView envelope);

// Accepts either form; raw envelopes start with the "CWv1" magic, which can
// never begin a zlib stream.
Bytes UnpackTransfer(ByteView file);

}  // namespace coldwallet
