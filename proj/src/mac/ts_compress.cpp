// SPDX-License-Identifier: Apache-2.0
#include "isync/mac/ts_compress.hpp"

namespace isync {

CompressedTimestamp compress_timestamp(std::uint64_t full, std::uint64_t reference) {
  const std::uint64_t diff = full >= reference ? full - reference : reference - full;
  std::uint8_t n = 8;
  for (std::uint8_t k = 1; k < 8; ++k) {
    // threshold 2^(8k - 1)
    const std::uint64_t half_window = 1ull << (8 * k - 1);
    if (diff < half_window) {
      n = k;
      break;
    }
  }
  std::uint64_t suffix = full;
  if (n < 8) suffix &= (1ull << (8 * n)) - 1;
  return CompressedTimestamp{n, suffix};
}

std::uint64_t decompress_timestamp(const CompressedTimestamp& c, std::uint64_t reference) {
  if (c.n_bytes >= 8) return c.suffix;
  const std::uint64_t window = 1ull << (8 * c.n_bytes);
  const std::uint64_t delta = (c.suffix - reference) & (window - 1);
  if (delta > window / 2) return reference + delta - window;
  return reference + delta;
}

}  // namespace isync
