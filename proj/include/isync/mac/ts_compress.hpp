// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace isync {

/// Suffix-compressed 8-byte timestamp: the n_bytes low-order bytes of the
/// full value. Lossless against a shared reference whenever
/// |full - reference| < 2^(8*n_bytes - 1).
struct CompressedTimestamp {
  std::uint8_t n_bytes = 1;  // 1..8
  std::uint64_t suffix = 0;  // low n_bytes bytes of the full timestamp

  bool operator==(const CompressedTimestamp&) const = default;
};

/// Smallest n such that the delta from `reference` reconstructs exactly;
/// n = 8 carries the full value and is always valid.
CompressedTimestamp compress_timestamp(std::uint64_t full, std::uint64_t reference);

/// Unique value congruent to the suffix mod 2^(8n) within
/// (reference - 2^(8n-1), reference + 2^(8n-1)].
std::uint64_t decompress_timestamp(const CompressedTimestamp& c, std::uint64_t reference);

}  // namespace isync
