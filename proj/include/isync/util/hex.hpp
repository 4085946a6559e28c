// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace isync {

std::string to_hex(const std::vector<std::uint8_t>& bytes);
/// Parses a hex string (whitespace tolerated). Throws std::invalid_argument
/// on odd length or non-hex characters.
std::vector<std::uint8_t> from_hex(const std::string& hex);

}  // namespace isync
