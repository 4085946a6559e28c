// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <compare>

namespace isync {

/// Reference ("true") time, integer nanoseconds since simulation epoch.
struct SimTime {
  std::int64_t ns = 0;

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(std::int64_t delta_ns) const { return {ns + delta_ns}; }
  constexpr SimTime operator-(std::int64_t delta_ns) const { return {ns - delta_ns}; }
  constexpr std::int64_t operator-(SimTime other) const { return ns - other.ns; }

  constexpr double seconds() const { return static_cast<double>(ns) * 1e-9; }
};

constexpr SimTime sim_time(std::int64_t ns) { return SimTime{ns}; }

/// Node identifier; 0 is the base station, UEs are 1..n_ues.
using NodeId = std::uint32_t;
constexpr NodeId kBsNode = 0;

}  // namespace isync
