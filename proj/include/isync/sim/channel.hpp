// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "isync/sim/rng.hpp"
#include "isync/sim/time.hpp"

namespace isync {

enum class Direction { Downlink, Uplink };

const char* to_string(Direction d);

struct JitterSpec {
  enum class Kind { None, Uniform, TruncNormal };
  Kind kind = Kind::None;
  // Uniform: [a, b] ns. TruncNormal: mean a, sigma b, truncated at 0.
  double a = 0.0;
  double b = 0.0;
};

/// Abstract radio link between the BS and a UE: base propagation delay per
/// direction, per-byte serialization time, additive jitter and Bernoulli
/// loss. No PHY model.
struct ChannelModel {
  std::int64_t dl_delay_base_ns = 5000;
  std::int64_t ul_delay_base_ns = 5000;
  JitterSpec jitter;
  double loss_prob = 0.0;
  std::int64_t asymmetry_ns = 0;  // added to uplink only
  double per_byte_ns = 0.0;       // serialization time per byte
};

struct DeliveryOutcome {
  bool lost = false;
  std::int64_t delay_ns = 0;
};

/// Samples one transmission. Consumes the loss draw first and the jitter
/// draw only for delivered packets; the draw order is part of the
/// deterministic contract.
DeliveryOutcome transmit(const ChannelModel& ch, Direction dir, std::size_t size_bytes,
                         SeededRng& rng);

}  // namespace isync
