// SPDX-License-Identifier: Apache-2.0
#include "isync/sim/channel.hpp"

#include <cmath>

namespace isync {

const char* to_string(Direction d) { return d == Direction::Downlink ? "DL" : "UL"; }

namespace {
double sample_jitter(const JitterSpec& j, SeededRng& rng) {
  switch (j.kind) {
    case JitterSpec::Kind::None:
      return 0.0;
    case JitterSpec::Kind::Uniform:
      return rng.uniform(j.a, j.b);
    case JitterSpec::Kind::TruncNormal:
      return rng.truncated_normal(j.a, j.b);
  }
  return 0.0;
}
}  // namespace

DeliveryOutcome transmit(const ChannelModel& ch, Direction dir, std::size_t size_bytes,
                         SeededRng& rng) {
  if (rng.bernoulli(ch.loss_prob)) return DeliveryOutcome{true, 0};

  const std::int64_t base =
      dir == Direction::Downlink ? ch.dl_delay_base_ns : ch.ul_delay_base_ns + ch.asymmetry_ns;
  const std::int64_t serialization =
      std::llround(ch.per_byte_ns * static_cast<double>(size_bytes));
  const std::int64_t jitter = std::llround(sample_jitter(ch.jitter, rng));

  std::int64_t delay = base + serialization + jitter;
  if (delay < 1) delay = 1;  // delays are strictly positive
  return DeliveryOutcome{false, delay};
}

}  // namespace isync
