// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isync/sim/time.hpp"

namespace isync {

/// UE-reported sync quality: quantized current precision error relative to
/// the precision target. 0 = error below target/256, 255 = at/over target.
struct SqiReport {
  std::uint8_t level = 255;
};

struct SqiBand {
  std::uint8_t level_max = 255;
  double multiplier = 1.0;
};

struct SyncPolicy {
  std::int64_t precision_target_ns = 10'000;
  std::int64_t timeliness_target_ns = 300'000'000;
  std::int64_t base_period_ns = 1'000'000'000;
  std::int64_t skew_window_ns = 50'000'000;  // S1 -> S3 observation span
  // Bands over SQI levels; worse quality must never slow resync down.
  std::vector<SqiBand> sqi_scaling = {{85, 1.0}, {170, 0.5}, {255, 0.25}};
};

std::uint8_t sqi_from_error(double error_ns, std::int64_t precision_target_ns);
double multiplier_for(const SyncPolicy& policy, std::uint8_t level);
SimTime next_sync_time(const SyncPolicy& policy, SqiReport sqi, SimTime now);

/// Returns a diagnostic when the policy is malformed (non-positive period,
/// bands not covering 0..255, multipliers not positive/non-increasing).
std::optional<std::string> validate(const SyncPolicy& policy);

}  // namespace isync
