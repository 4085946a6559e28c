// SPDX-License-Identifier: Apache-2.0
#include "isync/proto/policy.hpp"

#include <cmath>

namespace isync {

std::uint8_t sqi_from_error(double error_ns, std::int64_t precision_target_ns) {
  if (error_ns < 0.0) error_ns = -error_ns;
  if (precision_target_ns <= 0) return 255;
  double ratio = error_ns / static_cast<double>(precision_target_ns);
  if (ratio > 1.0) ratio = 1.0;
  const double level = std::floor(256.0 * ratio);
  return level >= 255.0 ? 255 : static_cast<std::uint8_t>(level);
}

double multiplier_for(const SyncPolicy& policy, std::uint8_t level) {
  for (const auto& band : policy.sqi_scaling)
    if (level <= band.level_max) return band.multiplier;
  return policy.sqi_scaling.empty() ? 1.0 : policy.sqi_scaling.back().multiplier;
}

SimTime next_sync_time(const SyncPolicy& policy, SqiReport sqi, SimTime now) {
  const double period = static_cast<double>(policy.base_period_ns) * multiplier_for(policy, sqi.level);
  return now + std::llround(period);
}

std::optional<std::string> validate(const SyncPolicy& policy) {
  if (policy.base_period_ns <= 0) return "base_period must be positive";
  if (policy.precision_target_ns <= 0) return "precision_target must be positive";
  if (policy.timeliness_target_ns <= 0) return "timeliness_target must be positive";
  if (policy.skew_window_ns < 0) return "skew_window must be non-negative";
  if (policy.sqi_scaling.empty()) return "sqi_scaling must have at least one band";
  std::uint8_t prev_max = 0;
  double prev_mult = 0.0;
  bool first = true;
  for (const auto& band : policy.sqi_scaling) {
    if (band.multiplier <= 0.0) return "sqi multipliers must be positive";
    if (band.multiplier > 1.0) return "sqi multipliers must not exceed 1";
    if (!first) {
      if (band.level_max <= prev_max) return "sqi bands must have increasing level_max";
      if (band.multiplier > prev_mult) return "sqi multipliers must be non-increasing";
    }
    prev_max = band.level_max;
    prev_mult = band.multiplier;
    first = false;
  }
  if (policy.sqi_scaling.back().level_max != 255) return "sqi bands must cover level 255";
  return std::nullopt;
}

}  // namespace isync
