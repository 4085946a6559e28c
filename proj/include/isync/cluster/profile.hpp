// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isync/sim/time.hpp"

namespace isync {

struct SyncRequirement {
  std::int64_t precision_target_ns = 10'000;
  std::int64_t timeliness_target_ns = 300'000'000;
};

struct CommRequirement {
  double min_throughput_bps = 1000.0;  // bytes per second
  std::int64_t max_latency_ns = 20'000'000;
};

struct UeProfile {
  NodeId ue = 0;
  double x_m = 0.0;
  double y_m = 0.0;
  SyncRequirement sync_req;
  CommRequirement comm_req;
  double w_sync = 0.5;
  double w_comm = 0.5;
};

/// Reference requirement levels anchoring the value score at 1.0.
struct NormalizationConstants {
  double p_ref_ns = 1000.0;        // precision this stringent (or more) scores 1
  double l_ref_ns = 10'000'000.0;  // latency this stringent (or more) scores 1
};

std::optional<std::string> validate(const UeProfile& ue);

/// Weighted stringency of the UE's requirements, in [0, 1]: tighter targets
/// are more valuable, capped at the reference levels.
double service_value(const UeProfile& ue, const NormalizationConstants& norm);

struct PrioritySplit {
  std::vector<NodeId> ce_set;   // high-value UEs served on the control plane
  std::vector<NodeId> sdu_set;  // the rest
};

/// Top-`budget` UEs by service value (ties broken by lower ue id).
PrioritySplit select_prioritized(std::span<const UeProfile> ues, std::size_t budget,
                                 const NormalizationConstants& norm);

}  // namespace isync
