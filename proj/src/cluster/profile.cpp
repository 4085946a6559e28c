// SPDX-License-Identifier: Apache-2.0
#include "isync/cluster/profile.hpp"

#include <algorithm>
#include <cmath>

namespace isync {

std::optional<std::string> validate(const UeProfile& ue) {
  if (!std::isfinite(ue.x_m) || !std::isfinite(ue.y_m)) return "position must be finite";
  if (ue.sync_req.precision_target_ns <= 0) return "precision_target must be positive";
  if (ue.sync_req.timeliness_target_ns <= 0) return "timeliness_target must be positive";
  if (ue.comm_req.min_throughput_bps <= 0) return "min_throughput must be positive";
  if (ue.comm_req.max_latency_ns <= 0) return "max_latency must be positive";
  if (ue.w_sync < 0 || ue.w_comm < 0) return "weights must be non-negative";
  if (std::abs(ue.w_sync + ue.w_comm - 1.0) > 1e-9) return "weights must sum to 1";
  return std::nullopt;
}

double service_value(const UeProfile& ue, const NormalizationConstants& norm) {
  const double sync_term =
      std::min(norm.p_ref_ns / static_cast<double>(ue.sync_req.precision_target_ns), 1.0);
  const double comm_term =
      std::min(norm.l_ref_ns / static_cast<double>(ue.comm_req.max_latency_ns), 1.0);
  return ue.w_sync * sync_term + ue.w_comm * comm_term;
}

PrioritySplit select_prioritized(std::span<const UeProfile> ues, std::size_t budget,
                                 const NormalizationConstants& norm) {
  std::vector<std::pair<double, NodeId>> scored;
  scored.reserve(ues.size());
  for (const auto& ue : ues) scored.emplace_back(service_value(ue, norm), ue.ue);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  PrioritySplit split;
  for (std::size_t i = 0; i < scored.size(); ++i)
    (i < budget ? split.ce_set : split.sdu_set).push_back(scored[i].second);
  std::sort(split.ce_set.begin(), split.ce_set.end());
  std::sort(split.sdu_set.begin(), split.sdu_set.end());
  return split;
}

}  // namespace isync
