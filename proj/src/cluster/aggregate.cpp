// SPDX-License-Identifier: Apache-2.0
#include "isync/cluster/aggregate.hpp"

namespace isync {

AggregationResult aggregate_sync_sdus(const Cluster& cluster,
                                      const std::map<NodeId, mac::Bytes>& per_member_payloads) {
  AggregationResult result;
  mac::AggregateSdu agg;
  for (NodeId member : cluster.members) {
    auto it = per_member_payloads.find(member);
    if (it == per_member_payloads.end()) {
      result.skipped.push_back(member);
      continue;
    }
    agg.members.push_back({static_cast<std::uint16_t>(member), it->second});
  }
  if (!agg.members.empty()) result.subpdu = mac::MacSubPdu{std::move(agg)};
  return result;
}

std::size_t standalone_bytes(std::size_t n_members, std::size_t subheader_bytes,
                             std::size_t payload_bytes) {
  return n_members * (subheader_bytes + payload_bytes);
}

std::size_t aggregated_bytes(std::size_t n_members, std::size_t subheader_bytes,
                             std::size_t payload_bytes) {
  return subheader_bytes + 1 + n_members * (2 + payload_bytes);
}

}  // namespace isync
