// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "isync/cluster/clustering.hpp"
#include "isync/mac/codec.hpp"

namespace isync {

struct AggregationResult {
  std::optional<mac::MacSubPdu> subpdu;
  std::vector<NodeId> skipped;  // members without a payload
};

/// Folds the cluster members' sync payloads into one aggregate sub-PDU
/// (body = [count][(ue_id, payload)...]). Members missing a payload are
/// skipped and reported; with no payloads at all, no sub-PDU is emitted.
/// Payloads within one aggregate must share a size (the wire format has no
/// per-member length).
AggregationResult aggregate_sync_sdus(const Cluster& cluster,
                                      const std::map<NodeId, mac::Bytes>& per_member_payloads);

/// Byte arithmetic behind the aggregation: cost of n standalone sub-PDUs
/// with subheader size h versus one aggregate, payload bytes cancelling.
/// Aggregation wins exactly when n*h > n*2 + 1 + h.
std::size_t standalone_bytes(std::size_t n_members, std::size_t subheader_bytes,
                             std::size_t payload_bytes);
std::size_t aggregated_bytes(std::size_t n_members, std::size_t subheader_bytes,
                             std::size_t payload_bytes);

}  // namespace isync
