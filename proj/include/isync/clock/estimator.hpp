// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "isync/sim/time.hpp"

namespace isync {

/// One six-timestamp exchange. Reference-clock readings: T1 (S1 departure),
/// T4 (S2 arrival), T5 (S3 departure). UE-clock readings: T2 (S1 arrival),
/// T3 (S2 departure), T6 (S3 arrival). Without PHY timestamping T1/T5 are
/// MAC-scheduled departure stamps carrying timestamping error.
struct SyncSession {
  std::uint64_t session_id = 0;
  NodeId ue_id = 0;
  bool phy_timestamping = true;
  std::optional<std::int64_t> t1, t2, t3, t4, t5, t6;
};

/// Offset/skew recovered from a session. offset_ns is the instantaneous
/// local-minus-reference error at the instant the UE read local_anchor_ns
/// (= T2); callers extrapolate with skew when applying it later.
struct SyncEstimate {
  bool valid = false;
  double offset_ns = 0.0;
  double skew = 0.0;  // dimensionless rate error
  std::int64_t local_anchor_ns = 0;

  double skew_ppm() const { return skew * 1e6; }
};

/// Six-timestamp estimator:
///   skew   = ((T6-T2) - (T5-T1)) / (T5-T1)      (downlink pairs only)
///   T3'    = T2 + (T3-T2) / (1+skew)            (T3 de-skewed to reference rate)
///   offset = ((T2-T1) - (T4-T3')) / 2
/// Invalid when a required timestamp is missing, T5 == T1, or the event
/// order is degenerate (T6 <= T2, implied rate <= 0).
SyncEstimate estimate_offset_skew(const SyncSession& session);

/// Separated-baseline two-way estimator over (T1..T4); offset only, no
/// skew. Invalid on missing timestamps.
SyncEstimate estimate_offset_ptp(std::optional<std::int64_t> t1, std::optional<std::int64_t> t2,
                                 std::optional<std::int64_t> t3, std::optional<std::int64_t> t4);

}  // namespace isync
