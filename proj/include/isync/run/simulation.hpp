// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "isync/config/scenario.hpp"
#include "isync/metrics/metrics.hpp"

namespace isync {

/// One transmission (departure) record; the trace log is one row per
/// protocol event.
struct TraceRow {
  std::int64_t time_ns = 0;
  NodeId node = 0;         // peer UE (the BS is implicit)
  std::uint64_t session = 0;
  std::string message;
  std::uint64_t bytes = 0;
  Plane plane = Plane::User;
  std::uint64_t overhead_bytes = 0;
  bool lost = false;
};

struct RunResult {
  MetricsReport report;
  std::vector<TraceRow> trace;  // only when tracing was requested
  std::map<std::string, std::uint64_t> message_counts;
  std::uint64_t sessions_completed = 0;
  std::uint64_t sessions_failed = 0;
  std::uint64_t user_blocks_granted = 0;
  std::uint64_t piggybacked_subpdus = 0;
  std::uint64_t uplink_timestamp_bytes = 0;     // ISynC uplink value bytes (zero by design)
  std::uint64_t sync_user_overhead_bytes = 0;   // user-plane sync header/signaling bytes
  std::uint64_t dropped_messages = 0;
};

/// Runs one scenario point (one scheme, one population, one seed) to
/// completion. Strictly single-threaded and deterministic; distinct
/// instances share no state and may run on different threads.
RunResult run_simulation(const ScenarioConfig& cfg, bool capture_trace);

/// The deterministic UE population a scenario generates (positions,
/// requirements, weights). Exposed for tests and cluster planning.
std::vector<UeProfile> build_profiles(const ScenarioConfig& cfg);

std::string trace_to_csv(const std::vector<TraceRow>& rows);

}  // namespace isync
