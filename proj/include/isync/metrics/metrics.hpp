// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "isync/cluster/profile.hpp"
#include "isync/sim/time.hpp"

namespace isync {

enum class Plane : std::uint8_t { Control, User };

const char* to_string(Plane p);

/// One completed (or failed) sync round: the true precision error the UE
/// carried into the round and the request-to-fulfilment delay. A failed
/// round records infinite timeliness.
struct SyncSample {
  double precision_err_ns = 0.0;
  double timeliness_ns = 0.0;
};

struct MetricsParams {
  double percentile = 0.95;
  std::size_t window = 0;  // last N samples per UE; 0 = all post-warmup
  double gain_lambda = 0.5;
  std::int64_t warmup_ns = 0;  // samples before this instant are discarded
};

struct MetricsReport {
  double sync_satisfaction = 0.0;
  double comm_satisfaction = 0.0;
  double mean_precision_ns = 0.0;
  double p95_precision_ns = 0.0;
  double mean_timeliness_ns = 0.0;
  std::uint64_t control_plane_bytes = 0;
  std::uint64_t user_plane_bytes = 0;
  std::uint64_t total_overhead_bytes = 0;
  double integration_gain = 0.0;
};

/// Nearest-rank percentile (rank = ceil(q * n), 1-indexed) on a copy.
double percentile_nearest_rank(std::vector<double> values, double q);

/// Satisfied when both the precision-error and the timeliness percentile
/// are within the targets.
bool sync_satisfied(std::span<const SyncSample> window_samples,
                    std::int64_t precision_target_ns, std::int64_t timeliness_target_ns,
                    double percentile);

/// gain = lambda*(SatRate_isync - SatRate_base)
///        + (1-lambda)*(1 - Overhead_isync/Overhead_base),
/// SatRate = mean of sync and comm satisfaction. A zero baseline overhead
/// zeroes the efficiency term.
double integration_gain(const MetricsReport& isync, const MetricsReport& baseline,
                        double lambda);

/// Per-run accumulator: per-UE sync/comm sample stores plus per-plane byte
/// counters. Single-threaded within a run; the per-plane counters are
/// cross-checked against an independent walk of the trace log in tests.
class MetricsAccumulator {
 public:
  void add_sync_sample(NodeId ue, SyncSample sample, SimTime at);
  void add_comm_delivery(NodeId ue, std::uint64_t bytes, double latency_ns, SimTime at);
  void add_transmission(Plane plane, std::uint64_t bytes, std::uint64_t overhead_bytes);

  /// Aggregates into a report. Satisfaction fractions are over all UEs in
  /// `profiles`; a UE with no post-warmup sync samples counts unsatisfied.
  MetricsReport finalize(std::span<const UeProfile> profiles, const MetricsParams& params,
                         SimTime run_end) const;

  std::uint64_t control_plane_bytes() const { return control_bytes_; }
  std::uint64_t user_plane_bytes() const { return user_bytes_; }
  std::uint64_t overhead_bytes() const { return overhead_bytes_; }

 private:
  struct StampedSync {
    SimTime at;
    SyncSample s;
  };
  struct CommDelivery {
    SimTime at;
    std::uint64_t bytes = 0;
    double latency_ns = 0.0;
  };

  std::map<NodeId, std::vector<StampedSync>> sync_;
  std::map<NodeId, std::vector<CommDelivery>> comm_;
  std::uint64_t control_bytes_ = 0;
  std::uint64_t user_bytes_ = 0;
  std::uint64_t overhead_bytes_ = 0;
};

}  // namespace isync
