// SPDX-License-Identifier: Apache-2.0
#include "isync/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace isync {

const char* to_string(Plane p) { return p == Plane::Control ? "control" : "user"; }

double percentile_nearest_rank(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(values.size())));
  if (rank < 1) rank = 1;
  if (rank > values.size()) rank = values.size();
  return values[rank - 1];
}

bool sync_satisfied(std::span<const SyncSample> window_samples,
                    std::int64_t precision_target_ns, std::int64_t timeliness_target_ns,
                    double percentile) {
  if (window_samples.empty()) return false;
  std::vector<double> prec, timel;
  prec.reserve(window_samples.size());
  timel.reserve(window_samples.size());
  for (const auto& s : window_samples) {
    prec.push_back(std::abs(s.precision_err_ns));
    timel.push_back(s.timeliness_ns);
  }
  return percentile_nearest_rank(std::move(prec), percentile) <=
             static_cast<double>(precision_target_ns) &&
         percentile_nearest_rank(std::move(timel), percentile) <=
             static_cast<double>(timeliness_target_ns);
}

double integration_gain(const MetricsReport& isync, const MetricsReport& baseline,
                        double lambda) {
  const double sat_isync = (isync.sync_satisfaction + isync.comm_satisfaction) / 2.0;
  const double sat_base = (baseline.sync_satisfaction + baseline.comm_satisfaction) / 2.0;
  double efficiency = 0.0;
  if (baseline.total_overhead_bytes > 0) {
    efficiency = 1.0 - static_cast<double>(isync.total_overhead_bytes) /
                           static_cast<double>(baseline.total_overhead_bytes);
  }
  return lambda * (sat_isync - sat_base) + (1.0 - lambda) * efficiency;
}

void MetricsAccumulator::add_sync_sample(NodeId ue, SyncSample sample, SimTime at) {
  sync_[ue].push_back({at, sample});
}

void MetricsAccumulator::add_comm_delivery(NodeId ue, std::uint64_t bytes, double latency_ns,
                                           SimTime at) {
  comm_[ue].push_back({at, bytes, latency_ns});
}

void MetricsAccumulator::add_transmission(Plane plane, std::uint64_t bytes,
                                          std::uint64_t overhead_bytes) {
  (plane == Plane::Control ? control_bytes_ : user_bytes_) += bytes;
  overhead_bytes_ += overhead_bytes;
}

MetricsReport MetricsAccumulator::finalize(std::span<const UeProfile> profiles,
                                           const MetricsParams& params, SimTime run_end) const {
  MetricsReport report;
  report.control_plane_bytes = control_bytes_;
  report.user_plane_bytes = user_bytes_;
  report.total_overhead_bytes = overhead_bytes_;

  std::size_t sync_ok = 0, comm_ok = 0;
  std::vector<double> all_prec, all_timel;

  for (const auto& ue : profiles) {
    // Post-warmup (and optionally last-N) sync window.
    std::vector<SyncSample> window;
    if (auto it = sync_.find(ue.ue); it != sync_.end()) {
      for (const auto& st : it->second)
        if (st.at.ns >= params.warmup_ns) window.push_back(st.s);
    }
    if (params.window > 0 && window.size() > params.window)
      window.erase(window.begin(), window.end() - params.window);
    if (sync_satisfied(window, ue.sync_req.precision_target_ns,
                       ue.sync_req.timeliness_target_ns, params.percentile))
      ++sync_ok;
    for (const auto& s : window) {
      all_prec.push_back(std::abs(s.precision_err_ns));
      all_timel.push_back(s.timeliness_ns);
    }

    // Comm: post-warmup delivered throughput and latency percentile.
    std::uint64_t delivered = 0;
    std::vector<double> latencies;
    if (auto it = comm_.find(ue.ue); it != comm_.end()) {
      for (const auto& d : it->second) {
        if (d.at.ns < params.warmup_ns) continue;
        delivered += d.bytes;
        latencies.push_back(d.latency_ns);
      }
    }
    const double span_s = static_cast<double>(run_end.ns - params.warmup_ns) * 1e-9;
    const double throughput = span_s > 0 ? static_cast<double>(delivered) / span_s : 0.0;
    const bool comm_sat =
        !latencies.empty() && throughput >= ue.comm_req.min_throughput_bps &&
        percentile_nearest_rank(std::move(latencies), params.percentile) <=
            static_cast<double>(ue.comm_req.max_latency_ns);
    if (comm_sat) ++comm_ok;
  }

  const double n = static_cast<double>(profiles.size());
  if (n > 0) {
    report.sync_satisfaction = static_cast<double>(sync_ok) / n;
    report.comm_satisfaction = static_cast<double>(comm_ok) / n;
  }
  if (!all_prec.empty()) {
    double sum = 0.0;
    for (double v : all_prec) sum += v;
    report.mean_precision_ns = sum / static_cast<double>(all_prec.size());
    report.p95_precision_ns = percentile_nearest_rank(all_prec, 0.95);
  }
  if (!all_timel.empty()) {
    double sum = 0.0;
    std::size_t finite = 0;
    for (double v : all_timel) {
      if (std::isfinite(v)) {
        sum += v;
        ++finite;
      }
    }
    report.mean_timeliness_ns = finite > 0 ? sum / static_cast<double>(finite) : 0.0;
  }
  return report;
}

}  // namespace isync
