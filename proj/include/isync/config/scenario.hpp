// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isync/metrics/metrics.hpp"
#include "isync/proto/policy.hpp"
#include "isync/sim/channel.hpp"
#include "isync/util/expected.hpp"

namespace isync {

enum class Scheme : std::uint8_t { Separated, Sdu, Ce, Hybrid };

const char* to_string(Scheme s);
std::optional<Scheme> scheme_from(const std::string& name);

struct ClockConfig {
  double offset_max_ns = 1'000'000.0;  // initial offsets uniform in +-max
  double skew_max_ppm = 8.0;           // skews uniform in +-max
  double rw_noise_sigma = 0.0;         // ns per sqrt(s)
  double skew_bound_ppm = 1000.0;
  bool phy_timestamping = true;
  std::int64_t ts_error_bound_ns = 500;
};

struct RequirementConfig {
  std::int64_t precision_target_ns = 10'000;
  std::int64_t timeliness_target_ns = 300'000'000;
  double min_throughput_bps = 1000.0;  // bytes per second
  std::int64_t max_latency_ns = 20'000'000;
};

struct GridConfig {
  std::int64_t tti_ns = 1'000'000;
  int n_freq_blocks = 8;
  std::uint32_t block_capacity_bytes = 160;
  int ctrl_blocks = 4;
  std::uint32_t ctrl_capacity_bytes = 32;
  int horizon_ttis = 32;
  int urgency_threshold_ttis = 2;
};

struct TrafficConfig {
  std::uint32_t comm_payload_bytes = 120;
  std::int64_t comm_period_ns = 75'000'000;
};

struct ClusterConfig {
  double cell_size_m = 200.0;
  double max_radius_m = 40.0;
  std::size_t ce_budget = 16;
  double p_ref_ns = 1000.0;
  double l_ref_ns = 10'000'000.0;
};

struct BaselineConfig {
  std::uint32_t h_base_bytes = 40;
};

struct ExperimentConfig {
  enum class Mode { Single, Grid, Scale };
  Mode mode = Mode::Single;
  std::vector<Scheme> schemes;  // grid/scale runs execute each scheme per point
  std::vector<std::int64_t> sync_targets_ns;          // grid: precision axis
  std::vector<std::int64_t> comm_latency_targets_ns;  // grid: latency axis
  std::vector<int> n_ues_values;                      // scale: population axis
};

const char* to_string(ExperimentConfig::Mode m);

/// Fully specifies a run; two loads of the same file produce identical
/// runs. Defaults are materialized on parse.
struct ScenarioConfig {
  std::uint64_t seed = 1;
  int n_ues = 10;
  Scheme scheme = Scheme::Hybrid;
  std::int64_t duration_ns = 12'000'000'000;
  ChannelModel channel;
  ClockConfig clocks;
  SyncPolicy sync;  // precision/timeliness targets mirror `requirements`
  RequirementConfig requirements;
  GridConfig grid;
  TrafficConfig traffic;
  ClusterConfig cluster;
  BaselineConfig baseline;
  MetricsParams metrics{0.95, 0, 0.5, 2'500'000'000};
  bool piggyback_enabled = true;
  ExperimentConfig experiment;
};

/// Parse + validate. On failure returns every field-level diagnostic, not
/// just the first.
Expected<ScenarioConfig, std::vector<std::string>> load_scenario(const std::string& path);
Expected<ScenarioConfig, std::vector<std::string>> parse_scenario(const std::string& json_text);

std::vector<std::string> validate(const ScenarioConfig& cfg);

/// All defaults materialized; parse(serialize(cfg)) reproduces cfg.
std::string serialize_scenario(const ScenarioConfig& cfg);

/// Numeric parameters the sweep verb may vary.
std::vector<std::string> sweepable_axes();
bool set_axis(ScenarioConfig& cfg, const std::string& axis, double value);

}  // namespace isync
