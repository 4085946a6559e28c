// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isync/config/scenario.hpp"
#include "isync/run/simulation.hpp"

namespace isync {

struct RunOptions {
  bool trace = false;                        // single mode only
  std::optional<std::uint64_t> seed_override;
  int parallel = 1;
};

/// One executed scenario point.
struct ExperimentRow {
  int point = 0;
  Scheme scheme = Scheme::Hybrid;
  int n_ues = 0;
  std::int64_t sync_target_ns = 0;
  std::int64_t comm_latency_ns = 0;
  std::string axis;        // sweep verb only
  double axis_value = 0.0;
  MetricsReport report;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  /// Output files, name -> content. Always contains summary.csv; grid adds
  /// heatmap.csv, scale adds scale.csv, sweeps add sweep.csv, tracing adds
  /// trace.csv.
  std::map<std::string, std::string> files;
};

/// Executes the experiment a config describes (single, grid or scale).
/// Point seeds derive as seed + point_index; schemes of one point share the
/// seed so integration gain compares identical populations. Points run in
/// parallel when requested; outputs are byte-identical regardless.
ExperimentResult run_experiment(const ScenarioConfig& cfg, const RunOptions& opts);

/// Generic one-axis sweep of the config's own scheme.
ExperimentResult run_sweep(const ScenarioConfig& cfg, const std::string& axis,
                           const std::vector<double>& values, const RunOptions& opts);

/// Writes result.files into out_dir (created if missing); returns paths.
std::vector<std::string> write_outputs(const ExperimentResult& result,
                                       const std::string& out_dir);

}  // namespace isync
