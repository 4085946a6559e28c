// SPDX-License-Identifier: Apache-2.0
#include "isync/run/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "isync/metrics/metrics.hpp"

namespace isync {

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

struct PointSpec {
  int point = 0;
  Scheme scheme = Scheme::Hybrid;
  ScenarioConfig cfg;
  std::string axis;
  double axis_value = 0.0;
};

std::vector<PointSpec> build_points(const ScenarioConfig& base, const RunOptions& opts) {
  ScenarioConfig cfg = base;
  if (opts.seed_override) cfg.seed = *opts.seed_override;

  std::vector<PointSpec> points;
  const auto& ex = cfg.experiment;

  switch (ex.mode) {
    case ExperimentConfig::Mode::Single: {
      PointSpec p{0, cfg.scheme, cfg, "", 0.0};
      points.push_back(std::move(p));
      break;
    }
    case ExperimentConfig::Mode::Grid: {
      int index = 0;
      for (std::int64_t sync_t : ex.sync_targets_ns) {
        for (std::int64_t comm_t : ex.comm_latency_targets_ns) {
          for (Scheme s : ex.schemes) {
            PointSpec p;
            p.point = index;
            p.scheme = s;
            p.cfg = cfg;
            p.cfg.scheme = s;
            p.cfg.seed = cfg.seed + static_cast<std::uint64_t>(index);
            p.cfg.requirements.precision_target_ns = sync_t;
            p.cfg.requirements.max_latency_ns = comm_t;
            p.cfg.sync.precision_target_ns = sync_t;
            points.push_back(std::move(p));
          }
          ++index;
        }
      }
      break;
    }
    case ExperimentConfig::Mode::Scale: {
      int index = 0;
      for (int n : ex.n_ues_values) {
        for (Scheme s : ex.schemes) {
          PointSpec p;
          p.point = index;
          p.scheme = s;
          p.cfg = cfg;
          p.cfg.scheme = s;
          p.cfg.seed = cfg.seed + static_cast<std::uint64_t>(index);
          p.cfg.n_ues = n;
          points.push_back(std::move(p));
        }
        ++index;
      }
      break;
    }
  }
  return points;
}

std::vector<RunResult> execute(const std::vector<PointSpec>& points, int parallel, bool trace) {
  std::vector<RunResult> results(points.size());
  if (parallel <= 1 || points.size() <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i)
      results[i] = run_simulation(points[i].cfg, trace);
    return results;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      results[i] = run_simulation(points[i].cfg, trace);
    }
  };
  std::vector<std::thread> threads;
  const int n_threads = std::min<int>(parallel, static_cast<int>(points.size()));
  threads.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return results;
}

void apply_gains(std::vector<ExperimentRow>& rows, double lambda) {
  for (auto& row : rows) {
    if (row.scheme == Scheme::Separated) {
      row.report.integration_gain = 0.0;
      continue;
    }
    const ExperimentRow* base = nullptr;
    for (const auto& other : rows)
      if (other.point == row.point && other.scheme == Scheme::Separated) base = &other;
    row.report.integration_gain =
        base ? integration_gain(row.report, base->report, lambda) : 0.0;
  }
}

std::string summary_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out << "point,scheme,n_ues,sync_target_ns,comm_latency_ns,sync_satisfaction,"
         "comm_satisfaction,satisfaction,mean_precision_ns,p95_precision_ns,"
         "mean_timeliness_ns,control_plane_bytes,user_plane_bytes,total_overhead_bytes,"
         "integration_gain\n";
  for (const auto& r : rows) {
    const double sat = (r.report.sync_satisfaction + r.report.comm_satisfaction) / 2.0;
    out << r.point << ',' << to_string(r.scheme) << ',' << r.n_ues << ',' << r.sync_target_ns
        << ',' << r.comm_latency_ns << ',' << fmt(r.report.sync_satisfaction) << ','
        << fmt(r.report.comm_satisfaction) << ',' << fmt(sat) << ','
        << fmt(r.report.mean_precision_ns, "%.3f") << ','
        << fmt(r.report.p95_precision_ns, "%.3f") << ','
        << fmt(r.report.mean_timeliness_ns, "%.3f") << ',' << r.report.control_plane_bytes
        << ',' << r.report.user_plane_bytes << ',' << r.report.total_overhead_bytes << ','
        << fmt(r.report.integration_gain) << '\n';
  }
  return out.str();
}

std::string heatmap_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out << "sync_req_ns,comm_req_ns,scheme,satisfaction,sync_satisfaction,comm_satisfaction,"
         "overhead_bytes,gain\n";
  for (const auto& r : rows) {
    const double sat = (r.report.sync_satisfaction + r.report.comm_satisfaction) / 2.0;
    out << r.sync_target_ns << ',' << r.comm_latency_ns << ',' << to_string(r.scheme) << ','
        << fmt(sat) << ',' << fmt(r.report.sync_satisfaction) << ','
        << fmt(r.report.comm_satisfaction) << ',' << r.report.total_overhead_bytes << ','
        << fmt(r.report.integration_gain) << '\n';
  }
  return out.str();
}

std::string scale_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out << "n_ues,scheme,satisfaction,sync_satisfaction,comm_satisfaction,overhead_bytes,gain\n";
  for (const auto& r : rows) {
    const double sat = (r.report.sync_satisfaction + r.report.comm_satisfaction) / 2.0;
    out << r.n_ues << ',' << to_string(r.scheme) << ',' << fmt(sat) << ','
        << fmt(r.report.sync_satisfaction) << ',' << fmt(r.report.comm_satisfaction) << ','
        << r.report.total_overhead_bytes << ',' << fmt(r.report.integration_gain) << '\n';
  }
  return out.str();
}

std::string sweep_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out << "axis,value,scheme,sync_satisfaction,comm_satisfaction,satisfaction,overhead_bytes\n";
  for (const auto& r : rows) {
    const double sat = (r.report.sync_satisfaction + r.report.comm_satisfaction) / 2.0;
    out << r.axis << ',' << fmt(r.axis_value, "%.6g") << ',' << to_string(r.scheme) << ','
        << fmt(r.report.sync_satisfaction) << ',' << fmt(r.report.comm_satisfaction) << ','
        << fmt(sat) << ',' << r.report.total_overhead_bytes << '\n';
  }
  return out.str();
}

ExperimentResult assemble(const std::vector<PointSpec>& points, std::vector<RunResult> results,
                          const ScenarioConfig& base, const RunOptions& opts,
                          const std::string& sweep_axis) {
  ExperimentResult out;
  out.rows.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    ExperimentRow row;
    row.point = points[i].point;
    row.scheme = points[i].scheme;
    row.n_ues = points[i].cfg.n_ues;
    row.sync_target_ns = points[i].cfg.requirements.precision_target_ns;
    row.comm_latency_ns = points[i].cfg.requirements.max_latency_ns;
    row.axis = points[i].axis;
    row.axis_value = points[i].axis_value;
    row.report = results[i].report;
    out.rows.push_back(std::move(row));
  }
  apply_gains(out.rows, base.metrics.gain_lambda);

  out.files["summary.csv"] = summary_csv(out.rows);
  if (!sweep_axis.empty()) {
    out.files["sweep.csv"] = sweep_csv(out.rows);
  } else if (base.experiment.mode == ExperimentConfig::Mode::Grid) {
    out.files["heatmap.csv"] = heatmap_csv(out.rows);
  } else if (base.experiment.mode == ExperimentConfig::Mode::Scale) {
    out.files["scale.csv"] = scale_csv(out.rows);
  }
  if (opts.trace && base.experiment.mode == ExperimentConfig::Mode::Single &&
      sweep_axis.empty() && results.size() == 1)
    out.files["trace.csv"] = trace_to_csv(results[0].trace);
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ScenarioConfig& cfg, const RunOptions& opts) {
  const auto points = build_points(cfg, opts);
  const bool trace =
      opts.trace && cfg.experiment.mode == ExperimentConfig::Mode::Single;
  auto results = execute(points, opts.parallel, trace);
  return assemble(points, std::move(results), cfg, opts, "");
}

ExperimentResult run_sweep(const ScenarioConfig& cfg, const std::string& axis,
                           const std::vector<double>& values, const RunOptions& opts) {
  ScenarioConfig base = cfg;
  if (opts.seed_override) base.seed = *opts.seed_override;

  std::vector<PointSpec> points;
  for (std::size_t i = 0; i < values.size(); ++i) {
    PointSpec p;
    p.point = static_cast<int>(i);
    p.scheme = base.scheme;
    p.cfg = base;
    p.cfg.seed = base.seed + i;
    p.axis = axis;
    p.axis_value = values[i];
    set_axis(p.cfg, axis, values[i]);
    points.push_back(std::move(p));
  }
  auto results = execute(points, opts.parallel, false);
  return assemble(points, std::move(results), base, opts, axis);
}

std::vector<std::string> write_outputs(const ExperimentResult& result,
                                       const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> paths;
  for (const auto& [name, content] : result.files) {
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    paths.push_back(path.string());
  }
  return paths;
}

}  // namespace isync
