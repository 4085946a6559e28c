// SPDX-License-Identifier: Apache-2.0
//
// Experiment runner for the ISynC simulator.
//
//   isync run <config> [--out DIR] [--trace] [--seed N] [--parallel K]
//   isync sweep <config> --axis NAME --values a,b,c [--out DIR] [--seed N] [--parallel K]
//   isync validate <config>
//
// Exit codes: 0 success, 2 config error, 3 runtime error.

#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isync/config/scenario.hpp"
#include "isync/run/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int load_or_fail(const std::string& path, isync::ScenarioConfig& cfg) {
  auto loaded = isync::load_scenario(path);
  if (!loaded.ok()) {
    std::cerr << "config error in " << path << ":\n";
    for (const auto& diag : loaded.error()) std::cerr << "  " << diag << "\n";
    return kExitConfig;
  }
  cfg = loaded.value();
  return 0;
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    values.push_back(std::stod(tok));
  }
  return values;
}

void print_summary(const isync::ExperimentResult& result) {
  std::cout << result.files.at("summary.csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ISynC service-provisioning simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string axis;
  std::string values_csv;
  bool trace = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int parallel = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "scenario config file")->required();
    cmd->add_option("--out", out_dir, "output directory (default: out)");
    cmd->add_option("--seed", seed, "override the config seed")
        ->each([&](const std::string&) { seed_set = true; });
    cmd->add_option("--parallel", parallel, "worker threads for independent points")
        ->check(CLI::Range(1, 256));
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run the experiment a config describes");
  add_common(run_cmd);
  run_cmd->add_flag("--trace", trace, "write trace.csv (single-run configs)");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "sweep one numeric parameter");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--axis", axis, "parameter to sweep")->required();
  sweep_cmd->add_option("--values", values_csv, "comma-separated values")->required();

  CLI::App* validate_cmd = app.add_subcommand("validate", "check a config and print it");
  validate_cmd->add_option("config", config_path, "scenario config file")->required();

  CLI11_PARSE(app, argc, argv);

  isync::ScenarioConfig cfg;
  if (int rc = load_or_fail(config_path, cfg); rc != 0) return rc;

  if (validate_cmd->parsed()) {
    std::cout << isync::serialize_scenario(cfg);
    return 0;
  }

  isync::RunOptions opts;
  opts.trace = trace;
  opts.parallel = parallel;
  if (seed_set) opts.seed_override = seed;

  try {
    isync::ExperimentResult result;
    if (sweep_cmd->parsed()) {
      const auto axes = isync::sweepable_axes();
      if (std::find(axes.begin(), axes.end(), axis) == axes.end()) {
        std::cerr << "config error: unknown sweep axis '" << axis << "'. Sweepable:\n";
        for (const auto& a : axes) std::cerr << "  " << a << "\n";
        return kExitConfig;
      }
      const auto values = parse_values(values_csv);
      if (values.empty()) {
        std::cerr << "config error: --values is empty\n";
        return kExitConfig;
      }
      // Every sweep point must itself be a valid scenario.
      for (double v : values) {
        isync::ScenarioConfig point = cfg;
        isync::set_axis(point, axis, v);
        auto diags = isync::validate(point);
        if (!diags.empty()) {
          std::cerr << "config error at " << axis << "=" << v << ":\n";
          for (const auto& d : diags) std::cerr << "  " << d << "\n";
          return kExitConfig;
        }
      }
      result = isync::run_sweep(cfg, axis, values, opts);
    } else {
      result = isync::run_experiment(cfg, opts);
    }
    for (const auto& path : isync::write_outputs(result, out_dir))
      std::cerr << "wrote " << path << "\n";
    print_summary(result);
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
