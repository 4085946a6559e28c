// SPDX-License-Identifier: Apache-2.0
#include "isync/config/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace isync {

using nlohmann::json;

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::Separated: return "separated";
    case Scheme::Sdu: return "sdu";
    case Scheme::Ce: return "ce";
    case Scheme::Hybrid: return "hybrid";
  }
  return "?";
}

std::optional<Scheme> scheme_from(const std::string& name) {
  if (name == "separated") return Scheme::Separated;
  if (name == "sdu") return Scheme::Sdu;
  if (name == "ce") return Scheme::Ce;
  if (name == "hybrid") return Scheme::Hybrid;
  return std::nullopt;
}

const char* to_string(ExperimentConfig::Mode m) {
  switch (m) {
    case ExperimentConfig::Mode::Single: return "single";
    case ExperimentConfig::Mode::Grid: return "grid";
    case ExperimentConfig::Mode::Scale: return "scale";
  }
  return "?";
}

namespace {

/// Field reader that collects diagnostics and flags unknown keys.
class Section {
 public:
  Section(const json& j, std::string path, std::vector<std::string>& diags)
      : j_(j), path_(std::move(path)), diags_(diags) {}

  ~Section() {
    if (!j_.is_object()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) diag(it.key(), "unknown field");
  }

  Section sub(const std::string& key) {
    seen_.insert(key);
    static const json empty = json::object();
    const json* child = &empty;
    if (j_.is_object() && j_.contains(key)) {
      if (j_[key].is_object())
        child = &j_[key];
      else
        diag(key, "expected an object");
    }
    return Section(*child, path_.empty() ? key : path_ + "." + key, diags_);
  }

  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }
  const json* raw(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return nullptr;
    return &j_.at(key);
  }

  template <typename T>
  void number(const std::string& key, T& out) {
    const json* v = raw(key);
    if (!v) return;
    if (!v->is_number()) {
      diag(key, "expected a number");
      return;
    }
    out = v->get<T>();
  }

  void boolean(const std::string& key, bool& out) {
    const json* v = raw(key);
    if (!v) return;
    if (!v->is_boolean()) {
      diag(key, "expected a boolean");
      return;
    }
    out = v->get<bool>();
  }

  void str(const std::string& key, std::string& out) {
    const json* v = raw(key);
    if (!v) return;
    if (!v->is_string()) {
      diag(key, "expected a string");
      return;
    }
    out = v->get<std::string>();
  }

  template <typename T>
  void number_list(const std::string& key, std::vector<T>& out) {
    const json* v = raw(key);
    if (!v) return;
    if (!v->is_array()) {
      diag(key, "expected an array of numbers");
      return;
    }
    std::vector<T> parsed;
    for (const auto& item : *v) {
      if (!item.is_number()) {
        diag(key, "expected an array of numbers");
        return;
      }
      parsed.push_back(item.get<T>());
    }
    out = std::move(parsed);
  }

  void diag(const std::string& key, const std::string& problem) {
    diags_.push_back((path_.empty() ? key : path_ + "." + key) + ": " + problem);
  }

 private:
  const json& j_;
  std::string path_;
  std::vector<std::string>& diags_;
  std::set<std::string> seen_;
};

JitterSpec::Kind jitter_kind_from(const std::string& name, Section& sec) {
  if (name == "none") return JitterSpec::Kind::None;
  if (name == "uniform") return JitterSpec::Kind::Uniform;
  if (name == "truncnormal") return JitterSpec::Kind::TruncNormal;
  sec.diag("kind", "unknown jitter kind (none|uniform|truncnormal)");
  return JitterSpec::Kind::None;
}

const char* jitter_kind_name(JitterSpec::Kind k) {
  switch (k) {
    case JitterSpec::Kind::None: return "none";
    case JitterSpec::Kind::Uniform: return "uniform";
    case JitterSpec::Kind::TruncNormal: return "truncnormal";
  }
  return "none";
}

ScenarioConfig parse_into(const json& root, std::vector<std::string>& diags) {
  ScenarioConfig cfg;
  Section top(root, "", diags);

  top.number("seed", cfg.seed);
  top.number("n_ues", cfg.n_ues);
  top.number("duration_ns", cfg.duration_ns);
  {
    std::string name = to_string(cfg.scheme);
    top.str("scheme", name);
    if (auto s = scheme_from(name))
      cfg.scheme = *s;
    else
      top.diag("scheme", "unknown scheme (separated|sdu|ce|hybrid)");
  }

  {
    Section ch = top.sub("channel");
    ch.number("dl_delay_base_ns", cfg.channel.dl_delay_base_ns);
    ch.number("ul_delay_base_ns", cfg.channel.ul_delay_base_ns);
    ch.number("loss_prob", cfg.channel.loss_prob);
    ch.number("asymmetry_ns", cfg.channel.asymmetry_ns);
    ch.number("per_byte_ns", cfg.channel.per_byte_ns);
    Section jit = ch.sub("jitter");
    std::string kind = jitter_kind_name(cfg.channel.jitter.kind);
    jit.str("kind", kind);
    cfg.channel.jitter.kind = jitter_kind_from(kind, jit);
    jit.number("a", cfg.channel.jitter.a);
    jit.number("b", cfg.channel.jitter.b);
  }

  {
    Section ck = top.sub("clocks");
    ck.number("offset_max_ns", cfg.clocks.offset_max_ns);
    ck.number("skew_max_ppm", cfg.clocks.skew_max_ppm);
    ck.number("rw_noise_sigma", cfg.clocks.rw_noise_sigma);
    ck.number("skew_bound_ppm", cfg.clocks.skew_bound_ppm);
    ck.boolean("phy_timestamping", cfg.clocks.phy_timestamping);
    ck.number("ts_error_bound_ns", cfg.clocks.ts_error_bound_ns);
  }

  {
    Section sy = top.sub("sync");
    sy.number("base_period_ns", cfg.sync.base_period_ns);
    sy.number("skew_window_ns", cfg.sync.skew_window_ns);
    if (const json* bands = sy.raw("sqi_scaling")) {
      if (!bands->is_array()) {
        sy.diag("sqi_scaling", "expected an array of {level_max, multiplier}");
      } else {
        std::vector<SqiBand> parsed;
        bool ok = true;
        for (const auto& item : *bands) {
          if (!item.is_object() || !item.contains("level_max") || !item.contains("multiplier") ||
              !item["level_max"].is_number() || !item["multiplier"].is_number()) {
            sy.diag("sqi_scaling", "expected an array of {level_max, multiplier}");
            ok = false;
            break;
          }
          parsed.push_back({static_cast<std::uint8_t>(item["level_max"].get<int>()),
                            item["multiplier"].get<double>()});
        }
        if (ok) cfg.sync.sqi_scaling = std::move(parsed);
      }
    }
  }

  {
    Section rq = top.sub("requirements");
    rq.number("precision_target_ns", cfg.requirements.precision_target_ns);
    rq.number("timeliness_target_ns", cfg.requirements.timeliness_target_ns);
    rq.number("min_throughput_bps", cfg.requirements.min_throughput_bps);
    rq.number("max_latency_ns", cfg.requirements.max_latency_ns);
  }

  {
    Section gr = top.sub("grid");
    gr.number("tti_ns", cfg.grid.tti_ns);
    gr.number("n_freq_blocks", cfg.grid.n_freq_blocks);
    gr.number("block_capacity_bytes", cfg.grid.block_capacity_bytes);
    gr.number("ctrl_blocks", cfg.grid.ctrl_blocks);
    gr.number("ctrl_capacity_bytes", cfg.grid.ctrl_capacity_bytes);
    gr.number("horizon_ttis", cfg.grid.horizon_ttis);
    gr.number("urgency_threshold_ttis", cfg.grid.urgency_threshold_ttis);
  }

  {
    Section tr = top.sub("traffic");
    tr.number("comm_payload_bytes", cfg.traffic.comm_payload_bytes);
    tr.number("comm_period_ns", cfg.traffic.comm_period_ns);
  }

  {
    Section cl = top.sub("cluster");
    cl.number("cell_size_m", cfg.cluster.cell_size_m);
    cl.number("max_radius_m", cfg.cluster.max_radius_m);
    cl.number("ce_budget", cfg.cluster.ce_budget);
    cl.number("p_ref_ns", cfg.cluster.p_ref_ns);
    cl.number("l_ref_ns", cfg.cluster.l_ref_ns);
  }

  {
    Section bl = top.sub("baseline");
    bl.number("h_base_bytes", cfg.baseline.h_base_bytes);
  }

  {
    Section me = top.sub("metrics");
    me.number("lambda", cfg.metrics.gain_lambda);
    me.number("percentile", cfg.metrics.percentile);
    me.number("window", cfg.metrics.window);
    me.number("warmup_ns", cfg.metrics.warmup_ns);
  }

  {
    Section pg = top.sub("piggyback");
    pg.boolean("enabled", cfg.piggyback_enabled);
  }

  {
    Section ex = top.sub("experiment");
    std::string mode = to_string(cfg.experiment.mode);
    ex.str("mode", mode);
    if (mode == "single")
      cfg.experiment.mode = ExperimentConfig::Mode::Single;
    else if (mode == "grid")
      cfg.experiment.mode = ExperimentConfig::Mode::Grid;
    else if (mode == "scale")
      cfg.experiment.mode = ExperimentConfig::Mode::Scale;
    else
      ex.diag("mode", "unknown mode (single|grid|scale)");

    if (const json* schemes = ex.raw("schemes")) {
      if (!schemes->is_array()) {
        ex.diag("schemes", "expected an array of scheme names");
      } else {
        std::vector<Scheme> parsed;
        for (const auto& item : *schemes) {
          if (!item.is_string()) {
            ex.diag("schemes", "expected an array of scheme names");
            break;
          }
          if (auto s = scheme_from(item.get<std::string>()))
            parsed.push_back(*s);
          else
            ex.diag("schemes", "unknown scheme '" + item.get<std::string>() + "'");
        }
        cfg.experiment.schemes = std::move(parsed);
      }
    }
    ex.number_list("sync_targets_ns", cfg.experiment.sync_targets_ns);
    ex.number_list("comm_latency_targets_ns", cfg.experiment.comm_latency_targets_ns);
    ex.number_list("n_ues_values", cfg.experiment.n_ues_values);
  }

  // The sync policy mirrors the requirement targets.
  cfg.sync.precision_target_ns = cfg.requirements.precision_target_ns;
  cfg.sync.timeliness_target_ns = cfg.requirements.timeliness_target_ns;
  return cfg;
}

}  // namespace

std::vector<std::string> validate(const ScenarioConfig& cfg) {
  std::vector<std::string> diags;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) diags.push_back(msg);
  };

  need(cfg.n_ues >= 1, "n_ues: must be at least 1");
  need(cfg.duration_ns > 0, "duration_ns: must be positive");
  need(cfg.channel.dl_delay_base_ns > 0, "channel.dl_delay_base_ns: must be positive");
  need(cfg.channel.ul_delay_base_ns + cfg.channel.asymmetry_ns > 0,
       "channel.ul_delay_base_ns + asymmetry_ns: must be positive");
  need(cfg.channel.loss_prob >= 0.0 && cfg.channel.loss_prob <= 1.0,
       "channel.loss_prob: must be in [0, 1]");
  need(cfg.channel.per_byte_ns >= 0.0, "channel.per_byte_ns: must be non-negative");
  if (cfg.channel.jitter.kind == JitterSpec::Kind::Uniform)
    need(cfg.channel.jitter.a >= 0.0 && cfg.channel.jitter.b >= cfg.channel.jitter.a,
         "channel.jitter: uniform requires 0 <= a <= b");
  if (cfg.channel.jitter.kind == JitterSpec::Kind::TruncNormal)
    need(cfg.channel.jitter.a >= 0.0 && cfg.channel.jitter.b >= 0.0,
         "channel.jitter: truncnormal requires mean, sigma >= 0");

  need(cfg.clocks.offset_max_ns >= 0.0, "clocks.offset_max_ns: must be non-negative");
  need(cfg.clocks.skew_max_ppm >= 0.0, "clocks.skew_max_ppm: must be non-negative");
  need(cfg.clocks.skew_max_ppm <= cfg.clocks.skew_bound_ppm,
       "clocks.skew_max_ppm: exceeds skew_bound_ppm");
  need(cfg.clocks.rw_noise_sigma >= 0.0, "clocks.rw_noise_sigma: must be non-negative");
  need(cfg.clocks.ts_error_bound_ns >= 0, "clocks.ts_error_bound_ns: must be non-negative");

  if (auto err = validate(cfg.sync)) diags.push_back("sync: " + *err);

  need(cfg.requirements.precision_target_ns > 0,
       "requirements.precision_target_ns: must be positive");
  need(cfg.requirements.timeliness_target_ns > 0,
       "requirements.timeliness_target_ns: must be positive");
  need(cfg.requirements.timeliness_target_ns >
           cfg.sync.skew_window_ns + 25 * cfg.grid.tti_ns,
       "requirements.timeliness_target_ns: must exceed the skew window plus "
       "scheduling slack (25 TTIs)");
  need(cfg.requirements.min_throughput_bps > 0.0,
       "requirements.min_throughput_bps: must be positive");
  need(cfg.requirements.max_latency_ns > 0, "requirements.max_latency_ns: must be positive");

  need(cfg.grid.tti_ns > 0, "grid.tti_ns: must be positive");
  need(cfg.grid.n_freq_blocks >= 1, "grid.n_freq_blocks: must be at least 1");
  need(cfg.grid.block_capacity_bytes >= 1, "grid.block_capacity_bytes: must be at least 1");
  need(cfg.grid.ctrl_blocks >= 1, "grid.ctrl_blocks: must be at least 1");
  need(cfg.grid.ctrl_capacity_bytes >= 24,
       "grid.ctrl_capacity_bytes: must fit the largest control-element PDU (>= 24)");
  need(cfg.grid.horizon_ttis >= 1, "grid.horizon_ttis: must be at least 1");
  need(cfg.grid.urgency_threshold_ttis >= 0,
       "grid.urgency_threshold_ttis: must be non-negative");

  need(cfg.traffic.comm_payload_bytes >= 1, "traffic.comm_payload_bytes: must be at least 1");
  need(cfg.traffic.comm_payload_bytes + 3 <= cfg.grid.block_capacity_bytes,
       "traffic.comm_payload_bytes: payload plus subheader must fit one block");
  need(cfg.traffic.comm_period_ns > 0, "traffic.comm_period_ns: must be positive");

  need(cfg.cluster.cell_size_m > 0.0, "cluster.cell_size_m: must be positive");
  need(cfg.cluster.max_radius_m > 0.0, "cluster.max_radius_m: must be positive");
  need(cfg.cluster.p_ref_ns > 0.0, "cluster.p_ref_ns: must be positive");
  need(cfg.cluster.l_ref_ns > 0.0, "cluster.l_ref_ns: must be positive");

  need(cfg.baseline.h_base_bytes + 8 <= cfg.grid.block_capacity_bytes,
       "baseline.h_base_bytes: baseline packet must fit one block");

  need(cfg.metrics.gain_lambda >= 0.0 && cfg.metrics.gain_lambda <= 1.0,
       "metrics.lambda: must be in [0, 1]");
  need(cfg.metrics.percentile > 0.0 && cfg.metrics.percentile <= 1.0,
       "metrics.percentile: must be in (0, 1]");
  need(cfg.metrics.warmup_ns >= 0, "metrics.warmup_ns: must be non-negative");
  need(cfg.metrics.warmup_ns < cfg.duration_ns, "metrics.warmup_ns: must precede run end");

  if (cfg.experiment.mode == ExperimentConfig::Mode::Grid) {
    need(!cfg.experiment.schemes.empty(), "experiment.schemes: grid mode needs schemes");
    need(!cfg.experiment.sync_targets_ns.empty(),
         "experiment.sync_targets_ns: grid mode needs values");
    need(!cfg.experiment.comm_latency_targets_ns.empty(),
         "experiment.comm_latency_targets_ns: grid mode needs values");
    for (auto v : cfg.experiment.sync_targets_ns)
      need(v > 0, "experiment.sync_targets_ns: values must be positive");
    for (auto v : cfg.experiment.comm_latency_targets_ns)
      need(v > 0, "experiment.comm_latency_targets_ns: values must be positive");
  }
  if (cfg.experiment.mode == ExperimentConfig::Mode::Scale) {
    need(!cfg.experiment.schemes.empty(), "experiment.schemes: scale mode needs schemes");
    need(!cfg.experiment.n_ues_values.empty(),
         "experiment.n_ues_values: scale mode needs values");
    for (auto v : cfg.experiment.n_ues_values)
      need(v >= 1, "experiment.n_ues_values: values must be at least 1");
  }
  return diags;
}

Expected<ScenarioConfig, std::vector<std::string>> parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    return std::vector<std::string>{std::string("json: ") + e.what()};
  }
  if (!root.is_object()) return std::vector<std::string>{"json: top level must be an object"};

  std::vector<std::string> diags;
  ScenarioConfig cfg = parse_into(root, diags);
  auto more = validate(cfg);
  diags.insert(diags.end(), more.begin(), more.end());
  if (!diags.empty()) return diags;
  return cfg;
}

Expected<ScenarioConfig, std::vector<std::string>> load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::vector<std::string>{"config: cannot open " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["n_ues"] = cfg.n_ues;
  j["scheme"] = to_string(cfg.scheme);
  j["duration_ns"] = cfg.duration_ns;
  j["channel"] = {
      {"dl_delay_base_ns", cfg.channel.dl_delay_base_ns},
      {"ul_delay_base_ns", cfg.channel.ul_delay_base_ns},
      {"jitter",
       {{"kind", jitter_kind_name(cfg.channel.jitter.kind)},
        {"a", cfg.channel.jitter.a},
        {"b", cfg.channel.jitter.b}}},
      {"loss_prob", cfg.channel.loss_prob},
      {"asymmetry_ns", cfg.channel.asymmetry_ns},
      {"per_byte_ns", cfg.channel.per_byte_ns},
  };
  j["clocks"] = {
      {"offset_max_ns", cfg.clocks.offset_max_ns},
      {"skew_max_ppm", cfg.clocks.skew_max_ppm},
      {"rw_noise_sigma", cfg.clocks.rw_noise_sigma},
      {"skew_bound_ppm", cfg.clocks.skew_bound_ppm},
      {"phy_timestamping", cfg.clocks.phy_timestamping},
      {"ts_error_bound_ns", cfg.clocks.ts_error_bound_ns},
  };
  json bands = json::array();
  for (const auto& b : cfg.sync.sqi_scaling)
    bands.push_back({{"level_max", b.level_max}, {"multiplier", b.multiplier}});
  j["sync"] = {
      {"base_period_ns", cfg.sync.base_period_ns},
      {"skew_window_ns", cfg.sync.skew_window_ns},
      {"sqi_scaling", bands},
  };
  j["requirements"] = {
      {"precision_target_ns", cfg.requirements.precision_target_ns},
      {"timeliness_target_ns", cfg.requirements.timeliness_target_ns},
      {"min_throughput_bps", cfg.requirements.min_throughput_bps},
      {"max_latency_ns", cfg.requirements.max_latency_ns},
  };
  j["grid"] = {
      {"tti_ns", cfg.grid.tti_ns},
      {"n_freq_blocks", cfg.grid.n_freq_blocks},
      {"block_capacity_bytes", cfg.grid.block_capacity_bytes},
      {"ctrl_blocks", cfg.grid.ctrl_blocks},
      {"ctrl_capacity_bytes", cfg.grid.ctrl_capacity_bytes},
      {"horizon_ttis", cfg.grid.horizon_ttis},
      {"urgency_threshold_ttis", cfg.grid.urgency_threshold_ttis},
  };
  j["traffic"] = {
      {"comm_payload_bytes", cfg.traffic.comm_payload_bytes},
      {"comm_period_ns", cfg.traffic.comm_period_ns},
  };
  j["cluster"] = {
      {"cell_size_m", cfg.cluster.cell_size_m},
      {"max_radius_m", cfg.cluster.max_radius_m},
      {"ce_budget", cfg.cluster.ce_budget},
      {"p_ref_ns", cfg.cluster.p_ref_ns},
      {"l_ref_ns", cfg.cluster.l_ref_ns},
  };
  j["baseline"] = {{"h_base_bytes", cfg.baseline.h_base_bytes}};
  j["metrics"] = {
      {"lambda", cfg.metrics.gain_lambda},
      {"percentile", cfg.metrics.percentile},
      {"window", cfg.metrics.window},
      {"warmup_ns", cfg.metrics.warmup_ns},
  };
  j["piggyback"] = {{"enabled", cfg.piggyback_enabled}};
  json schemes = json::array();
  for (Scheme s : cfg.experiment.schemes) schemes.push_back(to_string(s));
  j["experiment"] = {
      {"mode", to_string(cfg.experiment.mode)},
      {"schemes", schemes},
      {"sync_targets_ns", cfg.experiment.sync_targets_ns},
      {"comm_latency_targets_ns", cfg.experiment.comm_latency_targets_ns},
      {"n_ues_values", cfg.experiment.n_ues_values},
  };
  return j.dump(2) + "\n";
}

std::vector<std::string> sweepable_axes() {
  return {
      "n_ues",
      "duration_ns",
      "channel.loss_prob",
      "channel.dl_delay_base_ns",
      "channel.ul_delay_base_ns",
      "channel.asymmetry_ns",
      "clocks.skew_max_ppm",
      "clocks.offset_max_ns",
      "sync.base_period_ns",
      "sync.skew_window_ns",
      "requirements.precision_target_ns",
      "requirements.timeliness_target_ns",
      "requirements.max_latency_ns",
      "grid.n_freq_blocks",
      "grid.block_capacity_bytes",
      "traffic.comm_period_ns",
      "traffic.comm_payload_bytes",
      "cluster.max_radius_m",
      "cluster.ce_budget",
  };
}

bool set_axis(ScenarioConfig& cfg, const std::string& axis, double value) {
  auto i64 = [&](std::int64_t& field) { field = static_cast<std::int64_t>(value); };
  if (axis == "n_ues") {
    cfg.n_ues = static_cast<int>(value);
  } else if (axis == "duration_ns") {
    i64(cfg.duration_ns);
  } else if (axis == "channel.loss_prob") {
    cfg.channel.loss_prob = value;
  } else if (axis == "channel.dl_delay_base_ns") {
    i64(cfg.channel.dl_delay_base_ns);
  } else if (axis == "channel.ul_delay_base_ns") {
    i64(cfg.channel.ul_delay_base_ns);
  } else if (axis == "channel.asymmetry_ns") {
    i64(cfg.channel.asymmetry_ns);
  } else if (axis == "clocks.skew_max_ppm") {
    cfg.clocks.skew_max_ppm = value;
  } else if (axis == "clocks.offset_max_ns") {
    cfg.clocks.offset_max_ns = value;
  } else if (axis == "sync.base_period_ns") {
    i64(cfg.sync.base_period_ns);
  } else if (axis == "sync.skew_window_ns") {
    i64(cfg.sync.skew_window_ns);
  } else if (axis == "requirements.precision_target_ns") {
    i64(cfg.requirements.precision_target_ns);
    cfg.sync.precision_target_ns = cfg.requirements.precision_target_ns;
  } else if (axis == "requirements.timeliness_target_ns") {
    i64(cfg.requirements.timeliness_target_ns);
    cfg.sync.timeliness_target_ns = cfg.requirements.timeliness_target_ns;
  } else if (axis == "requirements.max_latency_ns") {
    i64(cfg.requirements.max_latency_ns);
  } else if (axis == "grid.n_freq_blocks") {
    cfg.grid.n_freq_blocks = static_cast<int>(value);
  } else if (axis == "grid.block_capacity_bytes") {
    cfg.grid.block_capacity_bytes = static_cast<std::uint32_t>(value);
  } else if (axis == "traffic.comm_period_ns") {
    i64(cfg.traffic.comm_period_ns);
  } else if (axis == "traffic.comm_payload_bytes") {
    cfg.traffic.comm_payload_bytes = static_cast<std::uint32_t>(value);
  } else if (axis == "cluster.max_radius_m") {
    cfg.cluster.max_radius_m = value;
  } else if (axis == "cluster.ce_budget") {
    cfg.cluster.ce_budget = static_cast<std::size_t>(value);
  } else {
    return false;
  }
  return true;
}

}  // namespace isync
