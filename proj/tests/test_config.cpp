// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>

#include "isync/config/scenario.hpp"

using namespace isync;

namespace {

bool has_diag(const std::vector<std::string>& diags, const std::string& field) {
  return std::any_of(diags.begin(), diags.end(), [&](const std::string& d) {
    return d.rfind(field, 0) == 0;  // diagnostic starts with the field path
  });
}

}  // namespace

TEST_CASE("empty object parses to materialized defaults") {
  const auto r = parse_scenario("{}");
  REQUIRE(r.ok());
  const auto& cfg = r.value();
  CHECK(cfg.scheme == Scheme::Hybrid);
  CHECK(cfg.grid.tti_ns == 1'000'000);
  CHECK(cfg.sync.sqi_scaling.size() == 3);
  CHECK(cfg.sync.precision_target_ns == cfg.requirements.precision_target_ns);
}

TEST_CASE("serialize/parse round-trip is semantically identical") {
  auto first = parse_scenario("{\"seed\": 7, \"n_ues\": 3, \"scheme\": \"ce\"}");
  REQUIRE(first.ok());
  const std::string text = serialize_scenario(first.value());
  const auto second = parse_scenario(text);
  REQUIRE(second.ok());
  CHECK(serialize_scenario(second.value()) == text);
  CHECK(second.value().seed == 7);
  CHECK(second.value().n_ues == 3);
  CHECK(second.value().scheme == Scheme::Ce);
}

TEST_CASE("diagnostics name the offending fields") {
  const auto r = parse_scenario(R"({
    "n_ues": 0,
    "scheme": "warp",
    "channel": {"loss_prob": 1.5},
    "metrics": {"percentile": 0.0}
  })");
  REQUIRE_FALSE(r.ok());
  CHECK(has_diag(r.error(), "n_ues"));
  CHECK(has_diag(r.error(), "scheme"));
  CHECK(has_diag(r.error(), "channel.loss_prob"));
  CHECK(has_diag(r.error(), "metrics.percentile"));
}

TEST_CASE("all diagnostics are reported at once") {
  const auto r = parse_scenario(R"({"n_ues": 0, "duration_ns": -5})");
  REQUIRE_FALSE(r.ok());
  CHECK(r.error().size() >= 2);
}

TEST_CASE("unknown fields are flagged") {
  const auto r = parse_scenario(R"({"n_uas": 5})");
  REQUIRE_FALSE(r.ok());
  CHECK(has_diag(r.error(), "n_uas"));
}

TEST_CASE("type mismatches are field-level diagnostics") {
  const auto r = parse_scenario(R"({"seed": "abc"})");
  REQUIRE_FALSE(r.ok());
  CHECK(has_diag(r.error(), "seed"));
}

TEST_CASE("non-monotone sqi multiplier tables are rejected") {
  const auto r = parse_scenario(R"({
    "sync": {"sqi_scaling": [
      {"level_max": 85, "multiplier": 0.5},
      {"level_max": 255, "multiplier": 1.0}
    ]}
  })");
  REQUIRE_FALSE(r.ok());
  CHECK(has_diag(r.error(), "sync"));
}

TEST_CASE("malformed JSON is one diagnostic, not a crash") {
  const auto r = parse_scenario("{nope");
  REQUIRE_FALSE(r.ok());
  CHECK(has_diag(r.error(), "json"));
}

TEST_CASE("timeliness target must leave room for the skew window") {
  const auto r = parse_scenario(R"({
    "sync": {"skew_window_ns": 400000000},
    "requirements": {"timeliness_target_ns": 300000000}
  })");
  REQUIRE_FALSE(r.ok());
  CHECK(has_diag(r.error(), "requirements.timeliness_target_ns"));
}

TEST_CASE("grid experiment requires axes and schemes") {
  const auto r = parse_scenario(R"({"experiment": {"mode": "grid"}})");
  REQUIRE_FALSE(r.ok());
  CHECK(has_diag(r.error(), "experiment.schemes"));
  CHECK(has_diag(r.error(), "experiment.sync_targets_ns"));
  CHECK(has_diag(r.error(), "experiment.comm_latency_targets_ns"));
}

TEST_CASE("scale experiment parses") {
  const auto r = parse_scenario(R"({
    "experiment": {
      "mode": "scale",
      "schemes": ["separated", "hybrid"],
      "n_ues_values": [50, 100]
    }
  })");
  REQUIRE(r.ok());
  CHECK(r.value().experiment.mode == ExperimentConfig::Mode::Scale);
  CHECK(r.value().experiment.schemes.size() == 2);
}

TEST_CASE("sweepable axes apply to the config") {
  auto cfg = parse_scenario("{}").value();
  for (const auto& axis : sweepable_axes()) {
    ScenarioConfig copy = cfg;
    CHECK(set_axis(copy, axis, 50));
  }
  CHECK_FALSE(set_axis(cfg, "no.such.axis", 1));

  ScenarioConfig copy = cfg;
  REQUIRE(set_axis(copy, "n_ues", 123));
  CHECK(copy.n_ues == 123);
  REQUIRE(set_axis(copy, "requirements.precision_target_ns", 5000));
  CHECK(copy.requirements.precision_target_ns == 5000);
  CHECK(copy.sync.precision_target_ns == 5000);  // mirrored into the policy
}
