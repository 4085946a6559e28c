// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <set>

#include "isync/cluster/aggregate.hpp"
#include "isync/cluster/clustering.hpp"
#include "isync/cluster/profile.hpp"
#include "isync/sim/rng.hpp"
#include "oracles.hpp"

using namespace isync;
using namespace isync::testing;

namespace {

UeProfile make_ue(NodeId id, double x, double y, std::int64_t precision = 10'000,
                  std::int64_t latency = 20'000'000, double w_sync = 0.5) {
  UeProfile p;
  p.ue = id;
  p.x_m = x;
  p.y_m = y;
  p.sync_req.precision_target_ns = precision;
  p.comm_req.max_latency_ns = latency;
  p.w_sync = w_sync;
  p.w_comm = 1.0 - w_sync;
  return p;
}

}  // namespace

TEST_CASE("service value: fully sync-weighted UE at the reference target scores 1") {
  NormalizationConstants norm{1000.0, 10'000'000.0};
  auto ue = make_ue(1, 0, 0, 1000, 20'000'000, 1.0);
  CHECK(service_value(ue, norm) == doctest::Approx(1.0));
}

TEST_CASE("service value: both targets at twice the reference score 0.5") {
  NormalizationConstants norm{1000.0, 10'000'000.0};
  auto ue = make_ue(1, 0, 0, 2000, 20'000'000, 0.5);
  CHECK(service_value(ue, norm) == doctest::Approx(0.5));
}

TEST_CASE("service value: relaxing an uncapped target strictly lowers the score") {
  NormalizationConstants norm{1000.0, 10'000'000.0};
  SeededRng rng(17);
  for (int i = 0; i < 1000; ++i) {
    const double w = rng.uniform(0.05, 0.95);
    auto ue = make_ue(1, 0, 0, rng.uniform_i64(1100, 1'000'000),
                      rng.uniform_i64(11'000'000, 400'000'000), w);
    const double base = service_value(ue, norm);
    auto relaxed_sync = ue;
    relaxed_sync.sync_req.precision_target_ns += rng.uniform_i64(1, 100'000);
    CHECK(service_value(relaxed_sync, norm) < base);
    auto relaxed_comm = ue;
    relaxed_comm.comm_req.max_latency_ns += rng.uniform_i64(1, 100'000'000);
    CHECK(service_value(relaxed_comm, norm) < base);
  }
}

TEST_CASE("profile validation catches malformed requirements") {
  auto ok = make_ue(1, 0, 0);
  CHECK_FALSE(validate(ok).has_value());
  auto bad_weights = ok;
  bad_weights.w_sync = 0.7;
  bad_weights.w_comm = 0.7;
  CHECK(validate(bad_weights).has_value());
  auto bad_target = ok;
  bad_target.sync_req.precision_target_ns = 0;
  CHECK(validate(bad_target).has_value());
  auto bad_pos = ok;
  bad_pos.x_m = std::nan("");
  CHECK(validate(bad_pos).has_value());
}

TEST_CASE("select_prioritized: budget 0 and budget >= N edge cases") {
  NormalizationConstants norm;
  std::vector<UeProfile> ues;
  for (NodeId i = 1; i <= 5; ++i) ues.push_back(make_ue(i, i, i));
  auto none = select_prioritized(ues, 0, norm);
  CHECK(none.ce_set.empty());
  CHECK(none.sdu_set.size() == 5);
  auto all = select_prioritized(ues, 99, norm);
  CHECK(all.ce_set.size() == 5);
  CHECK(all.sdu_set.empty());
}

TEST_CASE("select_prioritized matches a brute-force top-k") {
  NormalizationConstants norm{1000.0, 10'000'000.0};
  SeededRng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<UeProfile> ues;
    for (NodeId i = 1; i <= 7; ++i)
      ues.push_back(make_ue(i, 0, 0, rng.uniform_i64(500, 100'000),
                            rng.uniform_i64(5'000'000, 200'000'000), rng.uniform(0.0, 1.0)));
    const auto split = select_prioritized(ues, 3, norm);
    REQUIRE(split.ce_set.size() == 3);

    // Brute force: sort scored copies.
    std::vector<std::pair<double, NodeId>> scored;
    for (const auto& u : ues) scored.emplace_back(service_value(u, norm), u.ue);
    std::sort(scored.begin(), scored.end(), [](auto& a, auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    std::set<NodeId> expect = {scored[0].second, scored[1].second, scored[2].second};
    std::set<NodeId> got(split.ce_set.begin(), split.ce_set.end());
    CHECK(got == expect);

    // Partition: ce_set and sdu_set cover all UEs disjointly.
    std::set<NodeId> all(split.ce_set.begin(), split.ce_set.end());
    for (NodeId id : split.sdu_set) CHECK(all.insert(id).second);
    CHECK(all.size() == ues.size());
  }
}

TEST_CASE("clustering: one tight group forms a single cluster") {
  std::vector<UeProfile> ues;
  for (NodeId i = 1; i <= 6; ++i) ues.push_back(make_ue(i, i * 1.0, 0.0));
  const auto clusters = cluster_by_location(ues, 50.0);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].members.size() == 6);
}

TEST_CASE("clustering: well-separated groups stay separate") {
  std::vector<UeProfile> ues;
  for (NodeId i = 1; i <= 3; ++i) ues.push_back(make_ue(i, i * 1.0, 0.0));
  for (NodeId i = 4; i <= 6; ++i) ues.push_back(make_ue(i, 500.0 + i, 0.0));
  const auto clusters = cluster_by_location(ues, 50.0);
  CHECK(clusters.size() == 2);
}

TEST_CASE("clustering: members stay within max_radius of their head") {
  SeededRng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<UeProfile> ues;
    const int n = static_cast<int>(rng.uniform_i64(1, 12));
    for (int i = 1; i <= n; ++i)
      ues.push_back(make_ue(static_cast<NodeId>(i), rng.uniform(0, 200), rng.uniform(0, 200)));
    const double radius = rng.uniform(20.0, 80.0);
    const auto clusters = cluster_by_location(ues, radius);

    std::set<NodeId> seen;
    for (const auto& c : clusters) {
      CHECK_FALSE(c.members.empty());
      CHECK(std::find(c.members.begin(), c.members.end(), c.head) != c.members.end());
      const auto* head = &ues[0];
      for (const auto& u : ues)
        if (u.ue == c.head) head = &u;
      for (NodeId m : c.members) {
        CHECK(seen.insert(m).second);  // partition
        const auto* member = &ues[0];
        for (const auto& u : ues)
          if (u.ue == m) member = &u;
        CHECK(std::hypot(member->x_m - head->x_m, member->y_m - head->y_m) <= radius);
      }
    }
    CHECK(seen.size() == ues.size());
  }
}

TEST_CASE("clustering: greedy count stays within 2 of the exact minimum") {
  SeededRng rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<UeProfile> ues;
    const int n = static_cast<int>(rng.uniform_i64(1, 8));
    for (int i = 1; i <= n; ++i)
      ues.push_back(make_ue(static_cast<NodeId>(i), rng.uniform(0, 100), rng.uniform(0, 100)));
    const double radius = rng.uniform(15.0, 60.0);
    const auto clusters = cluster_by_location(ues, radius);
    const int optimum = min_star_cover(ues, radius);
    CHECK(static_cast<int>(clusters.size()) <= optimum + 2);
    CHECK(static_cast<int>(clusters.size()) >= optimum);
  }
}

TEST_CASE("clustering: re-clustering after movement restores the radius invariant") {
  SeededRng rng(37);
  std::vector<UeProfile> ues;
  for (int i = 1; i <= 10; ++i)
    ues.push_back(make_ue(static_cast<NodeId>(i), rng.uniform(0, 100), rng.uniform(0, 100)));
  const double radius = 30.0;
  auto clusters = cluster_by_location(ues, radius);

  // Scatter the UEs and re-cluster.
  for (auto& u : ues) {
    u.x_m = rng.uniform(0, 400);
    u.y_m = rng.uniform(0, 400);
  }
  clusters = cluster_by_location(ues, radius);
  for (const auto& c : clusters) {
    const auto* head = &ues[0];
    for (const auto& u : ues)
      if (u.ue == c.head) head = &u;
    for (NodeId m : c.members) {
      const auto* member = &ues[0];
      for (const auto& u : ues)
        if (u.ue == m) member = &u;
      CHECK(std::hypot(member->x_m - head->x_m, member->y_m - head->y_m) <= radius);
    }
  }
}

TEST_CASE("clustering: zero radius is rejected") {
  std::vector<UeProfile> ues = {make_ue(1, 0, 0)};
  CHECK_THROWS_AS(cluster_by_location(ues, 0.0), std::invalid_argument);
}

// --- aggregation ---------------------------------------------------------------

TEST_CASE("aggregate: frozen byte arithmetic for 10 members") {
  // 10 members, 8-byte payloads, 2-byte subheaders:
  // aggregated = 2 + 1 + 10*(2+8) = 103 vs standalone 10*(2+8) = 100.
  CHECK(aggregated_bytes(10, 2, 8) == 103);
  CHECK(standalone_bytes(10, 2, 8) == 100);

  Cluster cluster;
  cluster.head = 1;
  std::map<NodeId, mac::Bytes> payloads;
  for (NodeId i = 1; i <= 10; ++i) {
    cluster.members.push_back(i);
    payloads[i] = mac::Bytes(8, static_cast<std::uint8_t>(i));
  }
  const auto result = aggregate_sync_sdus(cluster, payloads);
  REQUIRE(result.subpdu.has_value());
  CHECK(result.skipped.empty());
  CHECK(mac::encoded_size(*result.subpdu) == 103);
}

TEST_CASE("aggregate: header-saving inequality, exhaustive n in [2,64], h in [2,4]") {
  for (std::size_t n = 2; n <= 64; ++n) {
    for (std::size_t h = 2; h <= 4; ++h) {
      for (std::size_t payload : {1u, 2u, 8u}) {
        const bool saves = aggregated_bytes(n, h, payload) < standalone_bytes(n, h, payload);
        const bool predicted = n * h > n * 2 + 1 + h;
        CHECK(saves == predicted);
      }
    }
  }
}

TEST_CASE("aggregate: single member costs at most 3 extra bytes") {
  // count byte + 2-byte id versus one subheader: fall back to standalone.
  for (std::size_t payload : {1u, 8u}) {
    const std::size_t agg = aggregated_bytes(1, 2, payload);
    const std::size_t alone = standalone_bytes(1, 2, payload);
    CHECK(agg >= alone);
    CHECK(agg - alone <= 3);
  }
}

TEST_CASE("aggregate: members without payloads are skipped and reported") {
  Cluster cluster;
  cluster.head = 1;
  cluster.members = {1, 2, 3};
  std::map<NodeId, mac::Bytes> payloads;
  payloads[1] = {0x0a};
  payloads[3] = {0x0b};
  const auto result = aggregate_sync_sdus(cluster, payloads);
  REQUIRE(result.subpdu.has_value());
  CHECK(result.skipped == std::vector<NodeId>{2});
  const auto* agg = std::get_if<mac::AggregateSdu>(&*result.subpdu);
  REQUIRE(agg != nullptr);
  CHECK(agg->members.size() == 2);
}

TEST_CASE("aggregate: no payloads at all emits no sub-PDU") {
  Cluster cluster;
  cluster.head = 1;
  cluster.members = {1, 2};
  const auto result = aggregate_sync_sdus(cluster, {});
  CHECK_FALSE(result.subpdu.has_value());
  CHECK(result.skipped.size() == 2);
}

TEST_CASE("aggregate round-trips through the codec") {
  Cluster cluster;
  cluster.head = 4;
  cluster.members = {4, 9, 300};
  std::map<NodeId, mac::Bytes> payloads;
  for (NodeId m : cluster.members) payloads[m] = {static_cast<std::uint8_t>(m & 0xff)};
  const auto result = aggregate_sync_sdus(cluster, payloads);
  REQUIRE(result.subpdu.has_value());
  mac::MacPdu pdu;
  pdu.subpdus.push_back(*result.subpdu);
  const auto bytes = mac::encode_pdu(pdu);
  REQUIRE(bytes.ok());
  const auto back = mac::decode_pdu(bytes.value(), Direction::Uplink);
  REQUIRE(back.ok());
  CHECK(back.value() == pdu);
}
