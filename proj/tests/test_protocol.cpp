// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "isync/clock/clock_state.hpp"
#include "isync/proto/baseline.hpp"
#include "isync/proto/policy.hpp"
#include "isync/proto/session.hpp"

using namespace isync;

namespace {

/// Drives one full exchange over a constant symmetric channel, encoding
/// and decoding every PDU through the real codec. Returns the number of
/// transmissions and the state of both ends.
struct ExchangeRun {
  int transmissions = 0;
  std::uint64_t ul_timestamp_bytes = 0;
  std::uint64_t ce_total_bytes = 0;
  UeSession ue;
  SyncEstimate estimate;
  bool completed = false;
};

ExchangeRun run_exchange(Carriage carriage, bool phy, ClockState& clock,
                         std::int64_t delay_ns, std::int64_t t0,
                         std::int64_t skew_window_ns) {
  SessionConfig cfg;
  cfg.carriage = carriage;
  cfg.phy_timestamping = phy;
  cfg.skew_window_ns = skew_window_ns;
  cfg.ts_error_bound_ns = 0;  // deterministic stamps for exact recovery

  SeededRng stamp_rng(7);
  SeededRng noise_rng(8);
  BsSession bs(1, 1, cfg, SimTime{t0 + 1'000'000'000});
  bs.start();

  ExchangeRun run;
  run.ue = UeSession(1, 1, cfg);

  auto deliver_dl = [&](const mac::MacPdu& pdu, std::int64_t depart) {
    const auto bytes = mac::encode_pdu(pdu).value();
    run.ce_total_bytes += bytes.size();
    ++run.transmissions;
    const auto back = mac::decode_pdu(bytes, Direction::Downlink).value();
    return run.ue.on_dl(back, clock.read_local(SimTime{depart + delay_ns}, noise_rng));
  };

  std::int64_t t = t0;
  auto r = deliver_dl(bs.finalize_s1(SimTime{t}, stamp_rng), t);
  std::int64_t last_arrival = t + delay_ns;
  if (bs.f1_pending()) {
    bs.clear_f1_pending();
    t = last_arrival + 2000;  // next slot after the S1 arrival
    r = deliver_dl(bs.finalize_f1(), t);
    last_arrival = t + delay_ns;
  }
  REQUIRE(r.send_s2);

  // Uplink SQI departs after the last downlink arrival.
  t = last_arrival + 2000;
  const auto s2 = run.ue.finalize_s2(clock.read_local(SimTime{t}, noise_rng), 0);
  const auto s2_bytes = mac::encode_pdu(s2).value();
  ++run.transmissions;
  run.ce_total_bytes += s2_bytes.size();

  // Count uplink timestamp value bytes: full stamps and compressed suffixes.
  const auto s2_decoded = mac::decode_pdu(s2_bytes, Direction::Uplink).value();
  for (const auto& sub : s2_decoded.subpdus) {
    if (const auto* sdu = std::get_if<mac::IsyncSdu>(&sub))
      if (sdu->kind == mac::IsyncSdu::Kind::Timestamp) run.ul_timestamp_bytes += 8;
    if (std::get_if<mac::IsyncCe>(&sub)) {
      // Only an S2 CE is legal here; it carries no timestamp.
    }
  }

  const SimTime s3_at = bs.on_s2(SimTime{t + delay_ns}, 0);

  std::int64_t t_s3 = std::max(s3_at.ns, t + delay_ns + 2000);
  r = deliver_dl(bs.finalize_s3(SimTime{t_s3}, stamp_rng), t_s3);
  if (bs.f2_pending()) {
    bs.clear_f2_pending();
    t_s3 += delay_ns + 2000;  // after the S3 arrival
    r = deliver_dl(bs.finalize_f2(), t_s3);
  }
  run.completed = r.completed;
  run.estimate = r.estimate;
  return run;
}

}  // namespace

// --- SQI and resync policy ----------------------------------------------------

TEST_CASE("sqi quantization matches the spec formula") {
  CHECK(sqi_from_error(0.0, 1000) == 0);
  CHECK(sqi_from_error(3.9, 1000) == 0);    // below target/256
  CHECK(sqi_from_error(4.0, 1000) == 1);    // 256 * 4/1000 = 1.024
  CHECK(sqi_from_error(500.0, 1000) == 128);
  CHECK(sqi_from_error(999.0, 1000) == 255);
  CHECK(sqi_from_error(1000.0, 1000) == 255);
  CHECK(sqi_from_error(1e12, 1000) == 255);  // saturates
  CHECK(sqi_from_error(-500.0, 1000) == 128);
}

TEST_CASE("next_sync_time applies the shipped band table") {
  SyncPolicy policy;
  policy.base_period_ns = 100'000'000;
  CHECK(next_sync_time(policy, SqiReport{0}, SimTime{5}).ns == 5 + 100'000'000);
  CHECK(next_sync_time(policy, SqiReport{255}, SimTime{5}).ns == 5 + 25'000'000);
  CHECK(next_sync_time(policy, SqiReport{100}, SimTime{5}).ns == 5 + 50'000'000);
}

TEST_CASE("next_sync_time is monotone: worse quality never resyncs later") {
  SyncPolicy policy;
  for (int a = 0; a < 256; ++a)
    for (int b = a + 1; b < 256; b += 17)
      CHECK(next_sync_time(policy, SqiReport{static_cast<std::uint8_t>(a)}, SimTime{0}).ns >=
            next_sync_time(policy, SqiReport{static_cast<std::uint8_t>(b)}, SimTime{0}).ns);
}

TEST_CASE("policy validation rejects malformed band tables") {
  SyncPolicy ok;
  CHECK_FALSE(validate(ok).has_value());

  SyncPolicy increasing = ok;
  increasing.sqi_scaling = {{85, 0.5}, {255, 1.0}};  // speeds *down* on worse quality
  CHECK(validate(increasing).has_value());

  SyncPolicy gap = ok;
  gap.sqi_scaling = {{85, 1.0}, {200, 0.5}};  // does not cover 255
  CHECK(validate(gap).has_value());

  SyncPolicy zero = ok;
  zero.base_period_ns = 0;
  CHECK(validate(zero).has_value());
}

// --- the six-timestamp exchange -------------------------------------------------

TEST_CASE("CE exchange with follow-ups: five messages, exact recovery") {
  ClockState clock(250'000.0, 40.0, 0.0);
  auto run = run_exchange(Carriage::Ce, true, clock, 5000, 0, 300'000'000);
  CHECK(run.transmissions == 5);
  REQUIRE(run.completed);
  REQUIRE(run.estimate.valid);

  // Closed-form truth: instantaneous error at T2's true instant.
  const double true_offset = clock.true_error_ns(SimTime{5000});
  CHECK(std::abs(run.estimate.offset_ns - true_offset) <= 1.0);
  CHECK(std::abs(run.estimate.skew_ppm() - 40.0) <= 0.01);
  CHECK(run.ul_timestamp_bytes == 0);

  // Applying the estimate zeroes the clock error.
  const SimTime completion{300'100'000};
  clock.apply_correction(run.estimate, completion);
  CHECK(std::abs(clock.true_error_ns(completion)) <= 1.0);
}

TEST_CASE("one-step exchange: three messages, exact recovery without follow-ups") {
  ClockState clock(-90'000.0, -25.0, 0.0);
  auto run = run_exchange(Carriage::Ce, false, clock, 4000, 1000, 400'000'000);
  CHECK(run.transmissions == 3);
  REQUIRE(run.completed);
  REQUIRE(run.estimate.valid);
  CHECK(std::abs(run.estimate.skew_ppm() + 25.0) <= 0.01);
  CHECK(run.ul_timestamp_bytes == 0);
}

TEST_CASE("SDU carriage behaves identically at both message counts") {
  {
    ClockState clock(10'000.0, 12.0, 0.0);
    auto run = run_exchange(Carriage::Sdu, true, clock, 5000, 0, 250'000'000);
    CHECK(run.transmissions == 5);
    REQUIRE(run.completed);
    CHECK(std::abs(run.estimate.skew_ppm() - 12.0) <= 0.01);
  }
  {
    ClockState clock(10'000.0, 12.0, 0.0);
    auto run = run_exchange(Carriage::Sdu, false, clock, 5000, 0, 250'000'000);
    CHECK(run.transmissions == 3);
    REQUIRE(run.completed);
    CHECK(std::abs(run.estimate.skew_ppm() - 12.0) <= 0.01);
  }
}

TEST_CASE("CE exchange bytes stay far below the separated baseline") {
  ClockState clock(1000.0, 10.0, 0.0);
  auto run = run_exchange(Carriage::Ce, true, clock, 5000, 0, 100'000'000);
  const std::size_t baseline_bytes = 4 * ptp_packet_bytes(40);
  CHECK(baseline_bytes == 192);
  CHECK(run.ce_total_bytes < baseline_bytes);
  CHECK(run.ce_total_bytes < 40);  // 1 + 9 + 2 + (2+n4) + (2+n5)
}

TEST_CASE("session without S3 never completes; fail() marks it Failed") {
  SessionConfig cfg;
  cfg.phy_timestamping = true;
  UeSession ue(9, 1, cfg);
  ClockState clock(0.0, 0.0, 0.0);
  SeededRng stamp_rng(1), noise(2);
  BsSession bs(9, 1, cfg, SimTime{1'000'000});
  bs.start();

  const auto s1 = bs.finalize_s1(SimTime{0}, stamp_rng);
  auto r = ue.on_dl(mac::decode_pdu(mac::encode_pdu(s1).value(), Direction::Downlink).value(),
                    clock.read_local(SimTime{5000}, noise));
  CHECK_FALSE(r.completed);
  CHECK(ue.phase() == Phase::AwaitF1);
  // Deadline passes without S3/F2.
  ue.fail();
  bs.fail();
  CHECK(ue.phase() == Phase::Failed);
  CHECK(bs.done());
}

TEST_CASE("out-of-order and foreign messages are counted and dropped") {
  SessionConfig cfg;
  cfg.phy_timestamping = true;
  UeSession ue(1, 1, cfg);
  // F1 before S1: dropped, phase unchanged.
  mac::MacPdu f1;
  f1.subpdus.push_back(mac::IsyncCe{mac::CeF1{12345}});
  auto r = ue.on_dl(f1, 1000);
  CHECK_FALSE(r.relevant);
  CHECK(ue.phase() == Phase::Idle);
  CHECK(ue.dropped() == 1);
  // S3 before the preamble: dropped too.
  mac::MacPdu s3;
  s3.subpdus.push_back(mac::IsyncCe{mac::CeS3{compress_timestamp(100, 90)}});
  ue.on_dl(s3, 2000);
  CHECK(ue.dropped() == 2);
}

TEST_CASE("duplicate S1 coalesces instead of restarting") {
  SessionConfig cfg;
  cfg.phy_timestamping = false;
  UeSession ue(1, 1, cfg);
  mac::MacPdu s1;
  s1.subpdus.push_back(mac::IsyncCe{mac::CeS1{}});
  auto first = ue.on_dl(s1, 777);
  CHECK(first.send_s2);
  CHECK(*ue.record().t2 == 777);
  auto second = ue.on_dl(s1, 999);
  CHECK_FALSE(second.send_s2);
  CHECK(*ue.record().t2 == 777);  // original T2 preserved
  CHECK(ue.dropped() == 1);

  // BS side: an active session refuses re-initiation.
  BsSession bs(1, 1, cfg, SimTime{1'000'000});
  bs.start();
  CHECK(bs.active());
}

// --- separated baseline ----------------------------------------------------------

TEST_CASE("baseline exchange recovers offset exactly; skew drift remains") {
  ClockState clock(123'456.0, 30.0, 0.0);
  SeededRng noise(3);
  BsPtpSession bs(1, 1, SimTime{1'000'000'000});
  UePtpSession ue(1);

  const std::int64_t d = 5000;
  std::int64_t t = 0;
  auto sync = bs.finalize_sync(SimTime{t});
  auto r = ue.on_dl(sync, clock.read_local(SimTime{t + d}, noise));
  CHECK_FALSE(r.send_delay_req);
  CHECK(bs.follow_up_pending());
  bs.clear_follow_up_pending();
  t = t + d + 2000;
  r = ue.on_dl(bs.finalize_follow_up(), clock.read_local(SimTime{t + d}, noise));
  REQUIRE(r.send_delay_req);
  t = t + d + 2000;
  auto delay_req = ue.finalize_delay_req(clock.read_local(SimTime{t}, noise));
  CHECK(delay_req.kind == PtpMsg::DelayReq);
  auto resp = bs.on_delay_req(SimTime{t + d});
  t = t + d + 2000;
  r = ue.on_dl(resp, clock.read_local(SimTime{t + d}, noise));
  REQUIRE(r.completed);
  REQUIRE(r.estimate.valid);

  // Offset matches the instantaneous truth at T2's instant within rounding.
  CHECK(std::abs(r.estimate.offset_ns - clock.true_error_ns(SimTime{d})) <= 1.0);
  CHECK(r.estimate.skew == 0.0);

  // Offset-only correction leaves the rate error in place: the clock
  // drifts at ~30 ppm afterwards.
  clock.apply_correction(r.estimate, SimTime{t + d});
  const double drift = clock.true_error_ns(SimTime{t + d + 1'000'000'000});
  CHECK(std::abs(drift) > 25'000.0);
  CHECK(std::abs(drift) < 35'000.0);
}

TEST_CASE("baseline: lost Delay_Resp leaves the exchange incomplete") {
  ClockState clock(1000.0, 0.0, 0.0);
  SeededRng noise(3);
  BsPtpSession bs(2, 1, SimTime{1'000'000});
  UePtpSession ue(2);
  ue.on_dl(bs.finalize_sync(SimTime{0}), clock.read_local(SimTime{5000}, noise));
  bs.clear_follow_up_pending();
  auto r = ue.on_dl(bs.finalize_follow_up(), clock.read_local(SimTime{7000}, noise));
  REQUIRE(r.send_delay_req);
  ue.finalize_delay_req(clock.read_local(SimTime{9000}, noise));
  // Delay_Resp never arrives.
  CHECK_FALSE(ue.completed());
}

TEST_CASE("baseline packets: four per exchange, h_base + 8 bytes each") {
  CHECK(ptp_packet_bytes(40) == 48);
  CHECK(ptp_value_bytes(PtpMsg::Sync) == 0);       // unused stamp field
  CHECK(ptp_value_bytes(PtpMsg::FollowUp) == 8);
  CHECK(ptp_value_bytes(PtpMsg::DelayReq) == 0);
  CHECK(ptp_value_bytes(PtpMsg::DelayResp) == 8);
}
