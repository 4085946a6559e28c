// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "isync/clock/clock_state.hpp"
#include "isync/clock/estimator.hpp"
#include "oracles.hpp"

using namespace isync;
using namespace isync::testing;

TEST_CASE("identity clock reads true time") {
  ClockState clock(0.0, 0.0, 0.0);
  SeededRng rng(1);
  CHECK(clock.read_local(SimTime{1'000'000'000}, rng) == 1'000'000'000);
}

TEST_CASE("affine clock: frozen value") {
  // offset 1000 ns, skew +10 ppm, t = 1e9 ns -> 1e9 + 1000 + 1e4.
  ClockState clock(1000.0, 10.0, 0.0);
  SeededRng rng(1);
  CHECK(clock.read_local(SimTime{1'000'000'000}, rng) == 1'000'011'000);
}

TEST_CASE("skew above the configured bound is rejected") {
  CHECK_THROWS_AS(ClockState(0.0, 1500.0, 0.0), std::invalid_argument);
  CHECK_NOTHROW(ClockState(0.0, 1500.0, 0.0, 2000.0));
}

TEST_CASE("reads are monotone without noise") {
  ClockState clock(5000.0, 800.0, 0.0);
  SeededRng rng(1);
  std::int64_t prev = clock.read_local(SimTime{0}, rng);
  for (int i = 1; i <= 1000; ++i) {
    const std::int64_t v = clock.read_local(SimTime{i * 1000}, rng);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("reads reject going backwards") {
  ClockState clock(0.0, 0.0, 5.0);
  SeededRng rng(1);
  clock.read_local(SimTime{1000}, rng);
  CHECK_THROWS_AS(clock.read_local(SimTime{999}, rng), std::logic_error);
}

TEST_CASE("random-walk variance follows sigma^2 * t") {
  // 1e4 independent walks, each observed after 1 s: sample variance of the
  // noise term must be within 20% of sigma^2 * t.
  const double sigma = 50.0;  // ns / sqrt(s)
  const double t_s = 1.0;
  double sum = 0.0, sum_sq = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    ClockState clock(0.0, 0.0, sigma);
    SeededRng rng = SeededRng::substream(1234, "walk", i);
    const double noise =
        static_cast<double>(clock.read_local(SimTime{1'000'000'000}, rng)) - 1'000'000'000;
    sum += noise;
    sum_sq += noise * noise;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  const double expected = sigma * sigma * t_s;
  CHECK(std::abs(var - expected) <= 0.2 * expected);
}

TEST_CASE("estimator: perfect clocks and zero delays") {
  SyncSession s;
  s.t1 = 0;
  s.t2 = 0;
  s.t3 = 10;
  s.t4 = 10;
  s.t5 = 20;
  s.t6 = 20;
  const auto est = estimate_offset_skew(s);
  REQUIRE(est.valid);
  CHECK(est.offset_ns == doctest::Approx(0.0));
  CHECK(est.skew_ppm() == doctest::Approx(0.0));
}

TEST_CASE("estimator: frozen oracle case (theta=1000ns, alpha=10ppm, d=5000ns)") {
  OracleScenario p;
  p.theta_ns = 1000.0;
  p.alpha = 10e-6;
  p.d_dl_ns = p.d_ul_ns = 5000;
  p.t1_ns = 0;
  p.turnaround_ns = 1000;
  p.s3_gap_ns = 89000;  // T5 lands at 100000
  const auto o = forward_session(p);
  // Stamps computed independently by the closed-form oracle.
  CHECK(*o.session.t1 == 0);
  CHECK(*o.session.t2 == 6000);
  CHECK(*o.session.t3 == 7000);
  CHECK(*o.session.t4 == 11000);
  CHECK(*o.session.t5 == 100000);
  CHECK(*o.session.t6 == 106001);

  const auto est = estimate_offset_skew(o.session);
  REQUIRE(est.valid);
  CHECK(est.offset_ns == doctest::Approx(999.995000050).epsilon(1e-9));
  CHECK(est.skew == doctest::Approx(10e-6).epsilon(1e-9));
  CHECK(std::abs(est.offset_ns - p.theta_ns) <= 1.0);
  CHECK(std::abs(est.skew_ppm() - 10.0) <= 0.01);
}

TEST_CASE("estimator: asymmetric delays bias offset by (d_dl - d_ul)/2") {
  OracleScenario p;
  p.theta_ns = 0.0;
  p.alpha = 0.0;
  p.d_dl_ns = 5000;
  p.d_ul_ns = 7000;
  const auto o = forward_session(p);
  const auto est = estimate_offset_skew(o.session);
  REQUIRE(est.valid);
  CHECK(est.offset_ns == doctest::Approx(-1000.0));
  CHECK(est.skew == doctest::Approx(0.0));
}

TEST_CASE("estimator: missing timestamps and degenerate spans invalidate") {
  SyncSession s;
  s.t1 = 0;
  s.t2 = 100;
  s.t3 = 200;
  s.t4 = 300;
  s.t6 = 500;
  CHECK_FALSE(estimate_offset_skew(s).valid);  // T5 missing
  s.t5 = 0;
  CHECK_FALSE(estimate_offset_skew(s).valid);  // T5 == T1
  s.t5 = 400;
  CHECK(estimate_offset_skew(s).valid);
  s.t6 = 100;
  CHECK_FALSE(estimate_offset_skew(s).valid);  // T6 <= T2
}

TEST_CASE("estimator: randomized noiseless identifiability sweep") {
  SeededRng rng(2024);
  for (int i = 0; i < 2000; ++i) {
    OracleScenario p;
    p.theta_ns = rng.uniform(-1e6, 1e6);
    p.alpha = rng.uniform(-100e-6, 100e-6);
    p.d_dl_ns = p.d_ul_ns = rng.uniform_i64(500, 2500);
    p.turnaround_ns = rng.uniform_i64(100, 500);
    p.s3_gap_ns = rng.uniform_i64(200'000'000, 500'000'000);
    p.t1_ns = rng.uniform_i64(0, 1'000'000'000);
    const auto o = forward_session(p);
    const auto est = estimate_offset_skew(o.session);
    REQUIRE(est.valid);
    CHECK(std::abs(est.offset_ns - o.true_offset_at_t2) <= 1.0);
    CHECK(std::abs(est.skew - p.alpha) * 1e6 <= 0.01);
  }
}

TEST_CASE("estimator: skew is independent of uplink delay") {
  // Only T1, T2, T5, T6 feed the skew; sweeping d_ul must not move it.
  OracleScenario p;
  p.theta_ns = 1234.0;
  p.alpha = 42e-6;
  p.s3_gap_ns = 300'000'000;
  double first = 0.0;
  for (std::int64_t d_ul : {1000, 5000, 50000, 500000}) {
    p.d_ul_ns = d_ul;
    // Hold T5 - T1 fixed by folding the uplink change into the gap.
    p.s3_gap_ns = 300'000'000 - (d_ul - 1000);
    const auto est = estimate_offset_skew(forward_session(p).session);
    REQUIRE(est.valid);
    if (d_ul == 1000)
      first = est.skew;
    else
      CHECK(est.skew == doctest::Approx(first).epsilon(1e-12));
  }
}

TEST_CASE("apply_correction: perfect estimate zeroes the error") {
  OracleScenario p;
  p.theta_ns = 250'000.0;
  p.alpha = 35e-6;
  p.s3_gap_ns = 400'000'000;
  const auto o = forward_session(p);
  const auto est = estimate_offset_skew(o.session);
  REQUIRE(est.valid);

  ClockState clock(p.theta_ns, p.alpha * 1e6, 0.0);
  const SimTime t_now{p.t1_ns + p.d_dl_ns + p.turnaround_ns + p.d_ul_ns + p.s3_gap_ns +
                      p.d_dl_ns};
  CHECK(std::abs(clock.true_error_ns(t_now)) > 1000.0);  // drifted before correction
  clock.apply_correction(est, t_now);
  CHECK(std::abs(clock.true_error_ns(t_now)) <= 1.0);
  // Rate was corrected too: error stays near zero a second later.
  CHECK(std::abs(clock.true_error_ns(t_now + 1'000'000'000)) <= 20.0);
}

TEST_CASE("apply_correction: invalid estimate leaves the clock unchanged") {
  ClockState clock(777.0, 5.0, 0.0);
  SyncEstimate invalid;
  clock.apply_correction(invalid, SimTime{1'000'000});
  SeededRng rng(1);
  CHECK(clock.read_local(SimTime{1'000'000'000}, rng) == 1'000'005'777);
}

TEST_CASE("apply_correction: residual skew drifts as r * dt") {
  // Correct with a deliberately wrong skew; the error must grow linearly
  // at the residual rate.
  ClockState clock(0.0, 10.0, 0.0);
  SyncEstimate est;
  est.valid = true;
  est.offset_ns = 0.0;
  est.skew = 8e-6;  // leaves 2 ppm uncorrected (approximately)
  est.local_anchor_ns = 0;
  clock.apply_correction(est, SimTime{0});
  const double residual = (1.0 + 10e-6) / (1.0 + 8e-6) - 1.0;
  const double dt = 1e9;
  CHECK(clock.true_error_ns(SimTime{1'000'000'000}) ==
        doctest::Approx(residual * dt).epsilon(1e-6));
}

TEST_CASE("baseline two-way estimator recovers offset only") {
  // theta=1000, symmetric 5000 ns delays, zero skew.
  const auto est = estimate_offset_ptp(0, 6000, 7000, 11000);
  REQUIRE(est.valid);
  CHECK(est.offset_ns == doctest::Approx(1000.0));
  CHECK(est.skew == 0.0);
  CHECK_FALSE(estimate_offset_ptp(0, 6000, std::nullopt, 11000).valid);
}
