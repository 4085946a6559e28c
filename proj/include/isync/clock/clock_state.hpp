// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "isync/clock/estimator.hpp"
#include "isync/sim/rng.hpp"
#include "isync/sim/time.hpp"

namespace isync {

/// A UE's virtual clock relative to the reference (BS) clock:
///
///   local(t) = anchor_local + rate * (t - anchor_true) + W(t)
///
/// where rate = 1 + skew and W is a random walk with intensity
/// rw_noise_sigma (ns per sqrt(second)), accumulated since the last
/// correction. With sigma = 0 the clock is exactly affine in true time.
class ClockState {
 public:
  /// offset_ns: local minus reference at epoch (t = 0).
  /// skew_ppm: rate error; |skew_ppm| above the bound is rejected.
  ClockState(double offset_ns, double skew_ppm, double rw_noise_sigma,
             double skew_bound_ppm = 1000.0);

  /// UE clock reading at reference time t, advancing the random walk.
  /// Requires t >= the latest time already observed (reads are monotone).
  std::int64_t read_local(SimTime t, SeededRng& rng);

  /// Current local value without advancing the noise process; valid at or
  /// after the last observed instant.
  double local_at(SimTime t) const;

  /// Signed true error local(t) - t, for metrics.
  double true_error_ns(SimTime t) const { return local_at(t) - static_cast<double>(t.ns); }

  /// Steps the clock and divides its rate so that the local time error at
  /// t_now becomes exactly the estimator's residual (zero under perfect
  /// estimation). Invalid estimates leave the clock unchanged.
  void apply_correction(const SyncEstimate& est, SimTime t_now);

  double rate() const { return rate_; }
  double skew_ppm() const { return (rate_ - 1.0) * 1e6; }
  SimTime last_correction_time() const { return last_correction_; }

 private:
  double rate_;
  double anchor_local_ns_;
  std::int64_t anchor_true_ns_ = 0;
  double rw_sigma_;          // ns / sqrt(s)
  double noise_accum_ns_ = 0.0;
  std::int64_t last_seen_ns_ = 0;
  SimTime last_correction_{0};
};

}  // namespace isync
