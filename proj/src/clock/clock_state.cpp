// SPDX-License-Identifier: Apache-2.0
#include "isync/clock/clock_state.hpp"

#include <cmath>
#include <stdexcept>

namespace isync {

ClockState::ClockState(double offset_ns, double skew_ppm, double rw_noise_sigma,
                       double skew_bound_ppm)
    : rate_(1.0 + skew_ppm * 1e-6), anchor_local_ns_(offset_ns), rw_sigma_(rw_noise_sigma) {
  if (std::abs(skew_ppm) > skew_bound_ppm)
    throw std::invalid_argument("ClockState: skew exceeds configured bound");
  if (rw_noise_sigma < 0.0) throw std::invalid_argument("ClockState: negative noise sigma");
}

std::int64_t ClockState::read_local(SimTime t, SeededRng& rng) {
  if (t.ns < last_seen_ns_) throw std::logic_error("ClockState::read_local: time went backwards");
  if (rw_sigma_ > 0.0 && t.ns > last_seen_ns_) {
    const double dt_s = static_cast<double>(t.ns - last_seen_ns_) * 1e-9;
    noise_accum_ns_ += rng.normal(0.0, rw_sigma_ * std::sqrt(dt_s));
  }
  last_seen_ns_ = t.ns;
  return std::llround(local_at(t));
}

double ClockState::local_at(SimTime t) const {
  return anchor_local_ns_ + rate_ * static_cast<double>(t.ns - anchor_true_ns_) + noise_accum_ns_;
}

void ClockState::apply_correction(const SyncEstimate& est, SimTime t_now) {
  if (!est.valid) return;
  const double local_now = local_at(t_now);
  // Extrapolate the measured offset from its anchor instant to now using
  // the UE's own elapsed local time, de-skewed by the estimate.
  const double elapsed_local = local_now - static_cast<double>(est.local_anchor_ns);
  const double elapsed_ref = elapsed_local / (1.0 + est.skew);
  const double err_now = est.offset_ns + est.skew * elapsed_ref;

  // Past noise is absorbed into the new anchor; the walk restarts from 0.
  anchor_local_ns_ = local_now - err_now;
  anchor_true_ns_ = t_now.ns;
  noise_accum_ns_ = 0.0;
  rate_ = rate_ / (1.0 + est.skew);
  if (t_now.ns > last_seen_ns_) last_seen_ns_ = t_now.ns;
  last_correction_ = t_now;
}

}  // namespace isync
