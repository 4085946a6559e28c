// SPDX-License-Identifier: Apache-2.0
#include "isync/clock/estimator.hpp"

namespace isync {

SyncEstimate estimate_offset_skew(const SyncSession& s) {
  SyncEstimate est;
  if (!s.t1 || !s.t2 || !s.t3 || !s.t4 || !s.t5 || !s.t6) return est;
  const std::int64_t t1 = *s.t1, t2 = *s.t2, t3 = *s.t3, t4 = *s.t4, t5 = *s.t5, t6 = *s.t6;
  if (t5 == t1) return est;        // degenerate baseline
  if (t6 <= t2 || t5 < t1) return est;  // event order violated

  const double span = static_cast<double>(t5 - t1);
  const double skew = (static_cast<double>(t6 - t2) - span) / span;
  if (1.0 + skew <= 0.0) return est;

  const double t3_deskewed =
      static_cast<double>(t2) + static_cast<double>(t3 - t2) / (1.0 + skew);
  const double offset =
      (static_cast<double>(t2 - t1) - (static_cast<double>(t4) - t3_deskewed)) / 2.0;

  est.valid = true;
  est.offset_ns = offset;
  est.skew = skew;
  est.local_anchor_ns = t2;
  return est;
}

SyncEstimate estimate_offset_ptp(std::optional<std::int64_t> t1, std::optional<std::int64_t> t2,
                                 std::optional<std::int64_t> t3, std::optional<std::int64_t> t4) {
  SyncEstimate est;
  if (!t1 || !t2 || !t3 || !t4) return est;
  est.valid = true;
  est.offset_ns =
      (static_cast<double>(*t2 - *t1) - static_cast<double>(*t4 - *t3)) / 2.0;
  est.skew = 0.0;
  est.local_anchor_ns = *t2;
  return est;
}

}  // namespace isync
