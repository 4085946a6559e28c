// SPDX-License-Identifier: Apache-2.0
//
// Independent test oracles. These must stay free of the implementation
// paths they check: the clock oracle forward-simulates the affine model in
// closed form, the scheduler oracle enumerates assignments, the cluster
// oracle solves minimum star cover by DP over bitmasks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "isync/clock/estimator.hpp"
#include "isync/cluster/profile.hpp"
#include "isync/sched/allocator.hpp"

namespace isync::testing {

// --- closed-form clock/channel oracle ------------------------------------

struct OracleScenario {
  double theta_ns = 0.0;       // offset at epoch
  double alpha = 0.0;          // dimensionless skew
  std::int64_t d_dl_ns = 5000;
  std::int64_t d_ul_ns = 5000;
  std::int64_t t1_ns = 0;      // S1 departure (reference)
  std::int64_t turnaround_ns = 1000;  // UE S1->S2 gap (true time)
  std::int64_t s3_gap_ns = 89000;     // T4 -> T5 observation gap
};

struct OracleSession {
  SyncSession session;
  double true_skew = 0.0;
  double true_offset_at_t2 = 0.0;  // instantaneous local-minus-reference error
  std::int64_t t2_true = 0;
};

inline std::int64_t oracle_local(double theta, double alpha, std::int64_t t_true) {
  return std::llround(theta + (1.0 + alpha) * static_cast<double>(t_true));
}

inline OracleSession forward_session(const OracleScenario& p) {
  const std::int64_t t2 = p.t1_ns + p.d_dl_ns;
  const std::int64_t t3 = t2 + p.turnaround_ns;
  const std::int64_t t4 = t3 + p.d_ul_ns;
  const std::int64_t t5 = t4 + p.s3_gap_ns;
  const std::int64_t t6 = t5 + p.d_dl_ns;

  OracleSession out;
  out.session.phy_timestamping = true;
  out.session.t1 = p.t1_ns;
  out.session.t2 = oracle_local(p.theta_ns, p.alpha, t2);
  out.session.t3 = oracle_local(p.theta_ns, p.alpha, t3);
  out.session.t4 = t4;
  out.session.t5 = t5;
  out.session.t6 = oracle_local(p.theta_ns, p.alpha, t6);
  out.true_skew = p.alpha;
  out.true_offset_at_t2 = p.theta_ns + p.alpha * static_cast<double>(t2);
  out.t2_true = t2;
  return out;
}

// --- exhaustive scheduler oracle ------------------------------------------

/// All (tti, block) slots a request may legally occupy.
inline std::vector<std::pair<std::int64_t, int>> feasible_slots(
    const ResourceGrid& grid, const AccessRequest& r, std::int64_t first_tti, int horizon) {
  std::vector<std::pair<std::int64_t, int>> slots;
  if (r.bytes > grid.block_capacity_bytes) return slots;
  for (int k = 0; k < horizon; ++k) {
    const std::int64_t tti = first_tti + k;
    if ((tti + 1) * grid.tti_ns > r.deadline.ns) break;
    for (int b = 0; b < grid.n_freq_blocks; ++b) slots.emplace_back(tti, b);
  }
  return slots;
}

/// Maximum number of `requests` placeable on free slots (one per slot), by
/// backtracking over all assignments.
inline std::size_t max_placeable(const ResourceGrid& grid,
                                 std::span<const AccessRequest> requests,
                                 std::int64_t first_tti, int horizon,
                                 const std::vector<std::pair<std::int64_t, int>>& occupied) {
  std::vector<std::vector<std::pair<std::int64_t, int>>> options;
  options.reserve(requests.size());
  for (const auto& r : requests)
    options.push_back(feasible_slots(grid, r, first_tti, horizon));

  std::map<std::pair<std::int64_t, int>, bool> used;
  for (const auto& s : occupied) used[s] = true;

  std::size_t best = 0;
  auto rec = [&](auto&& self, std::size_t i, std::size_t placed) -> void {
    if (placed + (requests.size() - i) <= best) return;  // cannot beat best
    if (i == requests.size()) {
      best = std::max(best, placed);
      return;
    }
    self(self, i + 1, placed);  // reject i
    for (const auto& slot : options[i]) {
      if (used[slot]) continue;
      used[slot] = true;
      self(self, i + 1, placed + 1);
      used[slot] = false;
    }
  };
  rec(rec, 0, 0);
  return best;
}

// --- minimum star-cover oracle (clustering) --------------------------------

/// Minimum number of clusters such that every UE lies within `radius` of
/// some cluster's head. Exact for n <= ~16 via subset DP.
inline int min_star_cover(std::span<const UeProfile> ues, double radius) {
  const int n = static_cast<int>(ues.size());
  std::vector<unsigned> cover(n, 0);
  for (int h = 0; h < n; ++h)
    for (int j = 0; j < n; ++j) {
      const double dx = ues[h].x_m - ues[j].x_m;
      const double dy = ues[h].y_m - ues[j].y_m;
      if (std::sqrt(dx * dx + dy * dy) <= radius) cover[h] |= 1u << j;
    }
  const unsigned full = n == 32 ? 0xffffffffu : (1u << n) - 1;
  std::vector<int> dp(full + 1, 1 << 20);
  dp[0] = 0;
  for (unsigned mask = 0; mask < full; ++mask) {
    if (dp[mask] >= (1 << 20)) continue;
    int next = 0;
    while (mask & (1u << next)) ++next;  // cover the lowest uncovered UE
    for (int h = 0; h < n; ++h) {
      if (!(cover[h] & (1u << next))) continue;
      const unsigned m2 = mask | cover[h];
      dp[m2] = std::min(dp[m2], dp[mask] + 1);
    }
  }
  return dp[full];
}

}  // namespace isync::testing
