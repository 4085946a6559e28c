// SPDX-License-Identifier: Apache-2.0
#include "isync/cluster/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isync {

namespace {
double dist(const UeProfile& a, const UeProfile& b) {
  return std::hypot(a.x_m - b.x_m, a.y_m - b.y_m);
}
}  // namespace

std::vector<Cluster> cluster_by_location(std::span<const UeProfile> ues, double max_radius_m) {
  if (max_radius_m <= 0) throw std::invalid_argument("cluster_by_location: radius must be > 0");

  const std::size_t n = ues.size();
  std::vector<bool> clustered(n, false);
  std::size_t remaining = n;
  std::vector<Cluster> clusters;

  while (remaining > 0) {
    // Seed: unclustered UE covering the most unclustered neighbours.
    std::size_t best = n;
    std::size_t best_cover = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (clustered[i]) continue;
      std::size_t cover = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (!clustered[j] && dist(ues[i], ues[j]) <= max_radius_m) ++cover;
      if (best == n || cover > best_cover ||
          (cover == best_cover && ues[i].ue < ues[best].ue)) {
        best = i;
        best_cover = cover;
      }
    }

    Cluster c;
    c.head = ues[best].ue;
    double sx = 0.0, sy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (clustered[j] || dist(ues[best], ues[j]) > max_radius_m) continue;
      clustered[j] = true;
      --remaining;
      c.members.push_back(ues[j].ue);
      sx += ues[j].x_m;
      sy += ues[j].y_m;
    }
    std::sort(c.members.begin(), c.members.end());
    c.cx = sx / static_cast<double>(c.members.size());
    c.cy = sy / static_cast<double>(c.members.size());
    clusters.push_back(std::move(c));
  }
  return clusters;
}

}  // namespace isync
