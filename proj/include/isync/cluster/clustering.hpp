// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "isync/cluster/profile.hpp"

namespace isync {

struct Cluster {
  NodeId head = 0;
  std::vector<NodeId> members;  // includes the head
  double cx = 0.0;
  double cy = 0.0;
};

/// Greedy maximum-coverage clustering: repeatedly seed at the unclustered
/// UE with the most unclustered neighbours within max_radius (ties by
/// lower ue id); the seed becomes the head and captures those neighbours.
/// Every member ends within max_radius of its head; clusters partition the
/// input set; singletons are allowed.
std::vector<Cluster> cluster_by_location(std::span<const UeProfile> ues, double max_radius_m);

}  // namespace isync
