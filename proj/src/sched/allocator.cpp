// SPDX-License-Identifier: Apache-2.0
#include "isync/sched/allocator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace isync {

const char* to_string(Service s) { return s == Service::Comm ? "comm" : "sync"; }

ReqPriority classify_priority(Service service, SimTime deadline, SimTime now,
                              std::int64_t tti_ns, int urgency_threshold_ttis) {
  if (service != Service::Sync) return ReqPriority::Normal;
  return (deadline - now) < urgency_threshold_ttis * tti_ns ? ReqPriority::High
                                                            : ReqPriority::Normal;
}

namespace {

std::int64_t first_grantable_tti(const ResourceGrid& grid, SimTime now) {
  // TTI k starts at k*tti_ns; the earliest whole TTI not yet begun.
  return (now.ns + grid.tti_ns - 1) / grid.tti_ns;
}

bool tti_feasible(const ResourceGrid& grid, std::int64_t tti, SimTime deadline) {
  return (tti + 1) * grid.tti_ns <= deadline.ns;
}

struct Order {
  bool operator()(const AccessRequest* a, const AccessRequest* b) const {
    if (a->deadline != b->deadline) return a->deadline < b->deadline;
    if (a->ue != b->ue) return a->ue < b->ue;
    return a->id < b->id;
  }
};

}  // namespace

AllocationPlan allocate(const ResourceGrid& grid, std::span<const AccessRequest> requests,
                        SimTime now, int horizon_ttis) {
  AllocationPlan plan;
  plan.first_tti = first_grantable_tti(grid, now);
  plan.horizon_ttis = horizon_ttis;

  std::vector<std::vector<bool>> used(horizon_ttis,
                                      std::vector<bool>(grid.n_freq_blocks, false));

  std::vector<const AccessRequest*> high, normal;
  for (const auto& r : requests)
    (r.priority == ReqPriority::High ? high : normal).push_back(&r);
  std::sort(high.begin(), high.end(), Order{});
  std::sort(normal.begin(), normal.end(), Order{});

  auto place = [&](const AccessRequest& r) {
    if (r.bytes > grid.block_capacity_bytes) {
      plan.rejected.push_back({r.id, "exceeds block capacity"});
      return;
    }
    for (int k = 0; k < horizon_ttis; ++k) {
      const std::int64_t tti = plan.first_tti + k;
      if (!tti_feasible(grid, tti, r.deadline)) break;  // later TTIs only get worse
      for (int b = 0; b < grid.n_freq_blocks; ++b) {
        if (used[k][b]) continue;
        used[k][b] = true;
        plan.grants.push_back({r.id, r.ue, r.service, tti, b, r.bytes});
        return;
      }
    }
    plan.rejected.push_back({r.id, "no feasible tti"});
  };

  for (const auto* r : high) place(*r);
  for (const auto* r : normal) place(*r);
  return plan;
}

bool audit_no_double_assignment(const AllocationPlan& plan) {
  std::set<std::pair<std::int64_t, int>> slots;
  std::set<std::uint64_t> ids;
  for (const auto& g : plan.grants) {
    if (!slots.insert({g.tti, g.block}).second) return false;
    if (!ids.insert(g.request_id).second) return false;
  }
  for (const auto& r : plan.rejected)
    if (ids.count(r.request_id)) return false;
  return true;
}

bool audit_capacity_and_deadlines(const ResourceGrid& grid,
                                  std::span<const AccessRequest> requests,
                                  const AllocationPlan& plan) {
  std::map<std::uint64_t, const AccessRequest*> by_id;
  for (const auto& r : requests) by_id[r.id] = &r;
  for (const auto& g : plan.grants) {
    auto it = by_id.find(g.request_id);
    if (it == by_id.end()) return false;
    const AccessRequest& r = *it->second;
    if (g.bytes != r.bytes || g.bytes > grid.block_capacity_bytes) return false;
    if (g.block < 0 || g.block >= grid.n_freq_blocks) return false;
    if (!tti_feasible(grid, g.tti, r.deadline)) return false;
    if (g.tti < plan.first_tti || g.tti >= plan.first_tti + plan.horizon_ttis) return false;
  }
  return true;
}

bool audit_priority_soundness(const ResourceGrid& grid, std::span<const AccessRequest> requests,
                              const AllocationPlan& plan) {
  std::set<std::uint64_t> granted;
  for (const auto& g : plan.grants) granted.insert(g.request_id);

  for (const auto& r : requests) {
    if (r.priority != ReqPriority::High || granted.count(r.id)) continue;
    if (r.bytes > grid.block_capacity_bytes) continue;  // could never fit anywhere
    // r went unserved: no Normal grant may occupy a feasible-for-r TTI.
    for (const auto& g : plan.grants) {
      auto it = std::find_if(requests.begin(), requests.end(),
                             [&](const AccessRequest& q) { return q.id == g.request_id; });
      if (it == requests.end() || it->priority == ReqPriority::High) continue;
      if (tti_feasible(grid, g.tti, r.deadline)) return false;
    }
  }
  return true;
}

std::string plan_to_csv(const AllocationPlan& plan) {
  std::ostringstream out;
  out << "tti,block,ue,service,bytes\n";
  for (const auto& g : plan.grants)
    out << g.tti << ',' << g.block << ',' << g.ue << ',' << to_string(g.service) << ','
        << g.bytes << '\n';
  return out.str();
}

}  // namespace isync
