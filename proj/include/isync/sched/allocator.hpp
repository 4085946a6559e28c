// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "isync/sim/channel.hpp"
#include "isync/sim/time.hpp"

namespace isync {

enum class Service : std::uint8_t { Comm, Sync };
enum class ReqPriority : std::uint8_t { High, Normal };

const char* to_string(Service s);

struct AccessRequest {
  std::uint64_t id = 0;
  NodeId ue = 0;
  Service service = Service::Comm;
  Direction dir = Direction::Downlink;
  std::uint32_t bytes = 0;
  SimTime deadline{0};
  ReqPriority priority = ReqPriority::Normal;
  bool piggybackable = false;
};

/// Sync requests close to their deadline are High; everything else Normal.
ReqPriority classify_priority(Service service, SimTime deadline, SimTime now,
                              std::int64_t tti_ns, int urgency_threshold_ttis = 2);

/// TTI x frequency-block grid. A block carries at most one request per TTI
/// and a request must fit a single block, so planning is an assignment
/// problem rather than bin packing.
struct ResourceGrid {
  std::int64_t tti_ns = 1'000'000;
  int n_freq_blocks = 8;
  std::uint32_t block_capacity_bytes = 160;
};

struct Grant {
  std::uint64_t request_id = 0;
  NodeId ue = 0;
  Service service = Service::Comm;
  std::int64_t tti = 0;  // TTI index; the TTI spans [tti*tti_ns, (tti+1)*tti_ns)
  int block = 0;
  std::uint32_t bytes = 0;
};

struct Rejection {
  std::uint64_t request_id = 0;
  std::string reason;
};

struct AllocationPlan {
  std::vector<Grant> grants;
  std::vector<Rejection> rejected;
  std::int64_t first_tti = 0;
  int horizon_ttis = 0;
};

/// Two-pass service-oriented planner. High requests (urgent sync) take the
/// earliest feasible TTI in priority order; the rest are placed
/// earliest-deadline-first into remaining blocks. A TTI is feasible when
/// it ends by the request's deadline. Unsatisfiable requests are reported
/// in the plan, never dropped silently. Deterministic: ties break on
/// (deadline, ue, id) and blocks fill in index order.
AllocationPlan allocate(const ResourceGrid& grid, std::span<const AccessRequest> requests,
                        SimTime now, int horizon_ttis);

// Plan audits used by property tests and the scheme comparison harness.
bool audit_no_double_assignment(const AllocationPlan& plan);
bool audit_capacity_and_deadlines(const ResourceGrid& grid,
                                  std::span<const AccessRequest> requests,
                                  const AllocationPlan& plan);
/// No Normal grant may sit in a TTI strictly earlier than an unserved High
/// request that would have fit there.
bool audit_priority_soundness(const ResourceGrid& grid, std::span<const AccessRequest> requests,
                              const AllocationPlan& plan);

/// Debug export: "tti,block,ue,service,bytes" rows.
std::string plan_to_csv(const AllocationPlan& plan);

}  // namespace isync
