// SPDX-License-Identifier: Apache-2.0
#include "isync/sched/piggyback.hpp"

namespace isync {

bool try_piggyback(mac::MacPdu& comm_pdu, const mac::MacSubPdu& sync_subpdu,
                   std::uint32_t grant_capacity_bytes, Urgency urgency,
                   const mac::LcidTable& table) {
  if (urgency == Urgency::High) return false;
  const std::size_t needed = mac::encoded_size(sync_subpdu, table);
  const std::size_t used = mac::encoded_size(comm_pdu, table);
  if (used + needed > grant_capacity_bytes) return false;
  comm_pdu.subpdus.push_back(sync_subpdu);
  return true;
}

}  // namespace isync
