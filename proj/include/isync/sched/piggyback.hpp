// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "isync/mac/codec.hpp"

namespace isync {

enum class Urgency : std::uint8_t { Low, High };

/// Appends a pending sync sub-PDU to an already-granted communication PDU
/// when urgency is Low and the grant has spare capacity; High-urgency sync
/// goes through the time-priority path instead. Returns true when the
/// sub-PDU was appended (the PDU is modified in place).
bool try_piggyback(mac::MacPdu& comm_pdu, const mac::MacSubPdu& sync_subpdu,
                   std::uint32_t grant_capacity_bytes, Urgency urgency,
                   const mac::LcidTable& table = {});

}  // namespace isync
