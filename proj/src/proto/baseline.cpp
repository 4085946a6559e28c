// SPDX-License-Identifier: Apache-2.0
#include "isync/proto/baseline.hpp"

namespace isync {

const char* to_string(PtpMsg m) {
  switch (m) {
    case PtpMsg::Sync: return "Sync";
    case PtpMsg::FollowUp: return "Follow_Up";
    case PtpMsg::DelayReq: return "Delay_Req";
    case PtpMsg::DelayResp: return "Delay_Resp";
  }
  return "?";
}

std::size_t ptp_packet_bytes(std::uint32_t h_base) { return h_base + 8; }

std::size_t ptp_value_bytes(PtpMsg m) {
  return (m == PtpMsg::FollowUp || m == PtpMsg::DelayResp) ? 8 : 0;
}

BsPtpSession::BsPtpSession(std::uint64_t id, NodeId ue, SimTime deadline)
    : id_(id), ue_(ue), deadline_(deadline) {}

PtpPacket BsPtpSession::finalize_sync(SimTime depart) {
  t1_ = depart.ns;
  follow_up_pending_ = true;
  return PtpPacket{PtpMsg::Sync, 0};
}

PtpPacket BsPtpSession::finalize_follow_up() {
  follow_up_pending_ = false;
  return PtpPacket{PtpMsg::FollowUp, static_cast<std::uint64_t>(*t1_)};
}

PtpPacket BsPtpSession::on_delay_req(SimTime t4_arrival) {
  return PtpPacket{PtpMsg::DelayResp, static_cast<std::uint64_t>(t4_arrival.ns)};
}

UePtpSession::UePtpSession(std::uint64_t id) : id_(id) {}

UePtpSession::Result UePtpSession::on_dl(const PtpPacket& pkt, std::int64_t local_arrival) {
  Result r;
  switch (pkt.kind) {
    case PtpMsg::Sync:
      t2_ = local_arrival;
      have_sync_ = true;
      break;
    case PtpMsg::FollowUp:
      if (!have_sync_) break;  // Follow_Up without its Sync
      t1_ = static_cast<std::int64_t>(pkt.ts);
      r.send_delay_req = true;
      break;
    case PtpMsg::DelayResp: {
      t4_ = static_cast<std::int64_t>(pkt.ts);
      const SyncEstimate est = estimate_offset_ptp(t1_, t2_, t3_, t4_);
      if (est.valid) {
        completed_ = true;
        r.completed = true;
        r.estimate = est;
      }
      break;
    }
    case PtpMsg::DelayReq:
      break;  // uplink message, never seen here
  }
  return r;
}

PtpPacket UePtpSession::finalize_delay_req(std::int64_t local_depart) {
  t3_ = local_depart;
  return PtpPacket{PtpMsg::DelayReq, 0};
}

}  // namespace isync
