// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "isync/clock/estimator.hpp"
#include "isync/sim/time.hpp"

namespace isync {

/// Separated-provisioning baseline: a PTP-style two-step exchange of four
/// standalone user-plane packets (Sync, Follow_Up, Delay_Req, Delay_Resp),
/// each carrying a fixed per-packet header of h_base bytes plus an 8-byte
/// timestamp field. Offset-only estimation; skew is never corrected.
enum class PtpMsg : std::uint8_t { Sync, FollowUp, DelayReq, DelayResp };

const char* to_string(PtpMsg m);

struct PtpPacket {
  PtpMsg kind = PtpMsg::Sync;
  std::uint64_t ts = 0;  // meaningful for FollowUp (T1) and DelayResp (T4)
};

/// Wire size of any baseline packet.
std::size_t ptp_packet_bytes(std::uint32_t h_base);
/// Bytes that carry a real timestamp value (FollowUp, DelayResp); the
/// unused timestamp field of Sync/Delay_Req counts as overhead.
std::size_t ptp_value_bytes(PtpMsg m);

class BsPtpSession {
 public:
  BsPtpSession() = default;
  BsPtpSession(std::uint64_t id, NodeId ue, SimTime deadline);

  PtpPacket finalize_sync(SimTime depart);       // records T1, queues Follow_Up
  PtpPacket finalize_follow_up();
  /// Delay_Req arrival; records T4 and returns the Delay_Resp to send.
  PtpPacket on_delay_req(SimTime t4_arrival);

  bool follow_up_pending() const { return follow_up_pending_; }
  void clear_follow_up_pending() { follow_up_pending_ = false; }
  bool done() const { return done_; }
  void mark_done() { done_ = true; }
  std::uint64_t id() const { return id_; }
  NodeId ue() const { return ue_; }
  SimTime deadline() const { return deadline_; }

 private:
  std::uint64_t id_ = 0;
  NodeId ue_ = 0;
  SimTime deadline_{0};
  bool follow_up_pending_ = false;
  bool done_ = false;
  std::optional<std::int64_t> t1_;
};

class UePtpSession {
 public:
  UePtpSession() = default;
  explicit UePtpSession(std::uint64_t id);

  struct Result {
    bool send_delay_req = false;
    bool completed = false;
    SyncEstimate estimate;
  };

  Result on_dl(const PtpPacket& pkt, std::int64_t local_arrival);
  PtpPacket finalize_delay_req(std::int64_t local_depart);  // records T3

  bool completed() const { return completed_; }

 private:
  std::uint64_t id_ = 0;
  bool have_sync_ = false;
  bool completed_ = false;
  std::optional<std::int64_t> t1_, t2_, t3_, t4_;
};

}  // namespace isync
