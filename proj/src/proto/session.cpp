// SPDX-License-Identifier: Apache-2.0
#include "isync/proto/session.hpp"

namespace isync {

const char* to_string(Carriage c) { return c == Carriage::Ce ? "ce" : "sdu"; }

const char* to_string(Phase p) {
  switch (p) {
    case Phase::Idle: return "Idle";
    case Phase::SentS1: return "SentS1";
    case Phase::AwaitF1: return "AwaitF1";
    case Phase::AwaitS2: return "AwaitS2";
    case Phase::SentS3: return "SentS3";
    case Phase::AwaitF2: return "AwaitF2";
    case Phase::Complete: return "Complete";
    case Phase::Failed: return "Failed";
  }
  return "?";
}

BsSession::BsSession(std::uint64_t id, NodeId ue, SessionConfig cfg, SimTime deadline)
    : id_(id), ue_(ue), cfg_(cfg), deadline_(deadline) {}

std::int64_t BsSession::stamp(SimTime depart, SeededRng& rng) const {
  if (cfg_.phy_timestamping || cfg_.ts_error_bound_ns <= 0) return depart.ns;
  return depart.ns + rng.uniform_i64(-cfg_.ts_error_bound_ns, cfg_.ts_error_bound_ns);
}

mac::MacPdu BsSession::finalize_s1(SimTime depart, SeededRng& rng) {
  t1_true_ = depart;
  t1_stamp_ = stamp(depart, rng);
  if (cfg_.phy_timestamping) {
    f1_pending_ = true;
    phase_ = Phase::SentS1;
  } else {
    phase_ = Phase::AwaitS2;
  }
  mac::MacPdu pdu;
  if (cfg_.carriage == Carriage::Ce)
    pdu.subpdus.push_back(mac::IsyncCe{mac::CeS1{}});
  else
    pdu.subpdus.push_back(mac::make_feedback_sdu(0x01));
  return pdu;
}

mac::MacPdu BsSession::finalize_f1() {
  f1_pending_ = false;
  phase_ = Phase::AwaitS2;
  mac::MacPdu pdu;
  const std::uint64_t t1 = static_cast<std::uint64_t>(*t1_stamp_);
  if (cfg_.carriage == Carriage::Ce)
    pdu.subpdus.push_back(mac::IsyncCe{mac::CeF1{t1}});
  else
    pdu.subpdus.push_back(mac::make_timestamp_sdu(t1));
  return pdu;
}

SimTime BsSession::on_s2(SimTime t4_arrival, std::uint8_t sqi) {
  t4_ = t4_arrival.ns;
  sqi_ = sqi;
  sqi_known_ = true;
  phase_ = Phase::SentS3;
  const SimTime earliest = *t1_true_ + cfg_.skew_window_ns;
  return earliest < t4_arrival ? t4_arrival : earliest;
}

mac::MacPdu BsSession::finalize_s3(SimTime depart, SeededRng& rng) {
  mac::MacPdu pdu;
  const std::uint64_t t1 = static_cast<std::uint64_t>(*t1_stamp_);
  const std::uint64_t t4 = static_cast<std::uint64_t>(*t4_);
  if (cfg_.phy_timestamping) {
    // Exact T5 rides the follow-up.
    t5_stamp_ = depart.ns;
    f2_pending_ = true;
    if (cfg_.carriage == Carriage::Ce)
      pdu.subpdus.push_back(mac::IsyncCe{mac::CeS3{compress_timestamp(t4, t1)}});
    else
      pdu.subpdus.push_back(mac::make_timestamp_sdu(t4));
  } else {
    // One-step bundle: T1, compressed T4, compressed T5 in one PDU, with
    // scheduled-departure stamps for T1 and T5.
    t5_stamp_ = stamp(depart, rng);
    const std::uint64_t t5 = static_cast<std::uint64_t>(*t5_stamp_);
    if (cfg_.carriage == Carriage::Ce) {
      pdu.subpdus.push_back(mac::IsyncCe{mac::CeF1{t1}});
      pdu.subpdus.push_back(mac::IsyncCe{mac::CeS3{compress_timestamp(t4, t1)}});
      pdu.subpdus.push_back(mac::IsyncCe{mac::CeF2{compress_timestamp(t5, t4)}});
    } else {
      pdu.subpdus.push_back(mac::make_timestamp_sdu(t1));
      pdu.subpdus.push_back(mac::make_timestamp_sdu(t4));
      pdu.subpdus.push_back(mac::make_timestamp_sdu(t5));
    }
  }
  phase_ = Phase::AwaitF2;
  return pdu;
}

mac::MacPdu BsSession::finalize_f2() {
  f2_pending_ = false;
  mac::MacPdu pdu;
  const std::uint64_t t4 = static_cast<std::uint64_t>(*t4_);
  const std::uint64_t t5 = static_cast<std::uint64_t>(*t5_stamp_);
  if (cfg_.carriage == Carriage::Ce)
    pdu.subpdus.push_back(mac::IsyncCe{mac::CeF2{compress_timestamp(t5, t4)}});
  else
    pdu.subpdus.push_back(mac::make_timestamp_sdu(t5));
  return pdu;
}

UeSession::UeSession(std::uint64_t id, NodeId ue, SessionConfig cfg) : cfg_(cfg) {
  record_.session_id = id;
  record_.ue_id = ue;
  record_.phy_timestamping = cfg.phy_timestamping;
}

UeSession::DlResult UeSession::complete() {
  phase_ = Phase::Complete;
  DlResult r;
  r.relevant = true;
  r.completed = true;
  r.estimate = estimate_offset_skew(record_);
  return r;
}

UeSession::DlResult UeSession::on_dl(const mac::MacPdu& pdu, std::int64_t local_arrival) {
  DlResult result;
  for (const auto& sub : pdu.subpdus) {
    // Normalize both carriages to the logical message role.
    enum class Role { S1, T1, T4Compressed, T5Compressed, Timestamp, None } role = Role::None;
    std::uint64_t ts_value = 0;
    CompressedTimestamp cts;

    if (const auto* ce = std::get_if<mac::IsyncCe>(&sub)) {
      if (const auto* f1 = std::get_if<mac::CeF1>(&ce->body)) {
        role = Role::T1;
        ts_value = f1->t1;
      } else if (std::get_if<mac::CeS1>(&ce->body)) {
        role = Role::S1;
      } else if (const auto* s3 = std::get_if<mac::CeS3>(&ce->body)) {
        role = Role::T4Compressed;
        cts = s3->t4;
      } else if (const auto* f2 = std::get_if<mac::CeF2>(&ce->body)) {
        role = Role::T5Compressed;
        cts = f2->t5;
      } else {
        ++dropped_;  // S2 on the downlink
        continue;
      }
    } else if (const auto* sdu = std::get_if<mac::IsyncSdu>(&sub)) {
      if (sdu->kind == mac::IsyncSdu::Kind::Feedback) {
        role = Role::S1;
      } else if (sdu->kind == mac::IsyncSdu::Kind::Timestamp) {
        role = Role::Timestamp;
        ts_value = sdu->ts;
      } else {
        ++dropped_;
        continue;
      }
    } else {
      continue;  // not a sync sub-PDU
    }

    // SDU carriage sends bare timestamps; resolve the role from phase and,
    // within a one-step bundle, from arrival order (T1, T4, T5).
    if (role == Role::Timestamp) {
      // A full value as an n=8 "compressed" stamp decompresses to itself.
      const CompressedTimestamp full{8, ts_value};
      if (cfg_.phy_timestamping) {
        if (phase_ == Phase::AwaitF1)
          role = Role::T1;
        else if (phase_ == Phase::AwaitS2)
          role = Role::T4Compressed, cts = full;
        else if (phase_ == Phase::AwaitF2)
          role = Role::T5Compressed, cts = full;
        else {
          ++dropped_;
          continue;
        }
      } else {
        if (phase_ != Phase::AwaitS2 && phase_ != Phase::AwaitF2) {
          ++dropped_;
          continue;
        }
        if (bundle_ts_seen_ == 0)
          role = Role::T1;
        else if (bundle_ts_seen_ == 1)
          role = Role::T4Compressed, cts = full;
        else
          role = Role::T5Compressed, cts = full;
        ++bundle_ts_seen_;
      }
    }

    switch (role) {
      case Role::S1:
        if (phase_ != Phase::Idle) {
          ++dropped_;
          break;
        }
        record_.t2 = local_arrival;
        result.relevant = true;
        if (cfg_.phy_timestamping) {
          phase_ = Phase::AwaitF1;
        } else {
          phase_ = Phase::AwaitS2;
          result.send_s2 = true;  // S1 is the whole preamble without follow-ups
        }
        break;

      case Role::T1: {
        const bool expected = cfg_.phy_timestamping
                                  ? phase_ == Phase::AwaitF1
                                  : (phase_ == Phase::AwaitS2 && !record_.t1);
        if (!expected) {
          ++dropped_;
          break;
        }
        record_.t1 = static_cast<std::int64_t>(ts_value);
        result.relevant = true;
        if (cfg_.phy_timestamping) {
          phase_ = Phase::AwaitS2;
          result.send_s2 = true;
        }
        break;
      }

      case Role::T4Compressed: {
        if (phase_ != Phase::AwaitS2 || !record_.t1) {
          ++dropped_;
          break;
        }
        const std::uint64_t ref = static_cast<std::uint64_t>(*record_.t1);
        record_.t4 = static_cast<std::int64_t>(decompress_timestamp(cts, ref));
        record_.t6 = local_arrival;
        phase_ = Phase::AwaitF2;
        result.relevant = true;
        break;
      }

      case Role::T5Compressed: {
        if (phase_ != Phase::AwaitF2 || !record_.t4) {
          ++dropped_;
          break;
        }
        const std::uint64_t ref = static_cast<std::uint64_t>(*record_.t4);
        record_.t5 = static_cast<std::int64_t>(decompress_timestamp(cts, ref));
        return complete();
      }

      case Role::Timestamp:
      case Role::None:
        break;
    }
  }
  return result;
}

mac::MacPdu UeSession::finalize_s2(std::int64_t local_depart, std::uint8_t sqi_level) {
  record_.t3 = local_depart;
  mac::MacPdu pdu;
  if (cfg_.carriage == Carriage::Ce)
    pdu.subpdus.push_back(mac::IsyncCe{mac::CeS2{sqi_level}});
  else
    pdu.subpdus.push_back(mac::make_sqi_sdu(sqi_level));
  return pdu;
}

}  // namespace isync
