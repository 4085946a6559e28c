// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "isync/clock/estimator.hpp"
#include "isync/mac/codec.hpp"
#include "isync/proto/policy.hpp"
#include "isync/sim/rng.hpp"
#include "isync/sim/time.hpp"

namespace isync {

/// How the exchange rides the MAC: as control elements on the control
/// plane or as service data units on the user plane. SDU carriage sends
/// full 8-byte timestamps; CE carriage compresses T4 against T1 and T5
/// against T4.
enum class Carriage { Ce, Sdu };

const char* to_string(Carriage c);

enum class Phase { Idle, SentS1, AwaitF1, AwaitS2, SentS3, AwaitF2, Complete, Failed };

const char* to_string(Phase p);

struct SessionConfig {
  Carriage carriage = Carriage::Ce;
  bool phy_timestamping = true;
  std::int64_t skew_window_ns = 50'000'000;
  // MAC-scheduled stamps (T1/T5 without PHY timestamping) err by
  // uniform(-bound, +bound).
  std::int64_t ts_error_bound_ns = 500;
};

/// BS end of one six-timestamp exchange.
///
/// With PHY timestamping the session is five transmissions
/// (S1, F1, S2, S3, F2) and T1/T5 are exact departure times carried by the
/// follow-ups. Without it the session is three transmissions: S1 (flag),
/// S2 (SQI), and an S3 bundle delivering T1, compressed T4 and compressed
/// T5 together, where T1/T5 are scheduled departure stamps with error.
class BsSession {
 public:
  BsSession(std::uint64_t id, NodeId ue, SessionConfig cfg, SimTime deadline);

  /// True while the exchange is in flight; a second initiate request for
  /// the same UE must coalesce onto the active session.
  bool active() const { return phase_ != Phase::Idle && !done(); }
  bool done() const { return phase_ == Phase::Complete || phase_ == Phase::Failed; }
  Phase phase() const { return phase_; }

  void start() { phase_ = Phase::SentS1; }

  // Departure hooks, called when the grant fires. Each returns the PDU to
  // put on the air and records the matching reference-clock stamp.
  mac::MacPdu finalize_s1(SimTime depart, SeededRng& rng);
  mac::MacPdu finalize_f1();
  mac::MacPdu finalize_s3(SimTime depart, SeededRng& rng);
  mac::MacPdu finalize_f2();

  /// After S1 departs (PHY mode), F1 carrying the exact T1 goes out next.
  bool f1_pending() const { return f1_pending_; }
  void clear_f1_pending() { f1_pending_ = false; }
  bool f2_pending() const { return f2_pending_; }
  void clear_f2_pending() { f2_pending_ = false; }

  /// S2 arrival: records T4 and the reported SQI; returns the earliest
  /// time S3 may be requested (T1 + skew window).
  SimTime on_s2(SimTime t4_arrival, std::uint8_t sqi);

  void mark_complete() { phase_ = Phase::Complete; }
  void fail() { phase_ = Phase::Failed; }

  std::uint64_t id() const { return id_; }
  NodeId ue() const { return ue_; }
  SimTime deadline() const { return deadline_; }
  std::uint8_t sqi() const { return sqi_; }
  bool sqi_known() const { return sqi_known_; }
  const SessionConfig& config() const { return cfg_; }
  std::optional<std::int64_t> t1_stamp() const { return t1_stamp_; }

 private:
  std::int64_t stamp(SimTime depart, SeededRng& rng) const;

  std::uint64_t id_;
  NodeId ue_;
  SessionConfig cfg_;
  SimTime deadline_;
  Phase phase_ = Phase::Idle;
  bool f1_pending_ = false;
  bool f2_pending_ = false;
  std::optional<SimTime> t1_true_;
  std::optional<std::int64_t> t1_stamp_, t4_, t5_stamp_;
  std::uint8_t sqi_ = 255;
  bool sqi_known_ = false;
};

/// UE end of the exchange. The simulation reads the UE clock and passes
/// local arrival/departure readings in; the machine owns the timestamp
/// record and runs the estimator at completion.
class UeSession {
 public:
  UeSession() = default;
  UeSession(std::uint64_t id, NodeId ue, SessionConfig cfg);

  struct DlResult {
    bool relevant = false;   // message belonged to this session
    bool send_s2 = false;    // preamble done, SQI report due
    bool completed = false;  // estimate below is valid to apply
    SyncEstimate estimate;
  };

  /// Handles one downlink PDU of this session. `local_arrival` is the UE
  /// clock reading at the delivery instant. Out-of-order or foreign
  /// messages are counted and dropped.
  DlResult on_dl(const mac::MacPdu& pdu, std::int64_t local_arrival);

  /// Builds the S2 report; `local_depart` is the UE clock at the uplink
  /// grant (this is T3).
  mac::MacPdu finalize_s2(std::int64_t local_depart, std::uint8_t sqi_level);

  void fail() { phase_ = Phase::Failed; }
  Phase phase() const { return phase_; }
  const SyncSession& record() const { return record_; }
  std::uint64_t dropped() const { return dropped_; }

 private:
  DlResult complete();

  SessionConfig cfg_;
  Phase phase_ = Phase::Idle;
  SyncSession record_;
  std::uint64_t dropped_ = 0;
  // SDU carriage delivers bare timestamps; roles are inferred from the
  // session phase and, within the one-step bundle, from arrival order.
  int bundle_ts_seen_ = 0;
};

}  // namespace isync
