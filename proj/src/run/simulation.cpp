// SPDX-License-Identifier: Apache-2.0
#include "isync/run/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <variant>

#include "isync/cluster/aggregate.hpp"
#include "isync/cluster/clustering.hpp"
#include "isync/clock/clock_state.hpp"
#include "isync/mac/codec.hpp"
#include "isync/proto/baseline.hpp"
#include "isync/proto/session.hpp"
#include "isync/sched/allocator.hpp"
#include "isync/sched/piggyback.hpp"
#include "isync/sim/event_queue.hpp"

namespace isync {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Timestamp value bytes on the wire (full stamps and compressed
/// suffixes); everything else in a PDU except comm payload is overhead.
std::uint64_t value_ts_bytes(const mac::MacPdu& pdu) {
  std::uint64_t total = 0;
  for (const auto& sub : pdu.subpdus) {
    if (const auto* ce = std::get_if<mac::IsyncCe>(&sub)) {
      if (std::get_if<mac::CeF1>(&ce->body)) total += 8;
      if (const auto* s3 = std::get_if<mac::CeS3>(&ce->body)) total += s3->t4.n_bytes;
      if (const auto* f2 = std::get_if<mac::CeF2>(&ce->body)) total += f2->t5.n_bytes;
    } else if (const auto* sdu = std::get_if<mac::IsyncSdu>(&sub)) {
      if (sdu->kind == mac::IsyncSdu::Kind::Timestamp) total += 8;
    }
  }
  return total;
}

std::uint64_t comm_payload_bytes(const mac::MacPdu& pdu) {
  std::uint64_t total = 0;
  for (const auto& sub : pdu.subpdus)
    if (const auto* comm = std::get_if<mac::CommSdu>(&sub)) total += comm->payload.size();
  return total;
}

/// Budget later exchange steps still need, subtracted from per-message
/// request deadlines so low-urgency messages escalate early enough for the
/// whole exchange to finish.
std::int64_t message_reserve(mac::IsyncMsg kind, std::int64_t skew_window_ns,
                             std::int64_t tti_ns) {
  switch (kind) {
    case mac::IsyncMsg::S1: return skew_window_ns + 20 * tti_ns;
    case mac::IsyncMsg::F1: return skew_window_ns + 15 * tti_ns;
    case mac::IsyncMsg::S2: return skew_window_ns + 10 * tti_ns;
    case mac::IsyncMsg::S3: return 3 * tti_ns;
    case mac::IsyncMsg::F2: return 1 * tti_ns;
  }
  return 0;
}

enum class ItemKind { Comm, Sync, Ptp };

struct PendingItem {
  AccessRequest req;
  ItemKind kind = ItemKind::Comm;
  Plane plane = Plane::User;
  std::uint64_t session = 0;
  int cluster_idx = -1;
  mac::IsyncMsg sync_kind = mac::IsyncMsg::S1;
  PtpMsg ptp_kind = PtpMsg::Sync;
  PtpPacket ptp_packet;  // Delay_Resp carries its T4 from creation
  SimTime created{0};
};

struct Transmission {
  Direction dir = Direction::Downlink;
  Plane plane = Plane::User;
  NodeId ue = 0;
  std::uint64_t session = 0;
  int cluster_idx = -1;
  std::string label;
  mac::MacPdu pdu;
  bool is_ptp = false;
  PtpPacket ptp;
  std::uint64_t bytes = 0;
  std::uint64_t overhead = 0;
  bool has_comm = false;
  SimTime comm_created{0};
  std::uint64_t comm_payload = 0;
};

struct EvTti {};
struct EvDelivery {
  std::size_t tx;
};
struct EvSyncInit {
  NodeId ue;
};
struct EvClusterInit {
  int cluster;
};
struct EvS3Ready {
  std::uint64_t session;
  NodeId ue;
  int cluster;
};
struct EvDeadline {
  std::uint64_t session;
  NodeId ue;
  int cluster;
};
struct EvComm {
  NodeId ue;
};
struct EvEnd {};

using Ev = std::variant<EvTti, EvDelivery, EvSyncInit, EvClusterInit, EvS3Ready, EvDeadline,
                        EvComm, EvEnd>;

enum class UeMode { Ce, Sdu, Cluster, Baseline };

struct UeState {
  UeProfile profile;
  std::optional<ClockState> clock;
  std::optional<SeededRng> noise_rng;
  UeMode mode = UeMode::Sdu;
  int cluster_idx = -1;

  UeSession session;
  std::optional<BsSession> bs;  // BS-side control block for this UE's session
  UePtpSession ptp;
  std::optional<BsPtpSession> bs_ptp;

  double last_measured_err_ns = kInf;
  SimTime last_init{0};
  std::uint64_t drops_collected = 0;
};

struct ClusterCtl {
  Cluster cluster;
  std::optional<BsSession> bs;  // shared session, addressed to the head
  std::map<NodeId, std::uint8_t> collected_sqi;
  SimTime init_time{0};
};

class Sim {
 public:
  Sim(const ScenarioConfig& cfg, bool capture_trace)
      : cfg_(cfg),
        trace_on_(capture_trace),
        channel_rng_(SeededRng::substream(cfg.seed, "channel")),
        stamp_rng_(SeededRng::substream(cfg.seed, "stamps")) {}

  RunResult run();

 private:
  void build_population();
  void seed_events();

  void on_tti();
  void on_delivery(const Transmission& tx);
  void on_sync_init(NodeId ue);
  void on_cluster_init(int cluster);
  void on_s3_ready(const EvS3Ready& ev);
  void on_deadline(const EvDeadline& ev);
  void on_comm(NodeId ue);

  SessionConfig session_config(Carriage carriage) const;
  Carriage carriage_of(UeMode mode) const {
    return mode == UeMode::Ce ? Carriage::Ce : Carriage::Sdu;
  }
  SimTime now() const { return queue_.now(); }
  std::uint8_t ue_sqi(const UeState& u) const {
    return sqi_from_error(u.last_measured_err_ns, u.profile.sync_req.precision_target_ns);
  }
  BsSession* session_ctl(NodeId ue, int cluster, std::uint64_t session_id);
  void enqueue_sync_item(mac::IsyncMsg kind, std::uint64_t session, NodeId ue, int cluster,
                         Direction dir, Plane plane, SimTime session_deadline);
  void enqueue_ptp_item(PtpMsg kind, std::uint64_t session, NodeId ue, SimTime deadline,
                        PtpPacket packet = {});
  void enqueue_follow_ups(const PendingItem& item, BsSession& bs);
  std::uint32_t sync_request_bytes(mac::IsyncMsg kind, Carriage carriage, int cluster) const;
  void run_grid(std::vector<PendingItem>& items, Direction dir, Plane plane,
                const ResourceGrid& grid);
  mac::MacPdu finalize_sync(const PendingItem& item, BsSession* bs);
  void transmit_tx(Transmission tx, const std::vector<std::string>& extra_labels = {});
  void complete_isync(UeState& u, const SyncEstimate& est);
  void record_miss(UeState& u);
  void schedule_next_round(NodeId ue, int cluster, std::uint8_t sqi);
  void drop_session_items(std::uint64_t session_id);
  std::int64_t read_local(UeState& u) { return u.clock->read_local(now(), *u.noise_rng); }

  const ScenarioConfig& cfg_;
  bool trace_on_;
  SeededRng channel_rng_;
  SeededRng stamp_rng_;

  EventQueue<Ev> queue_;
  std::vector<UeState> ues_;  // index = ue id - 1
  std::vector<ClusterCtl> clusters_;
  std::vector<Transmission> tx_store_;

  std::vector<PendingItem> dl_user_, ul_user_, dl_ctrl_, ul_ctrl_;
  ResourceGrid user_grid_, ctrl_grid_;

  MetricsAccumulator metrics_;
  RunResult result_;
  std::uint64_t next_session_ = 1;
  std::uint64_t next_request_ = 1;
  bool ended_ = false;
};

SessionConfig Sim::session_config(Carriage carriage) const {
  SessionConfig sc;
  sc.carriage = carriage;
  sc.phy_timestamping = cfg_.clocks.phy_timestamping;
  sc.skew_window_ns = cfg_.sync.skew_window_ns;
  sc.ts_error_bound_ns = cfg_.clocks.ts_error_bound_ns;
  return sc;
}

BsSession* Sim::session_ctl(NodeId ue, int cluster, std::uint64_t session_id) {
  std::optional<BsSession>& slot = cluster >= 0 ? clusters_[cluster].bs : ues_[ue - 1].bs;
  if (!slot || slot->id() != session_id || slot->done()) return nullptr;
  return &*slot;
}

void Sim::build_population() {
  auto profiles = build_profiles(cfg_);
  ues_.resize(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    UeState& u = ues_[i];
    u.profile = profiles[i];
    SeededRng draw = SeededRng::substream(cfg_.seed, "clock", u.profile.ue);
    const double offset = draw.uniform(-cfg_.clocks.offset_max_ns, cfg_.clocks.offset_max_ns);
    const double skew = draw.uniform(-cfg_.clocks.skew_max_ppm, cfg_.clocks.skew_max_ppm);
    u.clock.emplace(offset, skew, cfg_.clocks.rw_noise_sigma, cfg_.clocks.skew_bound_ppm);
    u.noise_rng.emplace(SeededRng::substream(cfg_.seed, "noise", u.profile.ue));
  }

  switch (cfg_.scheme) {
    case Scheme::Separated:
      for (auto& u : ues_) u.mode = UeMode::Baseline;
      break;
    case Scheme::Sdu:
      for (auto& u : ues_) u.mode = UeMode::Sdu;
      break;
    case Scheme::Ce:
      for (auto& u : ues_) u.mode = UeMode::Ce;
      break;
    case Scheme::Hybrid: {
      NormalizationConstants norm{cfg_.cluster.p_ref_ns, cfg_.cluster.l_ref_ns};
      auto split = select_prioritized(profiles, cfg_.cluster.ce_budget, norm);
      for (NodeId ue : split.ce_set) ues_[ue - 1].mode = UeMode::Ce;
      std::vector<UeProfile> rest;
      for (NodeId ue : split.sdu_set) rest.push_back(ues_[ue - 1].profile);
      if (!rest.empty()) {
        auto clusters = cluster_by_location(rest, cfg_.cluster.max_radius_m);
        for (std::size_t c = 0; c < clusters.size(); ++c) {
          ClusterCtl ctl;
          ctl.cluster = clusters[c];
          clusters_.push_back(std::move(ctl));
          for (NodeId member : clusters[c].members) {
            ues_[member - 1].mode = UeMode::Cluster;
            ues_[member - 1].cluster_idx = static_cast<int>(c);
          }
        }
      }
      break;
    }
  }
}

void Sim::seed_events() {
  queue_.schedule(SimTime{0}, kBsNode, EvTti{});
  queue_.schedule(SimTime{cfg_.duration_ns}, kBsNode, EvEnd{});

  for (auto& u : ues_) {
    SeededRng comm_rng = SeededRng::substream(cfg_.seed, "comm_stagger", u.profile.ue);
    queue_.schedule(SimTime{comm_rng.uniform_i64(0, cfg_.traffic.comm_period_ns - 1)},
                    u.profile.ue, EvComm{u.profile.ue});
    if (u.mode == UeMode::Cluster) continue;  // cluster rounds are collective
    SeededRng sync_rng = SeededRng::substream(cfg_.seed, "sync_stagger", u.profile.ue);
    queue_.schedule(SimTime{sync_rng.uniform_i64(0, cfg_.sync.base_period_ns - 1)},
                    u.profile.ue, EvSyncInit{u.profile.ue});
  }
  for (std::size_t c = 0; c < clusters_.size(); ++c) {
    SeededRng rng = SeededRng::substream(cfg_.seed, "cluster_stagger", clusters_[c].cluster.head);
    queue_.schedule(SimTime{rng.uniform_i64(0, cfg_.sync.base_period_ns - 1)},
                    clusters_[c].cluster.head, EvClusterInit{static_cast<int>(c)});
  }
}

RunResult Sim::run() {
  user_grid_ = ResourceGrid{cfg_.grid.tti_ns, cfg_.grid.n_freq_blocks,
                            cfg_.grid.block_capacity_bytes};
  ctrl_grid_ = ResourceGrid{cfg_.grid.tti_ns, cfg_.grid.ctrl_blocks,
                            cfg_.grid.ctrl_capacity_bytes};
  build_population();
  seed_events();

  while (!queue_.empty() && !ended_) {
    auto ev = queue_.pop();
    std::visit(
        [&](auto&& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, EvTti>) {
            on_tti();
          } else if constexpr (std::is_same_v<T, EvDelivery>) {
            on_delivery(tx_store_[e.tx]);
          } else if constexpr (std::is_same_v<T, EvSyncInit>) {
            on_sync_init(e.ue);
          } else if constexpr (std::is_same_v<T, EvClusterInit>) {
            on_cluster_init(e.cluster);
          } else if constexpr (std::is_same_v<T, EvS3Ready>) {
            on_s3_ready(e);
          } else if constexpr (std::is_same_v<T, EvDeadline>) {
            on_deadline(e);
          } else if constexpr (std::is_same_v<T, EvComm>) {
            on_comm(e.ue);
          } else if constexpr (std::is_same_v<T, EvEnd>) {
            ended_ = true;
          }
        },
        ev.payload);
  }

  for (auto& u : ues_) result_.dropped_messages += u.drops_collected + u.session.dropped();
  const auto profiles = build_profiles(cfg_);
  result_.report = metrics_.finalize(profiles, cfg_.metrics, SimTime{cfg_.duration_ns});
  return std::move(result_);
}

// --- request creation -------------------------------------------------------

std::uint32_t Sim::sync_request_bytes(mac::IsyncMsg kind, Carriage carriage, int cluster) const {
  const bool ce = carriage == Carriage::Ce;
  switch (kind) {
    case mac::IsyncMsg::S1:
      return ce ? 1 : 4;  // CE flag octet vs Feedback SDU
    case mac::IsyncMsg::F1:
      return ce ? 9 : 10;
    case mac::IsyncMsg::S2: {
      if (cluster >= 0) {
        const std::size_t n = clusters_[cluster].cluster.members.size();
        return static_cast<std::uint32_t>(3 + 3 * n);  // framed [count][(id, sqi)...]
      }
      return ce ? 2 : 4;
    }
    case mac::IsyncMsg::S3: {
      if (!cfg_.clocks.phy_timestamping) {
        // One-step bundle; compressed suffixes bounded by the exchange
        // span (well under 2^39 ns), so n <= 5 each.
        return ce ? 9 + 7 + 7 : 30;
      }
      return ce ? 2 + 5 : 10;
    }
    case mac::IsyncMsg::F2:
      return ce ? 2 + 5 : 10;
  }
  return 16;
}

void Sim::enqueue_sync_item(mac::IsyncMsg kind, std::uint64_t session, NodeId ue, int cluster,
                            Direction dir, Plane plane, SimTime session_deadline) {
  PendingItem item;
  item.kind = ItemKind::Sync;
  item.plane = plane;
  item.session = session;
  item.cluster_idx = cluster;
  item.sync_kind = kind;
  item.created = now();
  item.req.id = next_request_++;
  item.req.ue = ue;
  item.req.service = Service::Sync;
  item.req.dir = dir;
  const Carriage carriage = plane == Plane::Control ? Carriage::Ce : Carriage::Sdu;
  item.req.bytes = sync_request_bytes(kind, carriage, cluster);
  const std::int64_t reserve = message_reserve(kind, cfg_.sync.skew_window_ns, cfg_.grid.tti_ns);
  std::int64_t dl = session_deadline.ns - reserve;
  if (dl <= now().ns) dl = session_deadline.ns;
  item.req.deadline = SimTime{dl};
  item.req.priority = ReqPriority::Normal;
  item.req.piggybackable = plane == Plane::User && dir == Direction::Downlink;
  auto& list = plane == Plane::Control
                   ? (dir == Direction::Downlink ? dl_ctrl_ : ul_ctrl_)
                   : (dir == Direction::Downlink ? dl_user_ : ul_user_);
  list.push_back(std::move(item));
}

void Sim::enqueue_ptp_item(PtpMsg kind, std::uint64_t session, NodeId ue, SimTime deadline,
                           PtpPacket packet) {
  PendingItem item;
  item.kind = ItemKind::Ptp;
  item.plane = Plane::User;
  item.session = session;
  item.ptp_kind = kind;
  item.ptp_packet = packet;
  item.created = now();
  item.req.id = next_request_++;
  item.req.ue = ue;
  item.req.service = Service::Sync;
  item.req.dir = kind == PtpMsg::DelayReq ? Direction::Uplink : Direction::Downlink;
  item.req.bytes = static_cast<std::uint32_t>(ptp_packet_bytes(cfg_.baseline.h_base_bytes));
  // Separated provisioning: the network knows nothing about sync deadlines,
  // so baseline packets ride the ordinary latency class with no priority
  // lane. The session deadline still governs the exchange itself.
  const SimTime latency_class = now() + cfg_.requirements.max_latency_ns;
  item.req.deadline = latency_class < deadline ? latency_class : deadline;
  item.req.priority = ReqPriority::Normal;
  item.req.piggybackable = false;
  (item.req.dir == Direction::Downlink ? dl_user_ : ul_user_).push_back(std::move(item));
}

void Sim::enqueue_follow_ups(const PendingItem& item, BsSession& bs) {
  if (bs.f1_pending()) {
    bs.clear_f1_pending();
    enqueue_sync_item(mac::IsyncMsg::F1, item.session, item.req.ue, item.cluster_idx,
                      Direction::Downlink, item.plane, bs.deadline());
  }
  if (bs.f2_pending()) {
    bs.clear_f2_pending();
    enqueue_sync_item(mac::IsyncMsg::F2, item.session, item.req.ue, item.cluster_idx,
                      Direction::Downlink, item.plane, bs.deadline());
  }
}

// --- timers -----------------------------------------------------------------

void Sim::on_comm(NodeId ue) {
  PendingItem item;
  item.kind = ItemKind::Comm;
  item.plane = Plane::User;
  item.created = now();
  item.req.id = next_request_++;
  item.req.ue = ue;
  item.req.service = Service::Comm;
  item.req.dir = Direction::Downlink;
  item.req.bytes = 2 + cfg_.traffic.comm_payload_bytes;  // subheader + L + payload
  item.req.deadline = now() + cfg_.requirements.max_latency_ns;
  item.req.priority = ReqPriority::Normal;
  dl_user_.push_back(std::move(item));

  const SimTime next = now() + cfg_.traffic.comm_period_ns;
  if (next.ns < cfg_.duration_ns) queue_.schedule(next, ue, EvComm{ue});
}

void Sim::on_sync_init(NodeId ue) {
  UeState& u = ues_[ue - 1];
  if (u.mode == UeMode::Baseline) {
    if (u.bs_ptp && !u.bs_ptp->done()) return;  // coalesce
    const std::uint64_t id = next_session_++;
    const SimTime deadline = now() + cfg_.requirements.timeliness_target_ns;
    u.bs_ptp.emplace(id, ue, deadline);
    u.ptp = UePtpSession(id);
    u.last_init = now();
    enqueue_ptp_item(PtpMsg::Sync, id, ue, deadline);
    queue_.schedule(deadline, ue, EvDeadline{id, ue, -1});
    return;
  }

  if (u.bs && u.bs->active()) return;  // coalesce onto the active session
  const std::uint64_t id = next_session_++;
  const SimTime deadline = now() + cfg_.requirements.timeliness_target_ns;
  const Carriage carriage = carriage_of(u.mode);
  u.drops_collected += u.session.dropped();
  u.bs.emplace(id, ue, session_config(carriage), deadline);
  u.bs->start();
  u.session = UeSession(id, ue, session_config(carriage));
  u.last_init = now();
  const Plane plane = carriage == Carriage::Ce ? Plane::Control : Plane::User;
  enqueue_sync_item(mac::IsyncMsg::S1, id, ue, -1, Direction::Downlink, plane, deadline);
  queue_.schedule(deadline, ue, EvDeadline{id, ue, -1});
}

void Sim::on_cluster_init(int cluster) {
  ClusterCtl& ctl = clusters_[cluster];
  if (ctl.bs && ctl.bs->active()) return;
  const std::uint64_t id = next_session_++;
  const SimTime deadline = now() + cfg_.requirements.timeliness_target_ns;
  ctl.bs.emplace(id, ctl.cluster.head, session_config(Carriage::Sdu), deadline);
  ctl.bs->start();
  ctl.collected_sqi.clear();
  ctl.init_time = now();
  for (NodeId member : ctl.cluster.members) {
    UeState& u = ues_[member - 1];
    u.drops_collected += u.session.dropped();
    u.session = UeSession(id, member, session_config(Carriage::Sdu));
    u.last_init = now();
  }
  enqueue_sync_item(mac::IsyncMsg::S1, id, ctl.cluster.head, cluster, Direction::Downlink,
                    Plane::User, deadline);
  queue_.schedule(deadline, ctl.cluster.head, EvDeadline{id, ctl.cluster.head, cluster});
}

void Sim::on_s3_ready(const EvS3Ready& ev) {
  BsSession* bs = session_ctl(ev.ue, ev.cluster, ev.session);
  if (!bs || bs->phase() != Phase::SentS3) return;
  const Plane plane =
      carriage_of(ues_[ev.ue - 1].mode) == Carriage::Ce ? Plane::Control : Plane::User;
  enqueue_sync_item(mac::IsyncMsg::S3, ev.session, ev.ue, ev.cluster, Direction::Downlink,
                    plane, bs->deadline());
}

void Sim::schedule_next_round(NodeId ue, int cluster, std::uint8_t sqi) {
  const SimTime next = next_sync_time(cfg_.sync, SqiReport{sqi}, now());
  if (next.ns >= cfg_.duration_ns) return;
  if (cluster >= 0)
    queue_.schedule(next, ue, EvClusterInit{cluster});
  else
    queue_.schedule(next, ue, EvSyncInit{ue});
}

void Sim::drop_session_items(std::uint64_t session_id) {
  auto scrub = [&](std::vector<PendingItem>& items) {
    std::erase_if(items, [&](const PendingItem& it) {
      return it.kind != ItemKind::Comm && it.session == session_id;
    });
  };
  scrub(dl_user_);
  scrub(ul_user_);
  scrub(dl_ctrl_);
  scrub(ul_ctrl_);
}

void Sim::complete_isync(UeState& u, const SyncEstimate& est) {
  const double err_pre = std::abs(u.clock->true_error_ns(now()));
  const double timeliness = static_cast<double>(now() - u.last_init);
  if (est.valid) {
    // The UE's own view of its error, extrapolated to the correction
    // instant; this is what the next SQI report quantizes.
    const double local_now = u.clock->local_at(now());
    const double elapsed_ref =
        (local_now - static_cast<double>(est.local_anchor_ns)) / (1.0 + est.skew);
    u.last_measured_err_ns = std::abs(est.offset_ns + est.skew * elapsed_ref);
    u.clock->apply_correction(est, now());
  }
  metrics_.add_sync_sample(u.profile.ue, SyncSample{err_pre, timeliness}, now());
  ++result_.sessions_completed;
}

void Sim::record_miss(UeState& u) {
  const double err = std::abs(u.clock->true_error_ns(now()));
  metrics_.add_sync_sample(u.profile.ue, SyncSample{err, kInf}, now());
  ++result_.sessions_failed;
}

void Sim::on_deadline(const EvDeadline& ev) {
  if (ev.cluster >= 0) {
    ClusterCtl& ctl = clusters_[ev.cluster];
    if (!ctl.bs || ctl.bs->id() != ev.session || ctl.bs->done()) return;
    ctl.bs->fail();
    for (NodeId member : ctl.cluster.members) {
      UeState& u = ues_[member - 1];
      if (u.session.phase() != Phase::Complete) {
        u.session.fail();
        record_miss(u);
      }
    }
    drop_session_items(ev.session);
    schedule_next_round(ev.ue, ev.cluster, 255);
    return;
  }

  UeState& u = ues_[ev.ue - 1];
  if (u.mode == UeMode::Baseline) {
    if (!u.bs_ptp || u.bs_ptp->id() != ev.session || u.bs_ptp->done()) return;
    u.bs_ptp->mark_done();
    record_miss(u);
    drop_session_items(ev.session);
    const SimTime next = now() + cfg_.sync.base_period_ns;
    if (next.ns < cfg_.duration_ns) queue_.schedule(next, ev.ue, EvSyncInit{ev.ue});
    return;
  }

  if (!session_ctl(ev.ue, -1, ev.session)) return;
  u.bs->fail();
  u.session.fail();
  record_miss(u);
  drop_session_items(ev.session);
  schedule_next_round(ev.ue, -1, 255);
}

// --- grid execution -----------------------------------------------------------

void Sim::on_tti() {
  // Expired requests can never be granted: comm chunks are lost to
  // throughput, sync items die with their session's deadline event.
  const std::int64_t horizon_start = now().ns + cfg_.grid.tti_ns;
  auto expire = [&](std::vector<PendingItem>& items) {
    std::erase_if(items,
                  [&](const PendingItem& it) { return it.req.deadline.ns < horizon_start; });
  };
  expire(dl_user_);
  expire(ul_user_);
  expire(dl_ctrl_);
  expire(ul_ctrl_);

  run_grid(dl_user_, Direction::Downlink, Plane::User, user_grid_);
  run_grid(ul_user_, Direction::Uplink, Plane::User, user_grid_);
  run_grid(dl_ctrl_, Direction::Downlink, Plane::Control, ctrl_grid_);
  run_grid(ul_ctrl_, Direction::Uplink, Plane::Control, ctrl_grid_);

  const SimTime next = now() + cfg_.grid.tti_ns;
  if (next.ns < cfg_.duration_ns) queue_.schedule(next, kBsNode, EvTti{});
}

void Sim::run_grid(std::vector<PendingItem>& items, Direction dir, Plane plane,
                   const ResourceGrid& grid) {
  if (items.empty()) return;

  // Re-classify urgency each TTI as deadlines approach.
  for (auto& it : items) {
    if (it.kind == ItemKind::Sync)
      it.req.priority = classify_priority(Service::Sync, it.req.deadline, now(), grid.tti_ns,
                                          cfg_.grid.urgency_threshold_ttis);
  }

  // Low-urgency piggybackable sync waits for a communication ride instead
  // of requesting its own grant.
  const bool piggy_active =
      cfg_.piggyback_enabled && plane == Plane::User && dir == Direction::Downlink;
  std::vector<AccessRequest> submitted;
  for (const auto& it : items) {
    if (piggy_active && it.kind == ItemKind::Sync && it.req.piggybackable &&
        it.req.priority == ReqPriority::Normal)
      continue;
    submitted.push_back(it.req);
  }

  std::vector<std::uint64_t> granted_now;
  if (!submitted.empty()) {
    AllocationPlan plan = allocate(grid, submitted, now(), cfg_.grid.horizon_ttis);
    for (const auto& g : plan.grants)
      if (g.tti == plan.first_tti && plan.first_tti * grid.tti_ns == now().ns)
        granted_now.push_back(g.request_id);
  }

  for (std::uint64_t req_id : granted_now) {
    auto it = std::find_if(items.begin(), items.end(),
                           [&](const PendingItem& p) { return p.req.id == req_id; });
    if (it == items.end()) continue;
    PendingItem item = std::move(*it);
    items.erase(it);
    if (plane == Plane::User) ++result_.user_blocks_granted;

    if (item.kind == ItemKind::Comm) {
      Transmission tx;
      tx.dir = dir;
      tx.plane = plane;
      tx.ue = item.req.ue;
      tx.label = "COMM";
      tx.has_comm = true;
      tx.comm_created = item.created;
      tx.comm_payload = cfg_.traffic.comm_payload_bytes;
      tx.pdu.subpdus.push_back(mac::CommSdu{4, mac::Bytes(cfg_.traffic.comm_payload_bytes, 0)});

      // Offer the spare grant bytes to waiting sync messages for the same
      // destination. Request sizes are upper bounds of the encoded sizes,
      // so a message that passes the pre-check always appends fully.
      std::vector<std::string> extra;
      if (piggy_active) {
        std::vector<std::uint64_t> candidates;
        for (const auto& w : items)
          if (w.kind == ItemKind::Sync && w.req.piggybackable &&
              w.req.priority == ReqPriority::Normal && w.req.ue == item.req.ue)
            candidates.push_back(w.req.id);
        for (std::uint64_t cid : candidates) {
          auto wit = std::find_if(items.begin(), items.end(),
                                  [&](const PendingItem& p) { return p.req.id == cid; });
          if (wit == items.end()) continue;
          BsSession* wbs = session_ctl(wit->req.ue, wit->cluster_idx, wit->session);
          if (!wbs) {
            items.erase(wit);
            continue;
          }
          if (tx.cluster_idx >= 0 && wit->cluster_idx != tx.cluster_idx) continue;
          if (mac::encoded_size(tx.pdu) + wit->req.bytes > grid.block_capacity_bytes) continue;

          PendingItem witem = std::move(*wit);
          items.erase(wit);
          mac::MacPdu msg = finalize_sync(witem, wbs);
          for (const auto& sub : msg.subpdus)
            try_piggyback(tx.pdu, sub, grid.block_capacity_bytes, Urgency::Low);
          ++result_.piggybacked_subpdus;
          extra.push_back(to_string(witem.sync_kind));
          result_.sync_user_overhead_bytes += mac::encoded_size(msg) - value_ts_bytes(msg);
          if (witem.cluster_idx >= 0) tx.cluster_idx = witem.cluster_idx;
          if (tx.session == 0) tx.session = witem.session;
          enqueue_follow_ups(witem, *wbs);
        }
      }
      transmit_tx(std::move(tx), extra);
      continue;
    }

    if (item.kind == ItemKind::Ptp) {
      UeState& u = ues_[item.req.ue - 1];
      if (!u.bs_ptp || u.bs_ptp->id() != item.session || u.bs_ptp->done()) continue;
      Transmission tx;
      tx.dir = item.req.dir;
      tx.plane = Plane::User;
      tx.ue = item.req.ue;
      tx.session = item.session;
      tx.is_ptp = true;
      switch (item.ptp_kind) {
        case PtpMsg::Sync:
          tx.ptp = u.bs_ptp->finalize_sync(now());
          u.bs_ptp->clear_follow_up_pending();
          enqueue_ptp_item(PtpMsg::FollowUp, item.session, item.req.ue, u.bs_ptp->deadline());
          break;
        case PtpMsg::FollowUp:
          tx.ptp = u.bs_ptp->finalize_follow_up();
          break;
        case PtpMsg::DelayReq:
          tx.ptp = u.ptp.finalize_delay_req(read_local(u));
          break;
        case PtpMsg::DelayResp:
          tx.ptp = item.ptp_packet;
          break;
      }
      tx.label = to_string(tx.ptp.kind);
      tx.bytes = ptp_packet_bytes(cfg_.baseline.h_base_bytes);
      tx.overhead = tx.bytes - ptp_value_bytes(tx.ptp.kind);
      transmit_tx(std::move(tx));
      continue;
    }

    // Standalone sync message.
    BsSession* bs = session_ctl(item.req.ue, item.cluster_idx, item.session);
    if (!bs) continue;  // stale grant for a dead session
    Transmission tx;
    tx.dir = item.req.dir;
    tx.plane = item.plane;
    tx.ue = item.req.ue;
    tx.session = item.session;
    tx.cluster_idx = item.cluster_idx;
    tx.label = to_string(item.sync_kind);
    tx.pdu = finalize_sync(item, bs);
    enqueue_follow_ups(item, *bs);
    transmit_tx(std::move(tx));
  }
}

mac::MacPdu Sim::finalize_sync(const PendingItem& item, BsSession* bs) {
  switch (item.sync_kind) {
    case mac::IsyncMsg::S1:
      return bs->finalize_s1(now(), stamp_rng_);
    case mac::IsyncMsg::F1:
      return bs->finalize_f1();
    case mac::IsyncMsg::S3:
      return bs->finalize_s3(now(), stamp_rng_);
    case mac::IsyncMsg::F2:
      return bs->finalize_f2();
    case mac::IsyncMsg::S2: {
      if (item.cluster_idx >= 0) {
        // The head's uplink aggregate: per-member SQI records; T3 is each
        // member's own clock reading at this departure.
        ClusterCtl& ctl = clusters_[item.cluster_idx];
        std::map<NodeId, mac::Bytes> payloads;
        for (NodeId member : ctl.cluster.members) {
          auto sq = ctl.collected_sqi.find(member);
          if (sq == ctl.collected_sqi.end()) continue;
          UeState& m = ues_[member - 1];
          m.session.finalize_s2(read_local(m), sq->second);
          payloads[member] = mac::Bytes{sq->second};
        }
        auto agg = aggregate_sync_sdus(ctl.cluster, payloads);
        mac::MacPdu pdu;
        if (agg.subpdu) pdu.subpdus.push_back(*agg.subpdu);
        return pdu;
      }
      UeState& u = ues_[item.req.ue - 1];
      return u.session.finalize_s2(read_local(u), ue_sqi(u));
    }
  }
  return {};
}

void Sim::transmit_tx(Transmission tx, const std::vector<std::string>& extra_labels) {
  if (!tx.is_ptp) {
    tx.bytes = mac::encoded_size(tx.pdu);
    tx.overhead = tx.bytes - value_ts_bytes(tx.pdu) - comm_payload_bytes(tx.pdu);
  }

  const DeliveryOutcome out = transmit(cfg_.channel, tx.dir, tx.bytes, channel_rng_);

  metrics_.add_transmission(tx.plane, tx.bytes, tx.overhead);
  ++result_.message_counts[tx.label];
  for (const auto& l : extra_labels) ++result_.message_counts[l];

  const bool is_sync_msg = !tx.has_comm && !tx.is_ptp;
  if (is_sync_msg) {
    if (tx.dir == Direction::Uplink) result_.uplink_timestamp_bytes += value_ts_bytes(tx.pdu);
    if (tx.plane == Plane::User) result_.sync_user_overhead_bytes += tx.overhead;
  }

  if (trace_on_) {
    std::string label = tx.label;
    for (const auto& l : extra_labels) label += "+" + l;
    result_.trace.push_back(TraceRow{now().ns, tx.ue, tx.session, label, tx.bytes, tx.plane,
                                     tx.overhead, out.lost});
  }

  if (out.lost) return;
  const std::int64_t delay = out.delay_ns;
  tx_store_.push_back(std::move(tx));
  queue_.schedule(now() + delay, tx_store_.back().ue, EvDelivery{tx_store_.size() - 1});
}

// --- delivery -----------------------------------------------------------------

void Sim::on_delivery(const Transmission& tx) {
  if (tx.is_ptp) {
    UeState& u = ues_[tx.ue - 1];
    if (tx.dir == Direction::Downlink) {
      auto r = u.ptp.on_dl(tx.ptp, read_local(u));
      if (r.send_delay_req && u.bs_ptp)
        enqueue_ptp_item(PtpMsg::DelayReq, tx.session, tx.ue, u.bs_ptp->deadline());
      if (r.completed) {
        complete_isync(u, r.estimate);
        if (u.bs_ptp) u.bs_ptp->mark_done();
        const SimTime next = now() + cfg_.sync.base_period_ns;
        if (next.ns < cfg_.duration_ns) queue_.schedule(next, tx.ue, EvSyncInit{tx.ue});
      }
    } else {
      if (u.bs_ptp && u.bs_ptp->id() == tx.session && !u.bs_ptp->done()) {
        PtpPacket resp = u.bs_ptp->on_delay_req(now());
        enqueue_ptp_item(PtpMsg::DelayResp, tx.session, tx.ue, u.bs_ptp->deadline(), resp);
      } else {
        ++result_.dropped_messages;
      }
    }
    return;
  }

  auto encoded = mac::encode_pdu(tx.pdu);
  auto decoded = mac::decode_pdu(encoded.value(), tx.dir);
  const mac::MacPdu& pdu = decoded.value();

  if (tx.dir == Direction::Downlink) {
    if (tx.has_comm)
      metrics_.add_comm_delivery(tx.ue, tx.comm_payload,
                                 static_cast<double>(now() - tx.comm_created), now());

    mac::MacPdu sync_subs;
    for (const auto& sub : pdu.subpdus)
      if (!std::holds_alternative<mac::CommSdu>(sub) &&
          !std::holds_alternative<mac::Padding>(sub))
        sync_subs.subpdus.push_back(sub);
    if (sync_subs.subpdus.empty()) return;

    if (tx.cluster_idx >= 0) {
      // The head relays over the (abstract) sidelink; every member sees
      // the content at the same instant on its own clock.
      ClusterCtl& ctl = clusters_[tx.cluster_idx];
      if (!ctl.bs || ctl.bs->id() != tx.session || ctl.bs->done()) {
        ++result_.dropped_messages;
        return;
      }
      bool all_complete = true;
      for (NodeId member : ctl.cluster.members) {
        UeState& m = ues_[member - 1];
        auto r = m.session.on_dl(sync_subs, read_local(m));
        if (r.send_s2) ctl.collected_sqi[member] = ue_sqi(m);
        if (r.completed) complete_isync(m, r.estimate);
        if (m.session.phase() != Phase::Complete) all_complete = false;
      }
      if (ctl.collected_sqi.size() == ctl.cluster.members.size() &&
          ctl.bs->phase() == Phase::AwaitS2)
        enqueue_sync_item(mac::IsyncMsg::S2, ctl.bs->id(), ctl.cluster.head, tx.cluster_idx,
                          Direction::Uplink, Plane::User, ctl.bs->deadline());
      if (all_complete) {
        ctl.bs->mark_complete();
        schedule_next_round(ctl.cluster.head, tx.cluster_idx,
                            ctl.bs->sqi_known() ? ctl.bs->sqi() : std::uint8_t{255});
      }
      return;
    }

    UeState& u = ues_[tx.ue - 1];
    if (!u.bs || u.bs->id() != tx.session || u.bs->done()) {
      ++result_.dropped_messages;
      return;
    }
    auto r = u.session.on_dl(sync_subs, read_local(u));
    if (r.send_s2) {
      const Plane plane = carriage_of(u.mode) == Carriage::Ce ? Plane::Control : Plane::User;
      enqueue_sync_item(mac::IsyncMsg::S2, tx.session, tx.ue, -1, Direction::Uplink, plane,
                        u.bs->deadline());
    }
    if (r.completed) {
      complete_isync(u, r.estimate);
      u.bs->mark_complete();
      schedule_next_round(tx.ue, -1, u.bs->sqi_known() ? u.bs->sqi() : std::uint8_t{255});
    }
    return;
  }

  // Uplink: SQI report(s) reach the BS-side session.
  std::optional<std::uint8_t> sqi;
  for (const auto& sub : pdu.subpdus) {
    if (const auto* ce = std::get_if<mac::IsyncCe>(&sub)) {
      if (const auto* s2 = std::get_if<mac::CeS2>(&ce->body)) sqi = s2->sqi;
    } else if (const auto* sdu = std::get_if<mac::IsyncSdu>(&sub)) {
      if (sdu->kind == mac::IsyncSdu::Kind::Sqi && !sdu->content.empty()) sqi = sdu->content[0];
    } else if (const auto* agg = std::get_if<mac::AggregateSdu>(&sub)) {
      std::uint8_t worst = 0;
      bool any = false;
      for (const auto& m : agg->members) {
        if (m.payload.empty()) continue;
        worst = std::max(worst, m.payload[0]);
        any = true;
      }
      if (any) sqi = worst;
    }
  }
  if (!sqi) {
    ++result_.dropped_messages;
    return;
  }

  BsSession* bs = session_ctl(tx.ue, tx.cluster_idx, tx.session);
  if (!bs || bs->phase() != Phase::AwaitS2) {
    ++result_.dropped_messages;
    return;
  }
  const SimTime s3_at = bs->on_s2(now(), *sqi);
  if (s3_at <= now())
    on_s3_ready(EvS3Ready{tx.session, tx.ue, tx.cluster_idx});
  else
    queue_.schedule(s3_at, tx.ue, EvS3Ready{tx.session, tx.ue, tx.cluster_idx});
}

}  // namespace

std::vector<UeProfile> build_profiles(const ScenarioConfig& cfg) {
  std::vector<UeProfile> profiles;
  profiles.reserve(cfg.n_ues);
  for (int i = 1; i <= cfg.n_ues; ++i) {
    UeProfile p;
    p.ue = static_cast<NodeId>(i);
    SeededRng pos = SeededRng::substream(cfg.seed, "pos", p.ue);
    p.x_m = pos.uniform(0.0, cfg.cluster.cell_size_m);
    p.y_m = pos.uniform(0.0, cfg.cluster.cell_size_m);
    SeededRng w = SeededRng::substream(cfg.seed, "weight", p.ue);
    p.w_sync = w.uniform01();
    p.w_comm = 1.0 - p.w_sync;
    p.sync_req = {cfg.requirements.precision_target_ns, cfg.requirements.timeliness_target_ns};
    p.comm_req = {cfg.requirements.min_throughput_bps, cfg.requirements.max_latency_ns};
    profiles.push_back(p);
  }
  return profiles;
}

RunResult run_simulation(const ScenarioConfig& cfg, bool capture_trace) {
  Sim sim(cfg, capture_trace);
  return sim.run();
}

std::string trace_to_csv(const std::vector<TraceRow>& rows) {
  std::ostringstream out;
  out << "time_ns,node,session,message,bytes,plane,overhead_bytes,outcome\n";
  for (const auto& r : rows)
    out << r.time_ns << ',' << r.node << ',' << r.session << ',' << r.message << ',' << r.bytes
        << ',' << to_string(r.plane) << ',' << r.overhead_bytes << ','
        << (r.lost ? "lost" : "sent") << '\n';
  return out.str();
}

}  // namespace isync
