// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "isync/sim/time.hpp"

namespace isync {

using EventId = std::uint64_t;

/// Deterministic discrete-event queue. Events pop in (time, insertion
/// sequence) order, so equal-time events replay in the order they were
/// scheduled and the same scenario + seed yields an identical pop trace.
template <typename Payload>
class EventQueue {
 public:
  struct Event {
    SimTime at;
    EventId id = 0;
    NodeId node = 0;
    Payload payload;
  };

  EventId schedule(SimTime at, NodeId node, Payload payload) {
    if (at < now_) throw std::logic_error("EventQueue::schedule: event in the past");
    const EventId id = next_id_++;
    heap_.push(Event{at, id, node, std::move(payload)});
    return id;
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  SimTime now() const { return now_; }
  const Event& peek() const { return heap_.top(); }

  Event pop() {
    Event ev = heap_.top();
    heap_.pop();
    now_ = ev.at;
    return ev;
  }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.at != b.at) return b.at < a.at;
      return b.id < a.id;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  EventId next_id_ = 0;
  SimTime now_{0};
};

}  // namespace isync
