#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "relsim/components.hpp"

namespace relsim {

enum class EventKind : int {
  HourTick,
  GenUp,
  GenDown,
  LineTrip,  // applied inside the cascade loop; kept in the taxonomy for tracing
  LinePermFail,
  LineRepair,
  ManualReclose,
  OperatorContactDone,
  OperatorSolutionDone,
  RestorationComplete,
};
inline constexpr int kNumEventKinds = 10;

struct SimEvent {
  double time_h = 0.0;
  std::uint64_t seq = 0;  // breaks ties deterministically
  EventKind kind = EventKind::HourTick;
  int subject = -1;  // component index the event applies to
  bool cancelled = false;
};

/// Time-ordered queue with lazy cancellation. Total order is (time, seq);
/// the sequence number is assigned at scheduling time.
class EventQueue {
 public:
  EventId schedule(double time_h, EventKind kind, int subject);
  void cancel(EventId id);

  /// Pops the next live event; returns false when the queue is empty.
  bool pop(SimEvent& out);
  double next_time() const;  // +inf when empty (cancelled entries skipped)

 private:
  struct HeapEntry {
    double time;
    std::uint64_t seq;
    EventId id;
  };
  struct Later {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };
  mutable std::priority_queue<HeapEntry, std::vector<HeapEntry>, Later> heap_;
  std::vector<SimEvent> pool_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace relsim
