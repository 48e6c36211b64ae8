#include "relsim/events.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace relsim {

EventId EventQueue::schedule(double time_h, EventKind kind, int subject) {
  if (!(time_h >= 0) || !std::isfinite(time_h))
    throw std::invalid_argument("event time must be finite and >= 0");
  const EventId id = static_cast<EventId>(pool_.size());
  pool_.push_back({time_h, next_seq_++, kind, subject, false});
  heap_.push({time_h, pool_.back().seq, id});
  return id;
}

void EventQueue::cancel(EventId id) {
  if (id == kNoEvent) return;
  pool_.at(id).cancelled = true;
}

bool EventQueue::pop(SimEvent& out) {
  while (!heap_.empty()) {
    const HeapEntry top = heap_.top();
    heap_.pop();
    if (pool_[top.id].cancelled) continue;
    out = pool_[top.id];
    return true;
  }
  return false;
}

double EventQueue::next_time() const {
  while (!heap_.empty() && pool_[heap_.top().id].cancelled) heap_.pop();
  return heap_.empty() ? std::numeric_limits<double>::infinity() : heap_.top().time;
}

}  // namespace relsim
