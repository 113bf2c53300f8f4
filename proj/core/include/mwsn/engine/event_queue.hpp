#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace mwsn {

/// Raised when an event is scheduled before the current clock. Always a
/// programming error; the run is aborted.
class SchedulingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Deterministic future-event list. Events fire in (time, sequence) order
/// where `sequence` is the insertion counter, so equal-time events dispatch
/// in the order they were scheduled.
template <typename Payload>
class EventQueue {
 public:
  struct Entry {
    double time;
    std::uint64_t sequence;
    Payload payload;
  };

  double now() const noexcept { return now_; }
  bool empty() const noexcept { return heap_.empty(); }
  std::size_t size() const noexcept { return heap_.size(); }

  /// Returns the assigned sequence number.
  std::uint64_t schedule(double time, Payload payload) {
    if (!(time >= now_)) {
      throw SchedulingError("event scheduled at t=" + std::to_string(time) +
                            " before current clock t=" + std::to_string(now_));
    }
    const auto seq = next_sequence_++;
    heap_.push(Entry{time, seq, std::move(payload)});
    return seq;
  }

  std::uint64_t schedule_in(double delay, Payload payload) {
    return schedule(now_ + delay, std::move(payload));
  }

  std::optional<double> next_time() const {
    if (heap_.empty()) return std::nullopt;
    return heap_.top().time;
  }

  /// Removes the earliest event and advances the clock to its time.
  Entry pop() {
    if (heap_.empty()) throw SchedulingError("pop from empty event queue");
    Entry e = std::move(const_cast<Entry&>(heap_.top()));
    heap_.pop();
    now_ = e.time;
    return e;
  }

 private:
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const noexcept {
      if (a.time != b.time) return a.time > b.time;
      return a.sequence > b.sequence;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
  double now_ = 0.0;
  std::uint64_t next_sequence_ = 0;
};

}  // namespace mwsn
