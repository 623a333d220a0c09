#ifndef RIOT_SIM_KERNEL_H
#define RIOT_SIM_KERNEL_H

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string_view>

#include "riot/sim/time.h"

namespace riot::sim {

enum class EventKind : std::uint8_t {
  TransmitStart,
  TransmitEnd,
  ReceiveStart,
  ReceiveEnd,
  SleepSignal,
  WakeSignal,
  BatteryLow,
  BatteryCharged,
  PollTick,
  OptimizerTick,
  HarvestTick,
  AppPacketReady,
  PeripheralStart,
  PeripheralEnd,
};

std::string_view to_string(EventKind kind);

using TargetId = std::uint32_t;

struct SimEvent {
  SimTime fire_at;
  TargetId target = 0;
  EventKind kind = EventKind::PollTick;
  std::uint64_t sequence = 0;  // assigned by the kernel
};

struct EventHandle {
  SimTime fire_at;
  std::uint64_t sequence = 0;
};

struct RunSummary {
  std::uint64_t events_executed = 0;
  SimTime final_clock;
};

/// Raised when an event is scheduled before the current clock.
class CausalityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/**
 * Single-threaded discrete-event engine.
 *
 * Events are ordered by (fire_at, sequence); the sequence is a global
 * insertion counter, so equal-time events run in the order they were
 * scheduled. Handlers may schedule or cancel further events.
 */
class Kernel {
 public:
  using Handler = std::function<void(const SimEvent&)>;

  EventHandle schedule(SimTime fire_at, TargetId target, EventKind kind, Handler handler);
  EventHandle schedule_in(SimDuration delay, TargetId target, EventKind kind, Handler handler) {
    return schedule(now_ + delay, target, kind, std::move(handler));
  }

  /// True iff the event was still pending.
  bool cancel(const EventHandle& handle);

  RunSummary run_until(SimTime end);

  SimTime now() const { return now_; }
  std::size_t pending() const { return queue_.size(); }
  std::uint64_t executed() const { return executed_; }

 private:
  struct Key {
    SimTime fire_at;
    std::uint64_t sequence;
    bool operator<(const Key& o) const {
      return fire_at != o.fire_at ? fire_at < o.fire_at : sequence < o.sequence;
    }
  };
  struct Entry {
    SimEvent event;
    Handler handler;
  };

  SimTime now_;
  std::uint64_t next_sequence_ = 1;
  std::uint64_t executed_ = 0;
  std::map<Key, Entry> queue_;
};

}  // namespace riot::sim

#endif  // RIOT_SIM_KERNEL_H
