#include "riot/sim/kernel.h"

#include <string>

namespace riot::sim {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::TransmitStart: return "TransmitStart";
    case EventKind::TransmitEnd: return "TransmitEnd";
    case EventKind::ReceiveStart: return "ReceiveStart";
    case EventKind::ReceiveEnd: return "ReceiveEnd";
    case EventKind::SleepSignal: return "SleepSignal";
    case EventKind::WakeSignal: return "WakeSignal";
    case EventKind::BatteryLow: return "BatteryLow";
    case EventKind::BatteryCharged: return "BatteryCharged";
    case EventKind::PollTick: return "PollTick";
    case EventKind::OptimizerTick: return "OptimizerTick";
    case EventKind::HarvestTick: return "HarvestTick";
    case EventKind::AppPacketReady: return "AppPacketReady";
    case EventKind::PeripheralStart: return "PeripheralStart";
    case EventKind::PeripheralEnd: return "PeripheralEnd";
  }
  return "?";
}

EventHandle Kernel::schedule(SimTime fire_at, TargetId target, EventKind kind, Handler handler) {
  if (fire_at < now_) {
    throw CausalityError("event " + std::string(to_string(kind)) + " scheduled at " +
                         std::to_string(fire_at.ns) + " ns, clock is " + std::to_string(now_.ns) +
                         " ns");
  }
  const std::uint64_t seq = next_sequence_++;
  SimEvent ev{fire_at, target, kind, seq};
  queue_.emplace(Key{fire_at, seq}, Entry{ev, std::move(handler)});
  return {fire_at, seq};
}

bool Kernel::cancel(const EventHandle& handle) {
  return queue_.erase(Key{handle.fire_at, handle.sequence}) > 0;
}

RunSummary Kernel::run_until(SimTime end) {
  std::uint64_t count = 0;
  while (!queue_.empty()) {
    auto it = queue_.begin();
    if (it->first.fire_at > end) break;
    Entry entry = std::move(it->second);
    queue_.erase(it);
    now_ = entry.event.fire_at;
    ++count;
    ++executed_;
    if (entry.handler) entry.handler(entry.event);
  }
  if (now_ < end) now_ = end;
  return {count, now_};
}

}  // namespace riot::sim
