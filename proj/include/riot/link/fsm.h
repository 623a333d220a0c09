#ifndef RIOT_LINK_FSM_H
#define RIOT_LINK_FSM_H

#include <cstdint>
#include <functional>
#include <string_view>

#include "riot/sim/kernel.h"

namespace riot::link {

enum class OwcState : std::uint8_t { OFF, SLEEP, IDLE, TX, RX, TX_RX };
enum class BleState : std::uint8_t { OFF, IDLE, TX_BUSY, RX_BUSY };

inline constexpr int kOwcStateCount = 6;
inline constexpr int kBleStateCount = 4;

std::string_view to_string(OwcState s);
std::string_view to_string(BleState s);

template <typename State>
struct Transition {
  State next;
  bool defined;  // false: the pair is not in the table and `next` equals the input state
};

/// Pure transition tables. Undefined (state, event) pairs are no-ops.
Transition<OwcState> owc_transition(OwcState s, sim::EventKind ev);
Transition<BleState> ble_transition(BleState s, sim::EventKind ev);

/**
 * Stateful wrapper around a transition table. Every state change is reported
 * to the listener so the energy model can switch its current draw.
 */
template <typename State>
class InterfaceFsm {
 public:
  using Listener = std::function<void(State from, State to)>;
  using TableFn = Transition<State> (*)(State, sim::EventKind);

  InterfaceFsm(State initial, TableFn table) : state_(initial), table_(table) {}

  void set_listener(Listener l) { listener_ = std::move(l); }

  State dispatch(sim::EventKind ev) {
    const Transition<State> t = table_(state_, ev);
    if (!t.defined) {
      ++undefined_count_;
      return state_;
    }
    if (t.next != state_) {
      const State prev = state_;
      state_ = t.next;
      if (listener_) listener_(prev, state_);
    }
    return state_;
  }

  State state() const { return state_; }
  std::uint64_t undefined_count() const { return undefined_count_; }

 private:
  State state_;
  TableFn table_;
  Listener listener_;
  std::uint64_t undefined_count_ = 0;
};

class OwcFsm : public InterfaceFsm<OwcState> {
 public:
  explicit OwcFsm(OwcState initial = OwcState::SLEEP) : InterfaceFsm(initial, &owc_transition) {}
};

class BleFsm : public InterfaceFsm<BleState> {
 public:
  explicit BleFsm(BleState initial = BleState::OFF) : InterfaceFsm(initial, &ble_transition) {}
};

inline bool can_transmit(OwcState s) { return s == OwcState::IDLE || s == OwcState::RX; }
inline bool can_transmit(BleState s) { return s == BleState::IDLE; }

}  // namespace riot::link

#endif  // RIOT_LINK_FSM_H
