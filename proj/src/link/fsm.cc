#include "riot/link/fsm.h"

namespace riot::link {

using sim::EventKind;

std::string_view to_string(OwcState s) {
  switch (s) {
    case OwcState::OFF: return "OFF";
    case OwcState::SLEEP: return "SLEEP";
    case OwcState::IDLE: return "IDLE";
    case OwcState::TX: return "TX";
    case OwcState::RX: return "RX";
    case OwcState::TX_RX: return "TX_RX";
  }
  return "?";
}

std::string_view to_string(BleState s) {
  switch (s) {
    case BleState::OFF: return "OFF";
    case BleState::IDLE: return "IDLE";
    case BleState::TX_BUSY: return "TX_BUSY";
    case BleState::RX_BUSY: return "RX_BUSY";
  }
  return "?";
}

// OFF is left only through BatteryCharged. SLEEP is entered only through
// SleepSignal and left through WakeSignal.
Transition<OwcState> owc_transition(OwcState s, EventKind ev) {
  if (ev == EventKind::BatteryLow) return {OwcState::OFF, true};
  switch (s) {
    case OwcState::OFF:
      if (ev == EventKind::BatteryCharged) return {OwcState::IDLE, true};
      break;
    case OwcState::SLEEP:
      if (ev == EventKind::WakeSignal) return {OwcState::IDLE, true};
      break;
    case OwcState::IDLE:
      if (ev == EventKind::TransmitStart) return {OwcState::TX, true};
      if (ev == EventKind::ReceiveStart) return {OwcState::RX, true};
      if (ev == EventKind::SleepSignal) return {OwcState::SLEEP, true};
      break;
    case OwcState::TX:
      if (ev == EventKind::TransmitEnd) return {OwcState::IDLE, true};
      if (ev == EventKind::ReceiveStart) return {OwcState::TX_RX, true};
      break;
    case OwcState::RX:
      if (ev == EventKind::ReceiveEnd) return {OwcState::IDLE, true};
      if (ev == EventKind::TransmitStart) return {OwcState::TX_RX, true};
      break;
    case OwcState::TX_RX:
      if (ev == EventKind::TransmitEnd) return {OwcState::RX, true};
      if (ev == EventKind::ReceiveEnd) return {OwcState::TX, true};
      break;
  }
  return {s, false};
}

// The BLE radio has no separate sleep state: SleepSignal powers it OFF and
// WakeSignal or BatteryCharged bring it back to IDLE.
Transition<BleState> ble_transition(BleState s, EventKind ev) {
  if (ev == EventKind::BatteryLow) return {BleState::OFF, true};
  switch (s) {
    case BleState::OFF:
      if (ev == EventKind::WakeSignal || ev == EventKind::BatteryCharged) return {BleState::IDLE, true};
      break;
    case BleState::IDLE:
      if (ev == EventKind::TransmitStart) return {BleState::TX_BUSY, true};
      if (ev == EventKind::ReceiveStart) return {BleState::RX_BUSY, true};
      if (ev == EventKind::SleepSignal) return {BleState::OFF, true};
      break;
    case BleState::TX_BUSY:
      if (ev == EventKind::TransmitEnd) return {BleState::IDLE, true};
      break;
    case BleState::RX_BUSY:
      if (ev == EventKind::ReceiveEnd) return {BleState::IDLE, true};
      break;
  }
  return {s, false};
}

}  // namespace riot::link
