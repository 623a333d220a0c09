#ifndef RIOT_LINK_MAC_H
#define RIOT_LINK_MAC_H

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "riot/channel/channel.h"
#include "riot/link/fsm.h"
#include "riot/sim/rng.h"
#include "riot/sim/time.h"
#include "riot/types.h"

namespace riot::link {

class ProtocolViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct BleTimingConfig {
  double conn_interval_ms = 45.0;
  double adv_interval_ms = 152.5;
  double adv_event_len_ms = 4.18;
  double conn_event_len_ms = 2.14;
  double uplink_tx_len_ms = 3.13;
  double downlink_rx_len_ms = 2.33;
  std::uint32_t mtu = 247;
  /// Payload size for which `uplink_tx_len_ms` was measured (2 Mbit/s PHY).
  std::uint32_t reference_payload_bytes = 116;

  void validate() const;
  /// Fraction of time spent inside connection events.
  double connection_duty() const { return conn_event_len_ms / conn_interval_ms; }
};

/**
 * Radio-on time to move `payload_bytes` uplink. Each connection event costs
 * `conn_event_len_ms`; the per-byte cost is calibrated so that the reference
 * payload takes `uplink_tx_len_ms` at 2 Mbit/s and doubles at 1 Mbit/s.
 * Payloads above the MTU are split over several events.
 */
sim::SimDuration ble_airtime(const BleTimingConfig& cfg, std::uint32_t payload_bytes,
                             channel::PhyRate rate);

/// Round-robin polling MAC. One node holds the transmit token per slot.
class PollSchedule {
 public:
  PollSchedule(std::vector<std::uint32_t> order, sim::SimDuration slot_length);

  struct Tick {
    std::uint32_t polled;
    std::optional<std::uint32_t> wake;
    std::optional<std::uint32_t> sleep;
  };

  /// Hands the token to the next node. Throws on an empty schedule.
  Tick poll_tick(bool inter_transmission_sleep);

  const std::vector<std::uint32_t>& order() const { return order_; }
  sim::SimDuration slot_length() const { return slot_length_; }
  /// Start of the k-th slot of `node` relative to the first poll; nullopt if not registered.
  std::optional<sim::SimDuration> slot_start(std::uint32_t node, std::uint64_t k) const;
  std::optional<std::uint32_t> holder() const { return holder_; }

 private:
  std::vector<std::uint32_t> order_;
  sim::SimDuration slot_length_;
  std::size_t next_index_ = 0;
  std::optional<std::uint32_t> holder_;
};

/// OWC physical layer: NEC-style 32-bit chunked VLC frames or plain OOK.
struct OwcChunkedPhy {
  sim::SimDuration per_chunk_airtime = sim::SimDuration::millis(68);
  sim::SimDuration inter_chunk_delay = sim::SimDuration::millis(100);
};
struct OwcOokPhy {
  double bit_rate_bps = 1e6;
  sim::SimDuration preamble = sim::SimDuration::micros(20);
};
using OwcPhy = std::variant<OwcChunkedPhy, OwcOokPhy>;

struct LinkState {
  double ber = 0.0;
  OwcPhy owc_phy = OwcOokPhy{};
  BleTimingConfig ble;
  channel::PhyRate ble_rate = channel::PhyRate::k2M;
};

/// One radio-on interval relative to the start of the transmission.
struct Burst {
  sim::SimDuration offset;
  sim::SimDuration length;
};

struct TxOutcome {
  bool delivered = false;
  std::vector<Burst> bursts;
  sim::SimDuration airtime;  // sum of burst lengths
  sim::SimDuration span;     // first burst start to last burst end
};

/// Timing of a packet on `modality` without any state checks.
std::vector<Burst> plan_bursts(Modality modality, std::uint32_t packet_bytes, const LinkState& link);

/// Payload-carrying throughput ceiling of a modality for back-to-back packets.
double achievable_throughput_bps(Modality modality, std::uint32_t packet_bytes,
                                 const LinkState& link);

/**
 * Validates the FSM guard, computes the burst timeline, and draws delivery
 * against packet_success(ber, bits) from `rng`. The caller drives the FSM
 * through TransmitStart/TransmitEnd for each burst.
 */
TxOutcome transmit_packet(bool holds_token, Modality modality, OwcState owc, BleState ble,
                          std::uint32_t packet_bytes, const LinkState& link, sim::RngStream& rng);

}  // namespace riot::link

#endif  // RIOT_LINK_MAC_H
