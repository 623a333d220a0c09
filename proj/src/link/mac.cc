#include "riot/link/mac.h"

#include <string>

#include "riot/link/vlc_frame.h"

namespace riot::link {

void BleTimingConfig::validate() const {
  if (!(conn_event_len_ms < conn_interval_ms))
    throw std::invalid_argument("BLE connection event must be shorter than the connection interval");
  if (!(adv_event_len_ms < adv_interval_ms))
    throw std::invalid_argument("BLE advertising event must be shorter than the advertising interval");
  if (!(uplink_tx_len_ms > conn_event_len_ms))
    throw std::invalid_argument("BLE uplink length must exceed the empty connection event length");
  if (mtu == 0 || reference_payload_bytes == 0) throw std::invalid_argument("BLE MTU and reference payload must be > 0");
}

sim::SimDuration ble_airtime(const BleTimingConfig& cfg, std::uint32_t payload_bytes,
                             channel::PhyRate rate) {
  const double per_byte_2m_ms =
      (cfg.uplink_tx_len_ms - cfg.conn_event_len_ms) / static_cast<double>(cfg.reference_payload_bytes);
  const double per_byte_ms = rate == channel::PhyRate::k2M ? per_byte_2m_ms : 2.0 * per_byte_2m_ms;
  const std::uint32_t events = payload_bytes == 0 ? 1 : (payload_bytes + cfg.mtu - 1) / cfg.mtu;
  return sim::SimDuration::from_millis(events * cfg.conn_event_len_ms + payload_bytes * per_byte_ms);
}

PollSchedule::PollSchedule(std::vector<std::uint32_t> order, sim::SimDuration slot_length)
    : order_(std::move(order)), slot_length_(slot_length) {
  if (slot_length_.ns <= 0) throw std::invalid_argument("poll slot length must be > 0");
}

PollSchedule::Tick PollSchedule::poll_tick(bool inter_transmission_sleep) {
  if (order_.empty()) throw std::logic_error("poll schedule has no registered nodes");
  const std::uint32_t polled = order_[next_index_];
  next_index_ = (next_index_ + 1) % order_.size();
  Tick t{polled, polled, std::nullopt};
  if (inter_transmission_sleep && holder_ && *holder_ != polled) t.sleep = *holder_;
  if (holder_ && *holder_ == polled) t.wake.reset();  // already active
  holder_ = polled;
  return t;
}

std::optional<sim::SimDuration> PollSchedule::slot_start(std::uint32_t node, std::uint64_t k) const {
  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (order_[i] == node) {
      const auto index = static_cast<std::int64_t>(k * order_.size() + i);
      return slot_length_ * index;
    }
  }
  return std::nullopt;
}

std::vector<Burst> plan_bursts(Modality modality, std::uint32_t packet_bytes, const LinkState& link) {
  std::vector<Burst> bursts;
  if (modality == Modality::BLE) {
    bursts.push_back({{}, ble_airtime(link.ble, packet_bytes, link.ble_rate)});
    return bursts;
  }
  if (const auto* ook = std::get_if<OwcOokPhy>(&link.owc_phy)) {
    const double bits = 8.0 * packet_bytes;
    bursts.push_back({{}, ook->preamble + sim::SimDuration::from_seconds(bits / ook->bit_rate_bps)});
    return bursts;
  }
  const auto& nec = std::get<OwcChunkedPhy>(link.owc_phy);
  const std::uint32_t frames =
      packet_bytes == 0 ? 1 : static_cast<std::uint32_t>((packet_bytes + kVlcFrameBytes - 1) / kVlcFrameBytes);
  sim::SimDuration at{};
  for (std::uint32_t c = 0; c < frames * kVlcChunkCount; ++c) {
    if (c > 0) at += nec.inter_chunk_delay;
    bursts.push_back({at, nec.per_chunk_airtime});
    at += nec.per_chunk_airtime;
  }
  return bursts;
}

double achievable_throughput_bps(Modality modality, std::uint32_t packet_bytes, const LinkState& link) {
  const auto bursts = plan_bursts(modality, packet_bytes, link);
  const auto& last = bursts.back();
  const double span_s = (last.offset + last.length).to_seconds();
  return span_s > 0.0 ? 8.0 * packet_bytes / span_s : 0.0;
}

TxOutcome transmit_packet(bool holds_token, Modality modality, OwcState owc, BleState ble,
                          std::uint32_t packet_bytes, const LinkState& link, sim::RngStream& rng) {
  if (!holds_token) throw ProtocolViolation("transmit attempted without the poll token");
  if (modality == Modality::OWC && !can_transmit(owc)) {
    throw ProtocolViolation("OWC transmit attempted in state " + std::string(to_string(owc)));
  }
  if (modality == Modality::BLE && !can_transmit(ble)) {
    throw ProtocolViolation("BLE transmit attempted in state " + std::string(to_string(ble)));
  }
  TxOutcome out;
  out.bursts = plan_bursts(modality, packet_bytes, link);
  for (const auto& b : out.bursts) out.airtime += b.length;
  const auto& last = out.bursts.back();
  out.span = last.offset + last.length;
  const double p = channel::packet_success(link.ber, 8ull * packet_bytes);
  out.delivered = p >= 1.0 ? true : rng.bernoulli(p);
  return out;
}

}  // namespace riot::link
