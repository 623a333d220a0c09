#include <doctest.h>

#include <set>

#include "riot/link/fsm.h"
#include "riot/link/mac.h"
#include "riot/link/vlc_frame.h"
#include "riot/sim/rng.h"

using namespace riot;
using namespace riot::link;
using sim::EventKind;

namespace {

constexpr EventKind kAllEvents[] = {
    EventKind::TransmitStart, EventKind::TransmitEnd,  EventKind::ReceiveStart,  EventKind::ReceiveEnd,
    EventKind::SleepSignal,   EventKind::WakeSignal,   EventKind::BatteryLow,    EventKind::BatteryCharged,
    EventKind::PollTick,      EventKind::OptimizerTick, EventKind::HarvestTick,  EventKind::AppPacketReady,
    EventKind::PeripheralStart, EventKind::PeripheralEnd,
};

VlcFrame random_frame(sim::RngStream& rng) {
  VlcFrame f;
  f.src = static_cast<std::uint8_t>(rng.next_u64());
  f.dst = static_cast<std::uint8_t>(rng.next_u64());
  f.payload_type = static_cast<std::uint8_t>(rng.next_u64());
  const auto n = rng.next_u64() % (kVlcMaxPayload + 1);
  for (std::size_t i = 0; i < n; ++i) f.payload.push_back(static_cast<std::uint8_t>(rng.next_u64()));
  return f;
}

FrameError::Kind decode_error(const ChunkStream& s) {
  try {
    decode_vlc_chunks(s);
  } catch (const FrameError& e) {
    return e.kind();
  }
  FAIL("decode accepted a corrupted stream");
  return FrameError::Kind::Oversize;
}

}  // namespace

TEST_CASE("owc fsm examples") {
  CHECK(owc_transition(OwcState::IDLE, EventKind::TransmitStart).next == OwcState::TX);
  CHECK(owc_transition(OwcState::TX, EventKind::ReceiveStart).next == OwcState::TX_RX);
  CHECK(owc_transition(OwcState::TX_RX, EventKind::TransmitEnd).next == OwcState::RX);
  CHECK(owc_transition(OwcState::TX_RX, EventKind::ReceiveEnd).next == OwcState::TX);
  CHECK(owc_transition(OwcState::SLEEP, EventKind::WakeSignal).next == OwcState::IDLE);
  CHECK(owc_transition(OwcState::IDLE, EventKind::SleepSignal).next == OwcState::SLEEP);
  CHECK(owc_transition(OwcState::OFF, EventKind::BatteryCharged).next == OwcState::IDLE);
}

TEST_CASE("battery low forces OFF from every state") {
  for (int i = 0; i < kOwcStateCount; ++i) {
    const auto t = owc_transition(static_cast<OwcState>(i), EventKind::BatteryLow);
    CHECK(t.defined);
    CHECK(t.next == OwcState::OFF);
  }
  for (int i = 0; i < kBleStateCount; ++i) {
    const auto t = ble_transition(static_cast<BleState>(i), EventKind::BatteryLow);
    CHECK(t.defined);
    CHECK(t.next == BleState::OFF);
  }
}

TEST_CASE("ble fsm examples") {
  CHECK(ble_transition(BleState::IDLE, EventKind::TransmitStart).next == BleState::TX_BUSY);
  CHECK(ble_transition(BleState::TX_BUSY, EventKind::TransmitEnd).next == BleState::IDLE);
  CHECK(ble_transition(BleState::IDLE, EventKind::ReceiveStart).next == BleState::RX_BUSY);
  CHECK(ble_transition(BleState::OFF, EventKind::WakeSignal).next == BleState::IDLE);
}

TEST_CASE("undefined pairs are counted no-ops") {
  const auto t = owc_transition(OwcState::SLEEP, EventKind::TransmitStart);
  CHECK_FALSE(t.defined);
  CHECK(t.next == OwcState::SLEEP);
  OwcFsm fsm(OwcState::SLEEP);
  int changes = 0;
  fsm.set_listener([&](OwcState, OwcState) { ++changes; });
  CHECK(fsm.dispatch(EventKind::TransmitStart) == OwcState::SLEEP);
  CHECK(fsm.undefined_count() == 1);
  CHECK(fsm.dispatch(EventKind::WakeSignal) == OwcState::IDLE);
  CHECK(changes == 1);
}

TEST_CASE("no transition leaves OFF or SLEEP straight into a transmit state") {
  for (EventKind ev : kAllEvents) {
    for (OwcState s : {OwcState::OFF, OwcState::SLEEP}) {
      const auto n = owc_transition(s, ev).next;
      CHECK(n != OwcState::TX);
      CHECK(n != OwcState::TX_RX);
    }
    CHECK(ble_transition(BleState::OFF, ev).next != BleState::TX_BUSY);
  }
}

TEST_CASE("random event streams keep the fsm inside its state set") {
  sim::RngStream rng(11, 0);
  OwcFsm owc(OwcState::SLEEP);
  BleFsm ble;
  for (int i = 0; i < 20000; ++i) {
    const EventKind ev = kAllEvents[rng.next_u64() % std::size(kAllEvents)];
    const OwcState before = owc.state();
    const OwcState after = owc.dispatch(ev);
    CHECK(static_cast<int>(after) < kOwcStateCount);
    if (after == OwcState::TX || after == OwcState::TX_RX) {
      CHECK((before == OwcState::IDLE || before == OwcState::RX || before == OwcState::TX ||
             before == OwcState::TX_RX));
    }
    CHECK(static_cast<int>(ble.dispatch(ev)) < kBleStateCount);
  }
}

TEST_CASE("vlc frame always spans six chunks") {
  VlcFrame f{1, 2, 3, std::vector<std::uint8_t>(16, 0xEE)};
  CHECK(encode_vlc_frame(f).chunks.size() == 6);
  CHECK(encode_vlc_frame(VlcFrame{}).chunks.size() == 6);
  CHECK(decode_vlc_chunks(encode_vlc_frame(VlcFrame{})) == VlcFrame{});
}

TEST_CASE("vlc byte layout") {
  VlcFrame f{0x01, 0x02, 0x10, {0xDE, 0xAD}};
  const auto b = serialize(f);
  CHECK(b[0] == 0x01);
  CHECK(b[1] == 0x02);
  CHECK(b[2] == kVlcStartMarker);
  CHECK(b[3] == 0x10);
  CHECK(b[4] == 2);
  CHECK(b[5] == 0xDE);
  CHECK(b[6] == 0xAD);
  for (std::size_t i = 7; i < 21; ++i) CHECK(b[i] == 0);
  CHECK(b[22] == kVlcEndMarker);
  unsigned sum = 0;
  for (auto x : b) sum += x;
  CHECK(sum % 256 == 0);
  const auto s = encode_vlc_frame(f);
  CHECK(s.chunks[0] == 0x0102A510u);
  CHECK(s.chunks[1] == 0x02DEAD00u);
  CHECK((s.chunks[5] & 0xFFu) == 0u);
  CHECK(((s.chunks[5] >> 8) & 0xFFu) == kVlcEndMarker);
}

TEST_CASE("codec round trip over random frames") {
  sim::RngStream rng(5, 0);
  for (int i = 0; i < 10000; ++i) {
    const VlcFrame f = random_frame(rng);
    REQUIRE(decode_vlc_chunks(encode_vlc_frame(f)) == f);
  }
}

TEST_CASE("every single-bit corruption is rejected") {
  sim::RngStream rng(6, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto good = encode_vlc_frame(random_frame(rng));
    for (std::size_t c = 0; c < good.chunks.size(); ++c) {
      for (int bit = 0; bit < 32; ++bit) {
        auto bad = good;
        bad.chunks[c] ^= 1u << bit;
        decode_error(bad);
      }
    }
  }
}

TEST_CASE("payload corruption is an integrity error") {
  auto s = encode_vlc_frame(VlcFrame{1, 2, 3, {9, 9, 9}});
  s.chunks[2] ^= 0x00010000u;
  CHECK(decode_error(s) == FrameError::Kind::Integrity);
  auto m = encode_vlc_frame(VlcFrame{1, 2, 3, {9}});
  m.chunks[0] ^= 0x00000100u;  // start marker byte
  CHECK(decode_error(m) == FrameError::Kind::Framing);
}

TEST_CASE("wrong chunk counts are truncation errors") {
  auto s = encode_vlc_frame(VlcFrame{});
  s.chunks.pop_back();
  CHECK(decode_error(s) == FrameError::Kind::Truncation);
  s.chunks.push_back(0);
  s.chunks.push_back(0);
  CHECK(decode_error(s) == FrameError::Kind::Truncation);
}

TEST_CASE("oversize payload") {
  VlcFrame f;
  f.payload.assign(17, 1);
  try {
    encode_vlc_frame(f);
    FAIL("expected oversize error");
  } catch (const FrameError& e) {
    CHECK(e.kind() == FrameError::Kind::Oversize);
  }
}

TEST_CASE("vlc frame span") {
  const auto s = encode_vlc_frame(VlcFrame{});
  CHECK(s.span() == sim::SimDuration::millis(6 * 68 + 5 * 100));
  CHECK(s.span().to_seconds() == doctest::Approx(0.908));
  CHECK(s.airtime() == sim::SimDuration::millis(408));
}

TEST_CASE("ble airtime") {
  BleTimingConfig cfg;
  CHECK(ble_airtime(cfg, 116, channel::PhyRate::k2M) == sim::SimDuration::from_millis(3.13));
  const auto empty = ble_airtime(cfg, 0, channel::PhyRate::k2M);
  CHECK(empty.ns > 0);
  CHECK(empty == sim::SimDuration::from_millis(2.14));
  // Payload portion doubles, event overhead stays one event.
  const double portion = 3.13 - 2.14;
  CHECK(ble_airtime(cfg, 232, channel::PhyRate::k2M).to_millis() == doctest::Approx(2.14 + 2 * portion).epsilon(1e-6));
  CHECK(ble_airtime(cfg, 116, channel::PhyRate::k1M).to_millis() == doctest::Approx(2.14 + 2 * portion).epsilon(1e-6));
  // 512 B over a 247 B MTU takes three events.
  CHECK(ble_airtime(cfg, 512, channel::PhyRate::k2M).to_millis() ==
        doctest::Approx(3 * 2.14 + 512 * portion / 116).epsilon(1e-6));
}

TEST_CASE("ble airtime is non-decreasing in payload") {
  BleTimingConfig cfg;
  auto prev = ble_airtime(cfg, 0, channel::PhyRate::k2M);
  for (std::uint32_t n = 1; n < 2000; ++n) {
    const auto cur = ble_airtime(cfg, n, channel::PhyRate::k2M);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("ble connection duty") {
  BleTimingConfig cfg;
  CHECK(cfg.connection_duty() == doctest::Approx(2.14 / 45.0));
  CHECK(cfg.connection_duty() == doctest::Approx(0.0476).epsilon(0.01));
}

TEST_CASE("round-robin polling with three nodes") {
  PollSchedule ps({1, 2, 3}, sim::SimDuration::seconds(25));
  for (std::uint64_t k = 0; k < 4; ++k) {
    for (std::uint32_t i = 0; i < 3; ++i) {
      const auto t = ps.poll_tick(true);
      CHECK(t.polled == i + 1);
      CHECK(*ps.slot_start(i + 1, k) == sim::SimDuration::seconds(25 * (3 * k + i)));
    }
  }
  CHECK_FALSE(ps.slot_start(9, 0).has_value());
}

TEST_CASE("polling signals") {
  PollSchedule ps({1, 2, 3}, sim::SimDuration::seconds(25));
  auto t0 = ps.poll_tick(true);
  CHECK(t0.wake == 1u);
  CHECK_FALSE(t0.sleep.has_value());
  auto t1 = ps.poll_tick(true);
  CHECK(t1.wake == 2u);
  CHECK(t1.sleep == 1u);
  PollSchedule ns({1, 2, 3}, sim::SimDuration::seconds(25));
  for (int i = 0; i < 9; ++i) CHECK_FALSE(ns.poll_tick(false).sleep.has_value());
}

TEST_CASE("single node is polled every slot") {
  PollSchedule ps({7}, sim::SimDuration::seconds(25));
  for (int i = 0; i < 5; ++i) {
    const auto t = ps.poll_tick(true);
    CHECK(t.polled == 7u);
    CHECK_FALSE(t.sleep.has_value());
  }
  CHECK(*ps.slot_start(7, 3) == sim::SimDuration::seconds(75));
}

TEST_CASE("empty schedule") {
  PollSchedule ps({}, sim::SimDuration::seconds(25));
  CHECK_THROWS(ps.poll_tick(true));
}

TEST_CASE("transmit outcomes") {
  sim::RngStream rng(1, 0);
  LinkState link;
  auto ok = transmit_packet(true, Modality::OWC, OwcState::IDLE, BleState::OFF, 512, link, rng);
  CHECK(ok.delivered);
  CHECK(ok.bursts.size() == 1);
  CHECK_THROWS_AS(transmit_packet(true, Modality::OWC, OwcState::SLEEP, BleState::IDLE, 512, link, rng),
                  ProtocolViolation);
  CHECK_THROWS_AS(transmit_packet(true, Modality::BLE, OwcState::IDLE, BleState::OFF, 512, link, rng),
                  ProtocolViolation);
  CHECK_THROWS_AS(transmit_packet(false, Modality::BLE, OwcState::IDLE, BleState::IDLE, 512, link, rng),
                  ProtocolViolation);
}

TEST_CASE("chunked vlc uplink of one frame") {
  sim::RngStream rng(1, 0);
  LinkState link;
  link.owc_phy = OwcChunkedPhy{};
  const auto out = transmit_packet(true, Modality::OWC, OwcState::IDLE, BleState::OFF, 23, link, rng);
  CHECK(out.bursts.size() == 6);
  CHECK(out.airtime == sim::SimDuration::millis(408));
  CHECK(out.span.to_seconds() == doctest::Approx(0.908));
  for (std::size_t i = 1; i < out.bursts.size(); ++i) {
    CHECK(out.bursts[i].offset - out.bursts[i - 1].offset == sim::SimDuration::millis(168));
  }
}

TEST_CASE("delivery rate tracks packet success") {
  sim::RngStream rng(2, 0);
  LinkState link;
  link.ber = 1e-4;
  int ok = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    ok += transmit_packet(true, Modality::BLE, OwcState::OFF, BleState::IDLE, 512, link, rng).delivered;
  }
  const double p = std::pow(1.0 - 1e-4, 4096);
  CHECK(static_cast<double>(ok) / n == doctest::Approx(p).epsilon(0.02));
}

TEST_CASE("achievable throughput") {
  LinkState link;
  link.owc_phy = OwcOokPhy{500e3, sim::SimDuration::micros(20)};
  const double owc = achievable_throughput_bps(Modality::OWC, 512, link);
  CHECK(owc == doctest::Approx(4096.0 / (20e-6 + 4096.0 / 500e3)));
  const double ble = achievable_throughput_bps(Modality::BLE, 512, link);
  CHECK(ble == doctest::Approx(4096.0 / ble_airtime(link.ble, 512, channel::PhyRate::k2M).to_seconds()));
  CHECK(owc > ble);
}
