#include <doctest.h>

#include <vector>

#include "riot/sim/kernel.h"
#include "riot/sim/rng.h"

using namespace riot::sim;

TEST_CASE("schedule at the current instant fires first") {
  Kernel k;
  std::vector<int> order;
  k.schedule(SimTime::from_seconds(1), 0, EventKind::PollTick, [&](const SimEvent&) { order.push_back(2); });
  k.schedule(SimTime{}, 0, EventKind::PollTick, [&](const SimEvent&) { order.push_back(1); });
  const auto r = k.run_until(SimTime::from_seconds(2));
  CHECK(r.events_executed == 2);
  CHECK(order == std::vector<int>{1, 2});
}

TEST_CASE("equal timestamps run in insertion order") {
  Kernel k;
  std::vector<std::uint64_t> seqs;
  std::vector<int> tags;
  for (int i = 0; i < 5; ++i) {
    k.schedule(SimTime::from_seconds(5), 0, EventKind::HarvestTick, [&, i](const SimEvent& e) {
      seqs.push_back(e.sequence);
      tags.push_back(i);
    });
  }
  k.run_until(SimTime::from_seconds(5));
  CHECK(tags == std::vector<int>{0, 1, 2, 3, 4});
  for (std::size_t i = 1; i < seqs.size(); ++i) CHECK(seqs[i] > seqs[i - 1]);
}

TEST_CASE("scheduling in the past is rejected") {
  Kernel k;
  k.schedule(SimTime::from_seconds(7), 0, EventKind::PollTick, [](const SimEvent&) {});
  k.run_until(SimTime::from_seconds(7));
  CHECK(k.now() == SimTime::from_seconds(7));
  CHECK_THROWS_AS(k.schedule(SimTime::from_seconds(3), 0, EventKind::PollTick, [](const SimEvent&) {}),
                  CausalityError);
}

TEST_CASE("run_until on an empty queue advances the clock") {
  Kernel k;
  const auto r = k.run_until(SimTime::from_seconds(10));
  CHECK(r.events_executed == 0);
  CHECK(r.final_clock == SimTime::from_seconds(10));
}

TEST_CASE("run_until executes only events up to the end") {
  Kernel k;
  int fired = 0;
  k.schedule(SimTime::from_seconds(5), 0, EventKind::PollTick, [&](const SimEvent&) { ++fired; });
  k.schedule(SimTime::from_seconds(11), 0, EventKind::PollTick, [&](const SimEvent&) { ++fired; });
  const auto r = k.run_until(SimTime::from_seconds(10));
  CHECK(r.events_executed == 1);
  CHECK(fired == 1);
  CHECK(r.final_clock == SimTime::from_seconds(10));
  CHECK(k.pending() == 1);
}

TEST_CASE("cancel semantics") {
  Kernel k;
  int fired = 0;
  auto h = k.schedule(SimTime::from_seconds(1), 0, EventKind::PollTick, [&](const SimEvent&) { ++fired; });
  CHECK(k.cancel(h));
  CHECK_FALSE(k.cancel(h));
  auto h2 = k.schedule(SimTime::from_seconds(2), 0, EventKind::PollTick, [&](const SimEvent&) { ++fired; });
  k.run_until(SimTime::from_seconds(3));
  CHECK(fired == 1);
  CHECK_FALSE(k.cancel(h2));
}

TEST_CASE("executed timestamps are non-decreasing with self-scheduling handlers") {
  Kernel k;
  RngStream rng(42, 0);
  std::vector<std::int64_t> times;
  std::function<void(const SimEvent&)> h = [&](const SimEvent& e) {
    times.push_back(e.fire_at.ns);
    if (times.size() < 2000) {
      const auto delay = SimDuration::nanos(static_cast<std::int64_t>(rng.uniform() * 1e6));
      k.schedule(e.fire_at + delay, 0, EventKind::PollTick, h);
      k.schedule(e.fire_at + delay, 0, EventKind::PollTick, [&](const SimEvent& e2) { times.push_back(e2.fire_at.ns); });
    }
  };
  k.schedule(SimTime{}, 0, EventKind::PollTick, h);
  k.run_until(SimTime::from_seconds(100));
  REQUIRE(times.size() > 100);
  for (std::size_t i = 1; i < times.size(); ++i) CHECK(times[i] >= times[i - 1]);
}

TEST_CASE("durations of the calibration timeline are exact in nanoseconds") {
  CHECK(SimDuration::from_millis(45).ns == 45'000'000);
  CHECK(SimDuration::from_millis(152.5).ns == 152'500'000);
  CHECK(SimDuration::from_millis(3.13).ns == 3'130'000);
  CHECK(SimDuration::from_millis(68).ns == 68'000'000);
  CHECK(SimDuration::from_millis(100).ns == 100'000'000);
  CHECK(SimTime::from_seconds(5.0 + 1025.0).ns == 1'030'000'000'000);
}

TEST_CASE("rng streams are reproducible and independent") {
  RngStream a(7, 1), b(7, 1), c(7, 2), d(8, 1);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs_c |= x != c.next_u64();
    differs_d |= x != d.next_u64();
  }
  CHECK(differs_c);
  CHECK(differs_d);
}

TEST_CASE("mt19937_64 output is the standard sequence") {
  // 10000th output for the default seed is fixed by the standard.
  std::mt19937_64 e;
  e.discard(9999);
  CHECK(e() == 9981545732273789042ULL);
}

TEST_CASE("uniform draws lie in [0, 1) and have the right mean") {
  RngStream r(1, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal draws have unit variance") {
  RngStream r(3, 9);
  double s = 0, s2 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / n) < 0.02);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("event kind names") {
  CHECK(to_string(EventKind::TransmitStart) == "TransmitStart");
  CHECK(to_string(EventKind::AppPacketReady) == "AppPacketReady");
  CHECK(to_string(EventKind::PeripheralEnd) == "PeripheralEnd");
}
