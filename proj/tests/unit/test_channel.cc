#include <doctest.h>

#include <cmath>
#include <numbers>

#include "riot/channel/channel.h"

using namespace riot::channel;

namespace {

// Gaussian upper tail by composite Simpson over [x, x + 40].
double tail_simpson(double x) {
  const int n = 20000;
  const double a = x, b = x + 40.0, h = (b - a) / n;
  auto f = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

Pose at(double x, double y, double z, Vec3 facing) { return Pose({x, y, z}, facing); }

}  // namespace

TEST_CASE("friis at 1 m matches the free-space formula") {
  RadioLinkConfig cfg;
  const double oracle = -20.0 * std::log10(4.0 * std::numbers::pi * 1.0 * 2.4e9 / 299792458.0);
  const double p = friis_rx_power_dbm(cfg, at(0, 0, 0, {1, 0, 0}), at(1, 0, 0, {-1, 0, 0}));
  CHECK(p == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(p == doctest::Approx(-40.05).epsilon(0.0005));
}

TEST_CASE("friis scales with distance and tx power") {
  RadioLinkConfig cfg;
  const Pose o = at(0, 0, 0, {1, 0, 0});
  const double p1 = friis_rx_power_dbm(cfg, o, at(1, 0, 0, {1, 0, 0}));
  const double p2 = friis_rx_power_dbm(cfg, o, at(2, 0, 0, {1, 0, 0}));
  CHECK(p1 - p2 == doctest::Approx(20.0 * std::log10(2.0)));
  cfg.tx_power_dbm = 8.0;
  CHECK(friis_rx_power_dbm(cfg, o, at(1, 0, 0, {1, 0, 0})) - p1 == doctest::Approx(8.0));
  CHECK_THROWS_AS(friis_rx_power_dbm(cfg, o, o), ChannelError);
}

TEST_CASE("friis is strictly decreasing in distance") {
  RadioLinkConfig cfg;
  const Pose o = at(0, 0, 0, {1, 0, 0});
  double prev = std::numeric_limits<double>::infinity();
  for (double d = 0.1; d < 50.0; d *= 1.3) {
    const double p = friis_rx_power_dbm(cfg, o, at(d, 0, 0, {1, 0, 0}));
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("snr against the thermal floor") {
  CHECK(snr_db(-40.0, 0.0, 1e6) == doctest::Approx(74.0));
  CHECK(snr_db(-40.0, 3.0, 1e6) == doctest::Approx(71.0));
  CHECK(snr_db(-40.0, 0.0, 1e7) == doctest::Approx(64.0));
  CHECK_THROWS_AS(snr_db(-40.0, 0.0, 0.0), ChannelError);
}

TEST_CASE("q function agrees with numerical integration") {
  for (double x : {0.0, 0.5, 1.0, 2.0, 3.0, 4.5, 6.0}) {
    CHECK(q_function(x) == doctest::Approx(tail_simpson(x)).epsilon(1e-8));
  }
}

TEST_CASE("gfsk ber limits and reference points") {
  CHECK(gfsk_ber(kNegInfDb, PhyRate::k1M) == 0.5);
  CHECK(gfsk_ber(-200.0, PhyRate::k1M) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(gfsk_ber(18.0, PhyRate::k1M) < 1e-6);
  for (double snr : {0.0, 4.0, 8.0, 12.0}) {
    const double g = std::pow(10.0, snr / 10.0);
    CHECK(gfsk_ber(snr, PhyRate::k1M) == doctest::Approx(tail_simpson(std::sqrt(2.0 * g * 0.68))).epsilon(1e-7));
  }
}

TEST_CASE("2M PHY is the 1M curve shifted right") {
  for (double snr = -5.0; snr <= 20.0; snr += 0.5) {
    CHECK(gfsk_ber(snr + kGfsk2MShiftDb, PhyRate::k2M) == doctest::Approx(gfsk_ber(snr, PhyRate::k1M)));
  }
}

TEST_CASE("ber curves are non-increasing in snr") {
  double pg = 1.0, po = 1.0;
  for (double snr = -20.0; snr <= 25.0; snr += 0.25) {
    const double g = gfsk_ber(snr, PhyRate::k1M);
    const double o = ook_ber(snr);
    CHECK(g <= pg);
    CHECK(o <= po);
    CHECK(g >= 0.0);
    CHECK(g <= 0.5);
    pg = g;
    po = o;
  }
  CHECK(ook_ber(kNegInfDb) == 0.5);
}

TEST_CASE("lambertian on-axis gain") {
  OpticalLinkConfig cfg;
  CHECK(lambertian_order(60.0) == doctest::Approx(1.0));
  const double h = owc_channel_gain(cfg, at(0, 0, 1, {0, 0, -1}), at(0, 0, 0, {0, 0, 1}));
  CHECK(h == doctest::Approx(2.0 * 1e-4 / (2.0 * std::numbers::pi)).epsilon(1e-12));
  CHECK(h == doctest::Approx(3.183e-5).epsilon(1e-3));
  const double h2 = owc_channel_gain(cfg, at(0, 0, 2, {0, 0, -1}), at(0, 0, 0, {0, 0, 1}));
  CHECK(h / h2 == doctest::Approx(4.0));
}

TEST_CASE("lambertian off-axis gain follows the cosine law") {
  OpticalLinkConfig cfg;
  // Receiver 30 degrees off the LED axis, facing the LED.
  const double th = 30.0 * std::numbers::pi / 180.0;
  const Vec3 rx{std::sin(th), 0.0, 1.0 - std::cos(th)};
  const Vec3 led{0, 0, 1};
  const double h = owc_channel_gain(cfg, Pose(led, {0, 0, -1}), Pose(rx, led - rx));
  CHECK(h == doctest::Approx(2.0 * 1e-4 / (2.0 * std::numbers::pi) * std::cos(th)).epsilon(1e-9));
}

TEST_CASE("field of view cutoff") {
  OpticalLinkConfig cfg;
  cfg.pd_fov_deg = 20.0;
  const double th = 30.0 * std::numbers::pi / 180.0;
  // Receiver tilted away from the LED by 30 degrees.
  const Vec3 facing{std::sin(th), 0.0, std::cos(th)};
  CHECK(owc_channel_gain(cfg, at(0, 0, 1, {0, 0, -1}), Pose({0, 0, 0}, facing)) == 0.0);
  // Receiver behind the LED.
  CHECK(owc_channel_gain(cfg, at(0, 0, 1, {0, 0, 1}), at(0, 0, 0, {0, 0, 1})) == 0.0);
  CHECK_THROWS_AS(owc_channel_gain(cfg, at(0, 0, 0, {0, 0, 1}), at(0, 0, 0, {0, 0, 1})), ChannelError);
}

TEST_CASE("optical snr") {
  OpticalLinkConfig cfg;
  CHECK(owc_snr_db(cfg, 0.0) == kNegInfDb);
  const double h = 3.0e-5;
  const double s1 = owc_snr_db(cfg, h);
  cfg.tx_optical_power_w *= 2.0;
  CHECK(owc_snr_db(cfg, h) - s1 == doctest::Approx(20.0 * std::log10(2.0)));
  // Oracle from the receiver constants.
  const double q = 1.602176634e-19, k = 1.380649e-23;
  const double sig = 0.54 * 1.0 * h;
  const double var = 2 * q * 1e-5 * 1e6 + 4 * k * 300 * 1e6 / 1e4;
  CHECK(s1 == doctest::Approx(10.0 * std::log10(sig * sig / var)).epsilon(1e-9));
  CHECK(std::isfinite(s1));
  CHECK(s1 > 0.0);
  CHECK_THROWS_AS(owc_snr_db(cfg, -1.0), ChannelError);
}

TEST_CASE("packet success") {
  CHECK(packet_success(0.0, 4096) == 1.0);
  CHECK(packet_success(0.3, 0) == 1.0);
  double prod = 1.0;
  for (int i = 0; i < 4096; ++i) prod *= 0.999;
  CHECK(packet_success(1e-3, 4096) == doctest::Approx(prod).epsilon(1e-10));
  CHECK(packet_success(1e-3, 4096) == doctest::Approx(0.01657).epsilon(1e-3));
  CHECK_THROWS_AS(packet_success(-0.1, 8), ChannelError);
  CHECK_THROWS_AS(packet_success(0.6, 8), ChannelError);
  double prev = 1.0;
  for (std::uint64_t bits = 1; bits < 100000; bits *= 3) {
    const double p = packet_success(1e-4, bits);
    CHECK(p <= prev);
    prev = p;
  }
}

TEST_CASE("pose rejects a zero facing vector") {
  CHECK_THROWS_AS(Pose({0, 0, 0}, {0, 0, 0}), ChannelError);
  const Pose p({1, 2, 3}, {0, 0, 5});
  CHECK(p.facing().z == doctest::Approx(1.0));
}

TEST_CASE("linear mover oscillates between endpoints") {
  LinearWaypointMover m({0, 0, 0}, {2, 0, 0}, 100.0, {0, 0, 5});
  CHECK(m.pose_at(0.0).position().x == doctest::Approx(0.0));
  CHECK(m.pose_at(50.0).position().x == doctest::Approx(2.0));
  CHECK(m.pose_at(100.0).position().x == doctest::Approx(0.0));
  CHECK(m.pose_at(25.0).position().x == doctest::Approx(1.0));
  CHECK(m.pose_at(125.0).position().x == doctest::Approx(1.0));
  const auto p = m.pose_at(25.0);
  const Vec3 toward = Vec3{0, 0, 5} - p.position();
  CHECK(p.facing().dot(toward) / toward.norm() == doctest::Approx(1.0));
}
