#include "riot/channel/channel.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace riot::channel {

namespace {

constexpr double kElectronCharge = 1.602176634e-19;
constexpr double kBoltzmann = 1.380649e-23;

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

}  // namespace

double Vec3::norm() const { return std::sqrt(dot(*this)); }

Pose::Pose(Vec3 position, Vec3 facing) : position_(position) {
  const double n = facing.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ChannelError("pose facing must be a nonzero vector");
  facing_ = facing * (1.0 / n);
}

double distance(const Pose& a, const Pose& b) { return (b.position() - a.position()).norm(); }

double phy_rate_bps(PhyRate rate) { return rate == PhyRate::k2M ? 2e6 : 1e6; }

void RadioLinkConfig::validate() const {
  if (!(bandwidth_hz > 0.0)) throw ChannelError("radio bandwidth must be > 0");
  if (!(frequency_hz > 0.0)) throw ChannelError("radio frequency must be > 0");
}

void OpticalLinkConfig::validate() const {
  if (!(led_semi_angle_deg > 0.0 && led_semi_angle_deg < 90.0))
    throw ChannelError("LED semi-angle must lie in (0, 90) degrees");
  if (!(pd_fov_deg > 0.0 && pd_fov_deg <= 90.0))
    throw ChannelError("photodetector FOV must lie in (0, 90] degrees");
  if (!(pd_area_m2 > 0.0)) throw ChannelError("photodetector area must be > 0");
  if (!(noise_bandwidth_hz > 0.0)) throw ChannelError("optical noise bandwidth must be > 0");
  if (!(feedback_resistance_ohm > 0.0)) throw ChannelError("feedback resistance must be > 0");
}

double friis_rx_power_dbm(const RadioLinkConfig& cfg, const Pose& tx, const Pose& rx) {
  const double d = distance(tx, rx);
  if (!(d > 0.0)) throw ChannelError("Friis model undefined at zero distance");
  const double path_loss_db =
      20.0 * std::log10(4.0 * std::numbers::pi * d * cfg.frequency_hz / kSpeedOfLight);
  return cfg.tx_power_dbm + cfg.tx_gain_dbi + cfg.rx_gain_dbi - path_loss_db;
}

double snr_db(double rx_dbm, double noise_figure_db, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) throw ChannelError("bandwidth must be > 0");
  const double noise_dbm = kThermalFloorDbmPerHz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
  return rx_dbm - noise_dbm;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double gfsk_ber(double snr, PhyRate rate, double delta) {
  const double gamma_db = snr - (rate == PhyRate::k2M ? kGfsk2MShiftDb : 0.0);
  if (gamma_db == kNegInfDb) return 0.5;
  const double gamma = std::pow(10.0, gamma_db / 10.0);
  // Q(sqrt(2 g d)) == erfc(sqrt(g d)) / 2
  return 0.5 * std::erfc(std::sqrt(gamma * delta));
}

double lambertian_order(double semi_angle_deg) {
  return -std::numbers::ln2 / std::log(std::cos(deg2rad(semi_angle_deg)));
}

double owc_channel_gain(const OpticalLinkConfig& cfg, const Pose& tx, const Pose& rx) {
  const Vec3 v = rx.position() - tx.position();
  const double d = v.norm();
  if (!(d > 0.0)) throw ChannelError("optical gain undefined at zero distance");
  const Vec3 u = v * (1.0 / d);
  const double cos_emit = tx.facing().dot(u);
  const double cos_inc = -rx.facing().dot(u);
  if (cos_emit <= 0.0 || cos_inc <= 0.0) return 0.0;
  const double incidence = std::acos(std::min(1.0, cos_inc));
  if (incidence >= deg2rad(cfg.pd_fov_deg)) return 0.0;
  const double m = lambertian_order(cfg.led_semi_angle_deg);
  return (m + 1.0) * cfg.pd_area_m2 / (2.0 * std::numbers::pi * d * d) * std::pow(cos_emit, m) *
         cfg.filter_gain * cfg.concentrator_gain * cos_inc;
}

double owc_snr_db(const OpticalLinkConfig& cfg, double gain) {
  if (gain < 0.0) throw ChannelError("optical gain must be >= 0");
  if (gain == 0.0) return kNegInfDb;
  const double signal = cfg.responsivity_a_per_w * cfg.tx_optical_power_w * gain;
  const double shot = 2.0 * kElectronCharge * cfg.background_current_a * cfg.noise_bandwidth_hz;
  const double thermal =
      4.0 * kBoltzmann * cfg.temperature_k * cfg.noise_bandwidth_hz / cfg.feedback_resistance_ohm;
  return 10.0 * std::log10(signal * signal / (shot + thermal));
}

double ook_ber(double snr) {
  if (snr == kNegInfDb) return 0.5;
  const double lin = std::pow(10.0, snr / 10.0);
  return q_function(std::sqrt(lin));
}

double packet_success(double ber, std::uint64_t bits) {
  if (!(ber >= 0.0 && ber <= 0.5)) throw ChannelError("ber must lie in [0, 0.5]");
  if (bits == 0 || ber == 0.0) return 1.0;
  return std::exp(static_cast<double>(bits) * std::log1p(-ber));
}

LinearWaypointMover::LinearWaypointMover(Vec3 from, Vec3 to, double period_s, Vec3 look_at)
    : from_(from), to_(to), period_s_(period_s), look_at_(look_at) {
  if (!(period_s > 0.0)) throw ChannelError("waypoint period must be > 0");
}

Pose LinearWaypointMover::pose_at(double t_s) const {
  // Triangle wave: from -> to over half a period, back over the other half.
  const double phase = std::fmod(t_s, period_s_) / period_s_;
  const double s = phase < 0.5 ? 2.0 * phase : 2.0 * (1.0 - phase);
  const Vec3 p = from_ + (to_ - from_) * s;
  return Pose(p, look_at_ - p);
}

}  // namespace riot::channel
