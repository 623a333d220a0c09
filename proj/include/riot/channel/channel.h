#ifndef RIOT_CHANNEL_CHANNEL_H
#define RIOT_CHANNEL_CHANNEL_H

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace riot::channel {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double k) const { return {x * k, y * k, z * k}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const;
  bool operator==(const Vec3&) const = default;
};

class ChannelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Position (m) and unit device normal.
class Pose {
 public:
  /// Normalizes `facing`; throws if it is the zero vector.
  Pose(Vec3 position, Vec3 facing);

  const Vec3& position() const { return position_; }
  const Vec3& facing() const { return facing_; }

 private:
  Vec3 position_;
  Vec3 facing_;
};

double distance(const Pose& a, const Pose& b);

enum class PhyRate : std::uint8_t { k1M, k2M };

double phy_rate_bps(PhyRate rate);

struct RadioLinkConfig {
  double tx_power_dbm = 0.0;
  double frequency_hz = 2.4e9;
  double tx_gain_dbi = 0.0;
  double rx_gain_dbi = 0.0;
  double noise_figure_db = 7.0;
  double bandwidth_hz = 1e6;
  PhyRate phy_rate = PhyRate::k2M;

  void validate() const;
};

struct OpticalLinkConfig {
  double tx_optical_power_w = 1.0;
  double led_semi_angle_deg = 60.0;
  double pd_area_m2 = 1e-4;
  double pd_fov_deg = 60.0;
  double responsivity_a_per_w = 0.54;
  double filter_gain = 1.0;
  double concentrator_gain = 1.0;
  // Noise: ambient-induced shot noise 2 q I_bg B plus thermal 4 k T B / R_f.
  double background_current_a = 1e-5;
  double temperature_k = 300.0;
  double feedback_resistance_ohm = 1e4;
  double noise_bandwidth_hz = 1e6;

  void validate() const;
};

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kThermalFloorDbmPerHz = -174.0;
/// Effective distance for GFSK with BT = 0.5, h = 0.5.
inline constexpr double kGfskDefaultDelta = 0.68;
/// Required-SNR shift applied to the 2 Mbit/s PHY.
inline constexpr double kGfsk2MShiftDb = 3.0;
inline constexpr double kNegInfDb = -std::numeric_limits<double>::infinity();

double friis_rx_power_dbm(const RadioLinkConfig& cfg, const Pose& tx, const Pose& rx);
double snr_db(double rx_dbm, double noise_figure_db, double bandwidth_hz);

/// Gaussian tail probability Q(x).
double q_function(double x);

/// BER = Q(sqrt(2 * gamma_b * delta)), gamma_b from SNR with the PHY shift.
double gfsk_ber(double snr_db, PhyRate rate, double delta = kGfskDefaultDelta);

double lambertian_order(double semi_angle_deg);
double owc_channel_gain(const OpticalLinkConfig& cfg, const Pose& tx, const Pose& rx);
/// Electrical SNR in dB; gain 0 yields -infinity.
double owc_snr_db(const OpticalLinkConfig& cfg, double gain);
/// OOK: BER = Q(sqrt(SNR)).
double ook_ber(double snr_db);

/// (1 - ber)^bits under independent bit errors.
double packet_success(double ber, std::uint64_t bits);

/**
 * Moves a pose back and forth along a straight segment. Orientation is kept
 * pointing at `look_at` so angles vary with position.
 */
class LinearWaypointMover {
 public:
  LinearWaypointMover(Vec3 from, Vec3 to, double period_s, Vec3 look_at);
  Pose pose_at(double t_s) const;

 private:
  Vec3 from_, to_;
  double period_s_;
  Vec3 look_at_;
};

}  // namespace riot::channel

#endif  // RIOT_CHANNEL_CHANNEL_H
