#ifndef RIOT_HARNESS_SCENARIO_H
#define RIOT_HARNESS_SCENARIO_H

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "riot/channel/channel.h"
#include "riot/energy/buffer.h"
#include "riot/harness/ini.h"
#include "riot/link/mac.h"
#include "riot/optimizer/utility.h"
#include "riot/types.h"

namespace riot::harness {

enum class OptimizerKind : std::uint8_t { Euno, Etno, EtnoOwc };

std::string_view to_string(OptimizerKind k);
/// "euno", "etno", "etno-owc".
OptimizerKind parse_optimizer(const std::string& s);

struct Scenario {
  std::string name = "scenario";
  // [run]
  double duration_s = 1025.0;
  double init_s = 5.0;
  std::uint64_t seed = 1;
  OptimizerKind optimizer = OptimizerKind::Etno;
  double trace_period_s = 1.0;
  std::vector<double> sweep_rates_kbps;

  // [network]
  std::uint32_t node_count = 3;
  double slot_s = 25.0;
  std::uint32_t packet_bytes = 512;
  double target_rate_kbps = 300.0;
  double conservation_rate_kbps = 60.0;
  bool inter_tx_sleep = false;
  std::uint32_t queue_capacity = 16;

  // [energy]
  double capacity_j = 8.0;
  double initial_fraction = 1.0;
  double voltage = 3.3;
  std::vector<energy::HarvestProfile::Segment> harvest{{0.0, 0.0042}};  // W from t = 0
  double harvest_period_s = 1.0;
  PowerProfile profile = PowerProfile::Normal;
  std::string calibration;  // overrides on top of the shipped table
  double peripheral_period_s = 10.0;

  // [geometry]
  double distance_m = 1.0;
  double incidence_deg = 30.0;
  double mobility_amplitude_m = 0.0;  // 0 = static
  double mobility_period_s = 200.0;

  // [radio], [optical]
  channel::RadioLinkConfig radio;
  channel::OpticalLinkConfig optical;
  std::string owc_phy = "ook";  // ook | chunked
  double owc_bit_rate_bps = 500e3;
  double owc_preamble_us = 20.0;
  link::BleTimingConfig ble;

  // [euno], [etno]
  opt::UtilityWeights weights;
  std::string interaction = "constant:0.7";
  opt::EtnoConfig etno;

  // [gateway]
  std::string gateway_idle_state = "idle_usb_eth";
  std::string gateway_tx_state = "tx_usb_eth";
  double gateway_voltage = 5.0;

  /// Throws ConfigError naming the violated invariant.
  void validate() const;

  link::OwcPhy owc_phy_config() const;
  double target_rate_bps() const { return target_rate_kbps * 1e3; }
  /// min(conservation, target) in bit/s.
  double conservation_rate_bps() const;
};

/// Applies one `section.key = value` assignment; rejects unknown keys.
void apply_setting(Scenario& s, const std::string& section, const std::string& key, const std::string& value);
/// "section.key=value".
void apply_override(Scenario& s, const std::string& assignment);

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(std::istream& in, const std::string& source);

/// Every key with its resolved value, in a fixed order.
std::vector<std::pair<std::string, std::string>> scenario_settings(const Scenario& s);
/// INI text that reproduces `s` exactly when parsed.
std::string format_scenario(const Scenario& s);

}  // namespace riot::harness

#endif  // RIOT_HARNESS_SCENARIO_H
