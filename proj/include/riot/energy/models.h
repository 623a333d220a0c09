#ifndef RIOT_ENERGY_MODELS_H
#define RIOT_ENERGY_MODELS_H

#include <array>
#include <map>
#include <string>
#include <variant>

#include "riot/energy/calibration.h"
#include "riot/link/fsm.h"
#include "riot/link/mac.h"
#include "riot/sim/time.h"
#include "riot/types.h"

namespace riot::energy {

/// Parameters a linear model may depend on.
struct OperatingPoint {
  double tx_power_dbm = 0.0;
  double baud_kbps = 0.0;
  double packet_bytes = 0.0;
  PowerProfile profile = PowerProfile::Normal;
};

struct LinearCurrentModel {
  double base_ma = 0.0;
  double per_dbm = 0.0;
  double per_kbps = 0.0;
  double per_byte = 0.0;

  /// base + sum(slope * parameter), floored at 0.
  double evaluate(const OperatingPoint& op) const;
};

/**
 * Least-squares fit of current against tx power over the rows
 * `<state>@<P>dBm` of one device/profile. Needs at least two rows at
 * distinct powers.
 */
LinearCurrentModel fit_tx_power_model(const StateCurrentTable& table, const std::string& device,
                                      const std::string& state, PowerProfile profile);

/// "@0dBm", "@+8dBm", "@-4dBm".
std::string tx_power_suffix(double tx_power_dbm);

/**
 * Per-device current model. The constant form looks up the table entry for
 * the state, preferring the tx-power-qualified row when one exists; the
 * linear form evaluates one LinearCurrentModel per state.
 */
class DeviceEnergyModel {
 public:
  static DeviceEnergyModel constant(const StateCurrentTable& table, std::string device);
  static DeviceEnergyModel linear(std::map<std::string, LinearCurrentModel> per_state);

  /// Throws CalibrationError for an unknown state.
  double current_ma(const std::string& state, const OperatingPoint& op) const;

 private:
  struct Constant {
    const StateCurrentTable* table;
    std::string device;
  };
  using Linear = std::map<std::string, LinearCurrentModel>;
  explicit DeviceEnergyModel(std::variant<Constant, Linear> impl) : impl_(std::move(impl)) {}
  std::variant<Constant, Linear> impl_;
};

double device_current(const DeviceEnergyModel& model, const std::string& state, double tx_power_dbm,
                      double baud_kbps, double packet_bytes, PowerProfile profile);

enum class PeripheralKind : std::uint8_t { SensorInit, Sense, EinkRefresh, Localize };

std::string_view to_string(PeripheralKind k);

struct PeripheralOp {
  PeripheralKind kind;
  sim::SimDuration duration;
  double current_ma;  // increment over the awake baseline
};

/// Currents (mA) the node simulator draws, resolved for one power profile.
struct NodeCurrents {
  double core_awake = 0.0;
  double core_deep_sleep = 0.0;
  std::array<double, 6> owc{};  // indexed by OwcState
  std::array<double, 4> ble{};  // indexed by BleState
  std::array<PeripheralOp, 4> periph{};
  double advertising = 0.0;

  double owc_ma(link::OwcState s) const { return owc[static_cast<std::size_t>(s)]; }
  double ble_ma(link::BleState s) const { return ble[static_cast<std::size_t>(s)]; }
  const PeripheralOp& op(PeripheralKind k) const { return periph[static_cast<std::size_t>(k)]; }
};

NodeCurrents node_currents(const StateCurrentTable& table, PowerProfile profile);

/// Energy of one VLC uplink of `chunks` chunks with inter-chunk gaps, in joules.
double vlc_uplink_energy(const StateCurrentTable& table, PowerProfile profile, std::uint32_t chunks = 6,
                         double voltage = 3.3, const link::OwcChunkedPhy& phy = {});

/// Inputs for the per-action energy forecast.
struct ActionEnergyConfig {
  NodeCurrents currents;
  double voltage = 3.3;
  std::uint32_t packet_bytes = 512;
  double performance_rate_bps = 300e3;
  double conservation_rate_bps = 60e3;
  /// Fraction of the horizon during which the node holds the poll token.
  double tx_share = 1.0;
  /// Fraction of the horizon spent awake (below 1 with inter-transmission sleep).
  double awake_share = 1.0;
  sim::SimDuration peripheral_period = sim::SimDuration::seconds(10);
  link::LinkState link;
};

/// Forecast of energy drawn by executing `action` for `horizon`, in joules.
double predict_action_energy(const ActionEnergyConfig& cfg, const Action& action, sim::SimDuration horizon);

}  // namespace riot::energy

#endif  // RIOT_ENERGY_MODELS_H
