#include "riot/energy/models.h"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <vector>

#include "riot/energy/buffer.h"

namespace riot::energy {

double LinearCurrentModel::evaluate(const OperatingPoint& op) const {
  const double i = base_ma + per_dbm * op.tx_power_dbm + per_kbps * op.baud_kbps + per_byte * op.packet_bytes;
  return std::max(0.0, i);
}

std::string tx_power_suffix(double tx_power_dbm) {
  char buf[32];
  if (tx_power_dbm > 0) std::snprintf(buf, sizeof buf, "@+%gdBm", tx_power_dbm);
  else std::snprintf(buf, sizeof buf, "@%gdBm", tx_power_dbm == 0 ? 0.0 : tx_power_dbm);
  return buf;
}

LinearCurrentModel fit_tx_power_model(const StateCurrentTable& table, const std::string& device,
                                      const std::string& state, PowerProfile profile) {
  const std::string prefix = state + "@";
  std::vector<std::pair<double, double>> pts;
  for (const auto& [k, e] : table.entries()) {
    if (k.device != device || k.profile != profile) continue;
    if (k.state.compare(0, prefix.size(), prefix) != 0) continue;
    const std::string rest = k.state.substr(prefix.size());
    if (rest.size() < 4 || rest.compare(rest.size() - 3, 3, "dBm") != 0) continue;
    pts.emplace_back(std::stod(rest.substr(0, rest.size() - 3)), e.current_ma);
  }
  if (pts.size() < 2) throw CalibrationError("need two or more tx-power rows to fit " + device + "/" + state);
  double mx = 0, my = 0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= pts.size();
  my /= pts.size();
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw CalibrationError("tx-power rows for " + device + "/" + state + " share one power level");
  LinearCurrentModel m;
  m.per_dbm = sxy / sxx;
  m.base_ma = my - m.per_dbm * mx;
  return m;
}

DeviceEnergyModel DeviceEnergyModel::constant(const StateCurrentTable& table, std::string device) {
  return DeviceEnergyModel(Constant{&table, std::move(device)});
}

DeviceEnergyModel DeviceEnergyModel::linear(std::map<std::string, LinearCurrentModel> per_state) {
  return DeviceEnergyModel(std::move(per_state));
}

double DeviceEnergyModel::current_ma(const std::string& state, const OperatingPoint& op) const {
  if (const auto* c = std::get_if<Constant>(&impl_)) {
    if (const auto* e = c->table->find(c->device, state + tx_power_suffix(op.tx_power_dbm), op.profile)) {
      return e->current_ma;
    }
    return c->table->at(c->device, state, op.profile).current_ma;
  }
  const auto& lin = std::get<Linear>(impl_);
  const auto it = lin.find(state);
  if (it == lin.end()) throw CalibrationError("linear model has no state '" + state + "'");
  return it->second.evaluate(op);
}

double device_current(const DeviceEnergyModel& model, const std::string& state, double tx_power_dbm,
                      double baud_kbps, double packet_bytes, PowerProfile profile) {
  return model.current_ma(state, OperatingPoint{tx_power_dbm, baud_kbps, packet_bytes, profile});
}

std::string_view to_string(PeripheralKind k) {
  switch (k) {
    case PeripheralKind::SensorInit: return "sensor_init";
    case PeripheralKind::Sense: return "sense";
    case PeripheralKind::EinkRefresh: return "eink_refresh";
    case PeripheralKind::Localize: return "localize";
  }
  return "?";
}

NodeCurrents node_currents(const StateCurrentTable& table, PowerProfile profile) {
  NodeCurrents c;
  c.core_awake = table.at("core", "awake", profile).current_ma;
  c.core_deep_sleep = table.at("core", "deep_sleep", profile).current_ma;
  using link::BleState;
  using link::OwcState;
  for (OwcState s : {OwcState::OFF, OwcState::SLEEP, OwcState::IDLE, OwcState::TX, OwcState::RX, OwcState::TX_RX}) {
    std::string name(link::to_string(s));
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::tolower(ch); });
    c.owc[static_cast<std::size_t>(s)] = table.at("owc", name, profile).current_ma;
  }
  for (BleState s : {BleState::OFF, BleState::IDLE, BleState::TX_BUSY, BleState::RX_BUSY}) {
    std::string name(link::to_string(s));
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::tolower(ch); });
    c.ble[static_cast<std::size_t>(s)] = table.at("ble", name, profile).current_ma;
  }
  for (PeripheralKind k : {PeripheralKind::SensorInit, PeripheralKind::Sense, PeripheralKind::EinkRefresh,
                           PeripheralKind::Localize}) {
    const auto& e = table.at("periph", std::string(to_string(k)), profile);
    if (!e.duration_ms) throw CalibrationError("peripheral " + std::string(to_string(k)) + " needs a duration");
    c.periph[static_cast<std::size_t>(k)] = {k, sim::SimDuration::from_millis(*e.duration_ms), e.current_ma};
  }
  c.advertising = table.at("periph", "advertising", profile).current_ma;
  return c;
}

double vlc_uplink_energy(const StateCurrentTable& table, PowerProfile profile, std::uint32_t chunks,
                         double voltage, const link::OwcChunkedPhy& phy) {
  if (chunks == 0) return 0.0;
  const double chunk_ma = table.at("vlc", "uplink_chunk", profile).current_ma;
  const double gap_ma = table.at("vlc", "inter_chunk", profile).current_ma;
  return phase_energy(chunk_ma, chunks * phy.per_chunk_airtime.to_millis(), voltage) +
         phase_energy(gap_ma, (chunks - 1) * phy.inter_chunk_delay.to_millis(), voltage);
}

double predict_action_energy(const ActionEnergyConfig& cfg, const Action& action, sim::SimDuration horizon) {
  const NodeCurrents& c = cfg.currents;
  const double h_s = horizon.to_seconds();
  if (!(h_s > 0.0)) throw EnergyError("prediction horizon must be > 0");
  // mA * s
  double charge = 0.0;
  if (action.mode == OperatingMode::Sleep) {
    charge = c.core_deep_sleep * h_s;
    return charge * 1e-3 * cfg.voltage;
  }
  using link::BleState;
  using link::OwcState;
  const bool owc = action.modality == Modality::OWC;
  const double awake_s = std::clamp(cfg.awake_share, 0.0, 1.0) * h_s;
  const double idle_ma = c.core_awake + (owc ? c.owc_ma(OwcState::IDLE) + c.ble_ma(BleState::OFF)
                                             : c.ble_ma(BleState::IDLE) + c.owc_ma(OwcState::SLEEP));
  charge += idle_ma * awake_s + c.core_deep_sleep * (h_s - awake_s);

  const double rate = action.mode == OperatingMode::Performance ? cfg.performance_rate_bps : cfg.conservation_rate_bps;
  const double tx_window_s = std::min(std::clamp(cfg.tx_share, 0.0, 1.0) * h_s, awake_s);
  if (cfg.packet_bytes > 0 && rate > 0.0 && tx_window_s > 0.0) {
    sim::SimDuration per_packet{};
    for (const auto& b : link::plan_bursts(action.modality, cfg.packet_bytes, cfg.link)) per_packet += b.length;
    const double packets = rate * tx_window_s / (8.0 * cfg.packet_bytes);
    const double airtime_s = std::min(packets * per_packet.to_seconds(), tx_window_s);
    const double extra_ma = owc ? c.owc_ma(OwcState::TX) - c.owc_ma(OwcState::IDLE)
                                : c.ble_ma(BleState::TX_BUSY) - c.ble_ma(BleState::IDLE);
    charge += std::max(0.0, extra_ma) * airtime_s;
  }

  const double period_s = cfg.peripheral_period.to_seconds();
  if (period_s > 0.0) {
    const double ops = awake_s / period_s;
    auto add = [&](PeripheralKind k) {
      const auto& op = c.op(k);
      charge += ops * op.current_ma * op.duration.to_seconds();
    };
    add(PeripheralKind::Sense);
    if (action.mode == OperatingMode::Performance) {
      add(PeripheralKind::EinkRefresh);
      add(PeripheralKind::Localize);
    }
  }
  return charge * 1e-3 * cfg.voltage;
}

}  // namespace riot::energy
