#include "riot/harness/scenario.h"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "riot/harness/interaction.h"

namespace riot::harness {

std::string_view to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::Euno: return "euno";
    case OptimizerKind::Etno: return "etno";
    case OptimizerKind::EtnoOwc: return "etno-owc";
  }
  return "?";
}

OptimizerKind parse_optimizer(const std::string& s) {
  if (s == "euno") return OptimizerKind::Euno;
  if (s == "etno") return OptimizerKind::Etno;
  if (s == "etno-owc") return OptimizerKind::EtnoOwc;
  throw ConfigError("unknown optimizer '" + s + "' (expected euno, etno or etno-owc)");
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::to_chars_result r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double to_double(const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || errno != 0 || end != v.c_str() + v.size() || !std::isfinite(d))
    throw ConfigError("expected a number, got '" + v + "'");
  return d;
}

std::uint64_t to_uint(const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("expected a nonnegative integer, got '" + v + "'");
  errno = 0;
  const auto u = std::strtoull(v.c_str(), nullptr, 10);
  if (errno != 0) throw ConfigError("integer out of range: '" + v + "'");
  return u;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError("expected a boolean, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string() : cur.substr(b, e - b + 1));
  }
  return out;
}

struct Field {
  const char* section;
  const char* key;
  std::function<void(Scenario&, const std::string&)> set;
  std::function<std::string(const Scenario&)> get;
};

template <typename T>
Field num(const char* sec, const char* key, T Scenario::*member) {
  return {sec, key, [member](Scenario& s, const std::string& v) { s.*member = static_cast<T>(to_double(v)); },
          [member](const Scenario& s) { return fmt_double(static_cast<double>(s.*member)); }};
}

template <typename T>
Field uint(const char* sec, const char* key, T Scenario::*member) {
  return {sec, key,
          [member](Scenario& s, const std::string& v) {
            const auto u = to_uint(v);
            if (u > std::numeric_limits<T>::max()) throw ConfigError("integer out of range: '" + v + "'");
            s.*member = static_cast<T>(u);
          },
          [member](const Scenario& s) { return std::to_string(s.*member); }};
}

// Accessor-based numeric field for nested structs.
Field numref(const char* sec, const char* key, std::function<double&(Scenario&)> ref) {
  return {sec, key, [ref](Scenario& s, const std::string& v) { ref(s) = to_double(v); },
          [ref](const Scenario& s) { return fmt_double(ref(const_cast<Scenario&>(s))); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = [] {
    std::vector<Field> v;
    v.push_back({"run", "name", [](Scenario& s, const std::string& x) { s.name = x; },
                 [](const Scenario& s) { return s.name; }});
    v.push_back(num("run", "duration_s", &Scenario::duration_s));
    v.push_back(num("run", "init_s", &Scenario::init_s));
    v.push_back(uint("run", "seed", &Scenario::seed));
    v.push_back({"run", "optimizer", [](Scenario& s, const std::string& x) { s.optimizer = parse_optimizer(x); },
                 [](const Scenario& s) { return std::string(to_string(s.optimizer)); }});
    v.push_back(num("run", "trace_period_s", &Scenario::trace_period_s));
    v.push_back({"run", "sweep_rates_kbps",
                 [](Scenario& s, const std::string& x) {
                   s.sweep_rates_kbps.clear();
                   if (x.empty()) return;
                   for (const auto& r : split(x, ',')) s.sweep_rates_kbps.push_back(to_double(r));
                 },
                 [](const Scenario& s) {
                   std::string out;
                   for (std::size_t i = 0; i < s.sweep_rates_kbps.size(); ++i) {
                     if (i) out += ",";
                     out += fmt_double(s.sweep_rates_kbps[i]);
                   }
                   return out;
                 }});

    v.push_back(uint("network", "node_count", &Scenario::node_count));
    v.push_back(num("network", "slot_s", &Scenario::slot_s));
    v.push_back(uint("network", "packet_bytes", &Scenario::packet_bytes));
    v.push_back(num("network", "target_rate_kbps", &Scenario::target_rate_kbps));
    v.push_back(num("network", "conservation_rate_kbps", &Scenario::conservation_rate_kbps));
    v.push_back({"network", "inter_tx_sleep", [](Scenario& s, const std::string& x) { s.inter_tx_sleep = to_bool(x); },
                 [](const Scenario& s) { return std::string(s.inter_tx_sleep ? "true" : "false"); }});
    v.push_back(uint("network", "queue_capacity", &Scenario::queue_capacity));

    v.push_back(num("energy", "capacity_j", &Scenario::capacity_j));
    v.push_back(num("energy", "initial_fraction", &Scenario::initial_fraction));
    v.push_back(num("energy", "voltage", &Scenario::voltage));
    v.push_back({"energy", "harvest_profile",
                 [](Scenario& s, const std::string& x) {
                   s.harvest.clear();
                   for (const auto& seg : split(x, ',')) {
                     const auto colon = seg.find(':');
                     if (colon == std::string::npos) {
                       s.harvest.push_back({0.0, to_double(seg)});
                     } else {
                       s.harvest.push_back({to_double(seg.substr(0, colon)), to_double(seg.substr(colon + 1))});
                     }
                   }
                 },
                 [](const Scenario& s) {
                   std::string out;
                   for (std::size_t i = 0; i < s.harvest.size(); ++i) {
                     if (i) out += ",";
                     out += fmt_double(s.harvest[i].start_s) + ":" + fmt_double(s.harvest[i].power_w);
                   }
                   return out;
                 }});
    v.push_back(num("energy", "harvest_period_s", &Scenario::harvest_period_s));
    v.push_back({"energy", "profile",
                 [](Scenario& s, const std::string& x) {
                   const auto p = parse_profile(x);
                   if (!p || *p == PowerProfile::VeryLowPower)
                     throw ConfigError("profile must be 'normal' or 'low-power', got '" + x + "'");
                   s.profile = *p;
                 },
                 [](const Scenario& s) { return std::string(to_string(s.profile)); }});
    v.push_back({"energy", "calibration", [](Scenario& s, const std::string& x) { s.calibration = x; },
                 [](const Scenario& s) { return s.calibration; }});
    v.push_back(num("energy", "peripheral_period_s", &Scenario::peripheral_period_s));

    v.push_back(num("geometry", "distance_m", &Scenario::distance_m));
    v.push_back(num("geometry", "incidence_deg", &Scenario::incidence_deg));
    v.push_back(num("geometry", "mobility_amplitude_m", &Scenario::mobility_amplitude_m));
    v.push_back(num("geometry", "mobility_period_s", &Scenario::mobility_period_s));

    v.push_back(numref("radio", "tx_power_dbm", [](Scenario& s) -> double& { return s.radio.tx_power_dbm; }));
    v.push_back(numref("radio", "frequency_hz", [](Scenario& s) -> double& { return s.radio.frequency_hz; }));
    v.push_back(numref("radio", "tx_gain_dbi", [](Scenario& s) -> double& { return s.radio.tx_gain_dbi; }));
    v.push_back(numref("radio", "rx_gain_dbi", [](Scenario& s) -> double& { return s.radio.rx_gain_dbi; }));
    v.push_back(numref("radio", "noise_figure_db", [](Scenario& s) -> double& { return s.radio.noise_figure_db; }));
    v.push_back(numref("radio", "bandwidth_hz", [](Scenario& s) -> double& { return s.radio.bandwidth_hz; }));
    v.push_back({"radio", "phy_rate",
                 [](Scenario& s, const std::string& x) {
                   if (x == "1M") s.radio.phy_rate = channel::PhyRate::k1M;
                   else if (x == "2M") s.radio.phy_rate = channel::PhyRate::k2M;
                   else throw ConfigError("phy_rate must be 1M or 2M, got '" + x + "'");
                 },
                 [](const Scenario& s) { return std::string(s.radio.phy_rate == channel::PhyRate::k1M ? "1M" : "2M"); }});
    v.push_back(numref("radio", "conn_interval_ms", [](Scenario& s) -> double& { return s.ble.conn_interval_ms; }));
    v.push_back(numref("radio", "conn_event_ms", [](Scenario& s) -> double& { return s.ble.conn_event_len_ms; }));
    v.push_back(numref("radio", "uplink_tx_ms", [](Scenario& s) -> double& { return s.ble.uplink_tx_len_ms; }));
    v.push_back(numref("radio", "downlink_rx_ms", [](Scenario& s) -> double& { return s.ble.downlink_rx_len_ms; }));
    v.push_back({"radio", "mtu",
                 [](Scenario& s, const std::string& x) { s.ble.mtu = static_cast<std::uint32_t>(to_uint(x)); },
                 [](const Scenario& s) { return std::to_string(s.ble.mtu); }});

    v.push_back(numref("optical", "tx_power_w", [](Scenario& s) -> double& { return s.optical.tx_optical_power_w; }));
    v.push_back(numref("optical", "led_semi_angle_deg", [](Scenario& s) -> double& { return s.optical.led_semi_angle_deg; }));
    v.push_back(numref("optical", "pd_area_m2", [](Scenario& s) -> double& { return s.optical.pd_area_m2; }));
    v.push_back(numref("optical", "pd_fov_deg", [](Scenario& s) -> double& { return s.optical.pd_fov_deg; }));
    v.push_back(numref("optical", "responsivity", [](Scenario& s) -> double& { return s.optical.responsivity_a_per_w; }));
    v.push_back(numref("optical", "filter_gain", [](Scenario& s) -> double& { return s.optical.filter_gain; }));
    v.push_back(numref("optical", "concentrator_gain", [](Scenario& s) -> double& { return s.optical.concentrator_gain; }));
    v.push_back(numref("optical", "background_current_a", [](Scenario& s) -> double& { return s.optical.background_current_a; }));
    v.push_back(numref("optical", "temperature_k", [](Scenario& s) -> double& { return s.optical.temperature_k; }));
    v.push_back(numref("optical", "feedback_resistance_ohm",
                       [](Scenario& s) -> double& { return s.optical.feedback_resistance_ohm; }));
    v.push_back(numref("optical", "noise_bandwidth_hz", [](Scenario& s) -> double& { return s.optical.noise_bandwidth_hz; }));
    v.push_back({"optical", "phy",
                 [](Scenario& s, const std::string& x) {
                   if (x != "ook" && x != "chunked") throw ConfigError("optical phy must be ook or chunked, got '" + x + "'");
                   s.owc_phy = x;
                 },
                 [](const Scenario& s) { return s.owc_phy; }});
    v.push_back(num("optical", "bit_rate_bps", &Scenario::owc_bit_rate_bps));
    v.push_back(num("optical", "preamble_us", &Scenario::owc_preamble_us));

    auto w = [](Scenario& s) -> opt::UtilityWeights& { return s.weights; };
    v.push_back(numref("euno", "p_M", [w](Scenario& s) -> double& { return w(s).p_M; }));
    v.push_back(numref("euno", "p_S", [w](Scenario& s) -> double& { return w(s).p_S; }));
    v.push_back(numref("euno", "p_L", [w](Scenario& s) -> double& { return w(s).p_L; }));
    v.push_back(numref("euno", "p_p", [w](Scenario& s) -> double& { return w(s).p_p; }));
    v.push_back(numref("euno", "p_t", [w](Scenario& s) -> double& { return w(s).p_t; }));
    v.push_back(numref("euno", "p_c", [w](Scenario& s) -> double& { return w(s).p_c; }));
    v.push_back(numref("euno", "p_e", [w](Scenario& s) -> double& { return w(s).p_e; }));
    v.push_back(numref("euno", "p_ch", [w](Scenario& s) -> double& { return w(s).p_ch; }));
    v.push_back(numref("euno", "alpha", [w](Scenario& s) -> double& { return w(s).alpha; }));
    v.push_back(numref("euno", "beta", [w](Scenario& s) -> double& { return w(s).beta; }));
    v.push_back(numref("euno", "theta_s", [w](Scenario& s) -> double& { return w(s).theta_s; }));
    v.push_back(numref("euno", "theta_l", [w](Scenario& s) -> double& { return w(s).theta_l; }));
    v.push_back(numref("euno", "f_c", [w](Scenario& s) -> double& { return w(s).f_c; }));
    v.push_back(numref("euno", "lambda", [w](Scenario& s) -> double& { return w(s).lambda; }));
    v.push_back(numref("euno", "k", [w](Scenario& s) -> double& { return w(s).k; }));
    v.push_back(numref("euno", "C", [w](Scenario& s) -> double& { return w(s).C; }));
    v.push_back(numref("euno", "dt_pr_s", [w](Scenario& s) -> double& { return w(s).dt_pr_s; }));
    v.push_back({"euno", "interaction",
                 [](Scenario& s, const std::string& x) {
                   parse_interaction(x);  // validates
                   s.interaction = x;
                 },
                 [](const Scenario& s) { return s.interaction; }});

    v.push_back(numref("etno", "sleep_threshold", [](Scenario& s) -> double& { return s.etno.sleep_threshold; }));
    v.push_back(numref("etno", "conservation_threshold",
                       [](Scenario& s) -> double& { return s.etno.conservation_threshold; }));

    v.push_back({"gateway", "idle_state", [](Scenario& s, const std::string& x) { s.gateway_idle_state = x; },
                 [](const Scenario& s) { return s.gateway_idle_state; }});
    v.push_back({"gateway", "tx_state", [](Scenario& s, const std::string& x) { s.gateway_tx_state = x; },
                 [](const Scenario& s) { return s.gateway_tx_state; }});
    v.push_back(num("gateway", "voltage", &Scenario::gateway_voltage));
    return v;
  }();
  return f;
}

}  // namespace

void apply_setting(Scenario& s, const std::string& section, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (section == f.section && key == f.key) {
      try {
        f.set(s, value);
      } catch (const ConfigError& e) {
        throw ConfigError(section + "." + key + ": " + e.what());
      }
      return;
    }
  }
  throw ConfigError("unknown key '" + (section.empty() ? key : section + "." + key) + "'");
}

void apply_override(Scenario& s, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("override must look like section.key=value, got '" + assignment + "'");
  apply_setting(s, assignment.substr(0, dot), assignment.substr(dot + 1, eq - dot - 1), assignment.substr(eq + 1));
}

Scenario parse_scenario(std::istream& in, const std::string& source) {
  Scenario s;
  for (const auto& e : parse_ini(in, source)) {
    try {
      apply_setting(s, e.section, e.key, e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(source + ":" + std::to_string(e.line) + ": " + err.what());
    }
  }
  try {
    s.validate();
  } catch (const ConfigError& err) {
    throw ConfigError(source + ": " + err.what());
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  return parse_scenario(in, path);
}

std::vector<std::pair<std::string, std::string>> scenario_settings(const Scenario& s) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(std::string(f.section) + "." + f.key, f.get(s));
  return out;
}

std::string format_scenario(const Scenario& s) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    if (section != f.section) {
      if (!section.empty()) out += "\n";
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += std::string(f.key) + " = " + f.get(s) + "\n";
  }
  return out;
}

double Scenario::conservation_rate_bps() const {
  return std::min(conservation_rate_kbps, target_rate_kbps) * 1e3;
}

link::OwcPhy Scenario::owc_phy_config() const {
  if (owc_phy == "chunked") return link::OwcChunkedPhy{};
  return link::OwcOokPhy{owc_bit_rate_bps, sim::SimDuration::from_seconds(owc_preamble_us * 1e-6)};
}

void Scenario::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw ConfigError(std::string(what) + " must be > 0");
  };
  positive(duration_s, "run.duration_s");
  if (!(init_s >= 0.0)) throw ConfigError("run.init_s must be >= 0");
  positive(trace_period_s, "run.trace_period_s");
  for (double r : sweep_rates_kbps) positive(r, "run.sweep_rates_kbps entries");
  if (node_count == 0) throw ConfigError("network.node_count must be >= 1");
  positive(slot_s, "network.slot_s");
  if (packet_bytes == 0) throw ConfigError("network.packet_bytes must be >= 1");
  positive(target_rate_kbps, "network.target_rate_kbps");
  positive(conservation_rate_kbps, "network.conservation_rate_kbps");
  if (conservation_rate_kbps > target_rate_kbps)
    throw ConfigError("network.conservation_rate_kbps must not exceed network.target_rate_kbps");
  if (queue_capacity == 0) throw ConfigError("network.queue_capacity must be >= 1");
  positive(capacity_j, "energy.capacity_j");
  if (!(initial_fraction >= 0.0 && initial_fraction <= 1.0)) throw ConfigError("energy.initial_fraction must lie in [0, 1]");
  positive(voltage, "energy.voltage");
  positive(harvest_period_s, "energy.harvest_period_s");
  if (harvest.empty()) throw ConfigError("energy.harvest_profile needs at least one segment");
  for (const auto& seg : harvest) {
    if (!(seg.power_w >= 0.0)) throw ConfigError("energy.harvest_profile power must be >= 0");
    if (!(seg.start_s >= 0.0)) throw ConfigError("energy.harvest_profile start must be >= 0");
  }
  positive(peripheral_period_s, "energy.peripheral_period_s");
  positive(distance_m, "geometry.distance_m");
  if (!(incidence_deg >= 0.0 && incidence_deg < 90.0)) throw ConfigError("geometry.incidence_deg must lie in [0, 90)");
  if (!(mobility_amplitude_m >= 0.0)) throw ConfigError("geometry.mobility_amplitude_m must be >= 0");
  positive(mobility_period_s, "geometry.mobility_period_s");
  positive(owc_bit_rate_bps, "optical.bit_rate_bps");
  if (!(owc_preamble_us >= 0.0)) throw ConfigError("optical.preamble_us must be >= 0");
  positive(gateway_voltage, "gateway.voltage");
  try {
    radio.validate();
    optical.validate();
    ble.validate();
    weights.validate();
    etno.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace riot::harness
