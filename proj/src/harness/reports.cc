#include "riot/harness/reports.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "riot/channel/channel.h"
#include "riot/energy/buffer.h"
#include "riot/energy/models.h"
#include "riot/link/vlc_frame.h"

namespace riot::harness {

std::string fsm_label(const TraceRow& row) {
  return std::string(link::to_string(row.owc)) + "|" + std::string(link::to_string(row.ble));
}

std::string trace_csv(const NodeMetrics& node) {
  std::string out = "t_s,remaining_J,consumed_J,harvested_J,mode,modality,fsm_state\n";
  char buf[160];
  for (const auto& r : node.trace) {
    std::snprintf(buf, sizeof buf, "%.6f,%.9f,%.9f,%.9f,", r.t_s, r.remaining_j, r.consumed_j, r.harvested_j);
    out += buf;
    out += std::string(to_string(r.mode)) + "," + std::string(to_string(r.modality)) + "," + fsm_label(r) + "\n";
  }
  return out;
}

std::uint64_t trace_modality_switches(const NodeMetrics& node) {
  std::uint64_t n = 0;
  for (std::size_t i = 1; i < node.trace.size(); ++i) {
    if (node.trace[i].modality != node.trace[i - 1].modality) ++n;
  }
  return n;
}

std::string summary_json(const RunResult& result) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema_version"] = kTraceSchemaVersion;
  j["scenario"] = result.scenario.name;
  j["seed"] = result.scenario.seed;
  j["optimizer"] = std::string(to_string(result.scenario.optimizer));
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : scenario_settings(result.scenario)) cfg[k] = v;
  j["config"] = cfg;
  j["events_executed"] = result.kernel.events_executed;
  j["final_clock_s"] = result.kernel.final_clock.to_seconds();
  ordered_json nodes = ordered_json::array();
  for (const auto& n : result.nodes) {
    ordered_json o;
    o["id"] = n.id;
    o["bytes_delivered"] = n.bytes_delivered;
    o["megabytes_delivered"] = n.bytes_delivered / 1e6;
    o["eligible_time_s"] = n.eligible_time_s;
    o["achieved_rate_kbps"] = n.achieved_rate_bps() / 1e3;
    o["packets_generated"] = n.packets_generated;
    o["packets_sent"] = n.packets_sent;
    o["packets_lost"] = n.packets_lost;
    o["packets_dropped"] = n.packets_dropped;
    o["modality_switch_count"] = n.modality_switches;
    o["sleep_entries"] = n.sleep_entries;
    o["decisions"] = n.decisions;
    o["undefined_transitions"] = n.undefined_transitions;
    o["capacity_J"] = n.capacity_j;
    o["initial_J"] = n.initial_j;
    o["remaining_J"] = n.remaining_j;
    o["consumed_J"] = n.consumed_j;
    o["harvested_J"] = n.harvested_j;
    o["performance_time_s"] = n.performance_time_s;
    o["conservation_time_s"] = n.conservation_time_s;
    o["sleep_time_s"] = n.sleep_time_s;
    nodes.push_back(o);
  }
  j["nodes"] = nodes;
  j["gateway"] = {{"energy_J", result.gateway.energy_j}, {"tx_airtime_s", result.gateway.tx_airtime_s}};
  return j.dump(2) + "\n";
}

namespace {
void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write '" + p.string() + "'");
  out << content;
  if (!out) throw OutputError("write failed for '" + p.string() + "'");
}
}  // namespace

std::vector<std::string> write_traces(const RunResult& result, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create output directory '" + dir + "': " + ec.message());
  std::vector<std::string> paths;
  for (const auto& n : result.nodes) {
    const auto p = std::filesystem::path(dir) / ("node_" + std::to_string(n.id) + ".csv");
    write_file(p, trace_csv(n));
    paths.push_back(p.string());
  }
  const auto p = std::filesystem::path(dir) / "summary.json";
  write_file(p, summary_json(result));
  paths.push_back(p.string());
  return paths;
}

std::vector<SweepRow> sweep(const Scenario& base, const std::vector<double>& rates_kbps,
                            const std::vector<OptimizerKind>& optimizers,
                            const energy::StateCurrentTable& calibration) {
  std::vector<SweepRow> rows;
  for (double rate : rates_kbps) {
    for (OptimizerKind o : optimizers) {
      Scenario s = base;
      s.target_rate_kbps = rate;
      s.conservation_rate_kbps = std::min(base.conservation_rate_kbps, rate);
      s.optimizer = o;
      const RunResult r = run(s, calibration);
      const NodeMetrics& n1 = r.nodes.front();
      rows.push_back({rate, o, n1.achieved_rate_bps() / 1e3, n1.bytes_delivered});
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "target_rate_kbps,optimizer,achieved_rate_kbps,bytes_delivered\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.3f,%s,%.6f,%llu\n", r.target_rate_kbps, std::string(to_string(r.optimizer)).c_str(),
                  r.achieved_rate_kbps, static_cast<unsigned long long>(r.bytes_delivered));
    out += buf;
  }
  return out;
}

BerReport validate_ber(const std::string& fixture_path, double snr_min_db, double snr_max_db, double delta) {
  std::ifstream in(fixture_path);
  if (!in) throw OutputError("cannot open BER reference '" + fixture_path + "'");
  BerReport rep;
  std::string line;
  bool header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    double snr = 0, ber = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf", &snr, &ber) != 2) {
      throw OutputError(fixture_path + ":" + std::to_string(line_no) + ": expected 'snr_db,ber'");
    }
    if (snr < snr_min_db || snr > snr_max_db) continue;
    if (!(ber > 0.0 && ber < 0.5)) continue;
    // gfsk_ber is decreasing in SNR: bisect for the SNR that hits `ber`.
    double lo = -60.0, hi = 60.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (channel::gfsk_ber(mid, channel::PhyRate::k1M, delta) > ber) lo = mid;
      else hi = mid;
    }
    BerPoint p{snr, ber, 0.5 * (lo + hi), 0.0};
    p.deviation_db = std::abs(p.model_snr_db - snr);
    rep.max_deviation_db = std::max(rep.max_deviation_db, p.deviation_db);
    rep.points.push_back(p);
  }
  if (!header) throw OutputError("BER reference '" + fixture_path + "' is empty");
  return rep;
}

std::vector<CalibrationCheck> check_calibration(const energy::StateCurrentTable& table, double tolerance) {
  constexpr double kV = 3.3;
  std::vector<CalibrationCheck> rows;
  auto add = [&](std::string name, auto compute, double reference, std::string unit) {
    CalibrationCheck c;
    c.name = std::move(name);
    c.reference = reference;
    c.unit = std::move(unit);
    try {
      c.computed = compute();
      c.relative_error = std::abs(c.computed - reference) / reference;
      c.pass = c.relative_error <= tolerance;
    } catch (const energy::CalibrationError&) {
      c.computed = std::nan("");
      c.relative_error = std::nan("");
      c.pass = false;
    }
    rows.push_back(std::move(c));
  };
  auto phase = [&](const char* dev, const char* state, PowerProfile p) {
    const auto& e = table.at(dev, state, p);
    if (!e.duration_ms) throw energy::CalibrationError("missing duration");
    return energy::phase_energy(e.current_ma, *e.duration_ms, kV);
  };
  add("ble_uplink_normal", [&] { return phase("ble", "uplink@0dBm", PowerProfile::Normal); }, 94e-6, "J");
  add("ble_uplink_low_power", [&] { return phase("ble", "uplink@0dBm", PowerProfile::LowPower); }, 61e-6, "J");
  add("vlc_uplink_normal", [&] { return energy::vlc_uplink_energy(table, PowerProfile::Normal); }, 21.5e-3, "J");
  add("vlc_uplink_low_power", [&] { return energy::vlc_uplink_energy(table, PowerProfile::LowPower); }, 15e-3, "J");
  add("eink_optimized", [&] { return phase("eink", "refresh_optimized", PowerProfile::Normal); }, 2.13e-3, "J");
  add("eink_original", [&] { return phase("eink", "refresh_original", PowerProfile::Normal); }, 12.39e-3, "J");
  add("vlc_frame_airtime",
      [&] {
        const auto frame = link::encode_vlc_frame(link::VlcFrame{});
        return frame.span().to_seconds();
      },
      0.91, "s");
  return rows;
}

}  // namespace riot::harness
