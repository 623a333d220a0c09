#ifndef RIOT_HARNESS_SIMULATION_H
#define RIOT_HARNESS_SIMULATION_H

#include <cstdint>
#include <string>
#include <vector>

#include "riot/energy/calibration.h"
#include "riot/harness/scenario.h"
#include "riot/link/fsm.h"
#include "riot/sim/kernel.h"
#include "riot/types.h"

namespace riot::harness {

/// Directory holding the shipped fixtures; RIOT_DATA_DIR in the environment wins.
std::string data_dir();
energy::StateCurrentTable default_calibration();
/// Shipped table with the scenario's override file (if any) applied.
energy::StateCurrentTable scenario_calibration(const Scenario& s);

struct TraceRow {
  double t_s = 0.0;
  double remaining_j = 0.0;
  double consumed_j = 0.0;
  double harvested_j = 0.0;
  OperatingMode mode = OperatingMode::Performance;
  Modality modality = Modality::OWC;
  link::OwcState owc = link::OwcState::SLEEP;
  link::BleState ble = link::BleState::OFF;
};

struct NodeMetrics {
  std::uint32_t id = 0;
  std::vector<TraceRow> trace;

  std::uint64_t bytes_delivered = 0;
  std::uint64_t packets_generated = 0;
  std::uint64_t packets_sent = 0;
  std::uint64_t packets_lost = 0;
  std::uint64_t packets_dropped = 0;  // queue overflow
  std::uint64_t modality_switches = 0;
  std::uint64_t sleep_entries = 0;
  std::uint64_t decisions = 0;
  std::uint64_t undefined_transitions = 0;

  double capacity_j = 0.0;
  double initial_j = 0.0;
  double remaining_j = 0.0;
  double consumed_j = 0.0;
  double harvested_j = 0.0;
  /// Union of this node's poll slots inside the run.
  double eligible_time_s = 0.0;
  double performance_time_s = 0.0;
  double conservation_time_s = 0.0;
  double sleep_time_s = 0.0;

  double achieved_rate_bps() const {
    return eligible_time_s > 0.0 ? 8.0 * static_cast<double>(bytes_delivered) / eligible_time_s : 0.0;
  }
};

struct GatewayMetrics {
  double energy_j = 0.0;   // mains-powered, reported only
  double tx_airtime_s = 0.0;
};

struct RunResult {
  Scenario scenario;
  std::vector<NodeMetrics> nodes;
  GatewayMetrics gateway;
  sim::RunSummary kernel;
};

/// Runs the scenario to completion. Deterministic in (scenario, calibration).
RunResult run(const Scenario& scenario, const energy::StateCurrentTable& calibration);
RunResult run(const Scenario& scenario);

}  // namespace riot::harness

#endif  // RIOT_HARNESS_SIMULATION_H
