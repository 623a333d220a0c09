#ifndef RIOT_HARNESS_REPORTS_H
#define RIOT_HARNESS_REPORTS_H

#include <string>
#include <vector>

#include "riot/energy/calibration.h"
#include "riot/harness/scenario.h"
#include "riot/harness/simulation.h"

namespace riot::harness {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kTraceSchemaVersion = 1;

/// Trace column value, e.g. "IDLE|OFF" for (OWC state, BLE state).
std::string fsm_label(const TraceRow& row);

std::string trace_csv(const NodeMetrics& node);
std::string summary_json(const RunResult& result);

/// Writes node_<id>.csv per node plus summary.json into `dir` (created if needed).
std::vector<std::string> write_traces(const RunResult& result, const std::string& dir);

/// Switches counted from consecutive trace rows.
std::uint64_t trace_modality_switches(const NodeMetrics& node);

struct SweepRow {
  double target_rate_kbps = 0.0;
  OptimizerKind optimizer = OptimizerKind::Euno;
  double achieved_rate_kbps = 0.0;
  std::uint64_t bytes_delivered = 0;
};

/// One run per (rate, optimizer) on the base scenario; metric is node 1.
std::vector<SweepRow> sweep(const Scenario& base, const std::vector<double>& rates_kbps,
                            const std::vector<OptimizerKind>& optimizers,
                            const energy::StateCurrentTable& calibration);
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct BerPoint {
  double snr_db = 0.0;
  double reference_ber = 0.0;
  double model_snr_db = 0.0;  // SNR at which the model reaches reference_ber
  double deviation_db = 0.0;
};

struct BerReport {
  std::vector<BerPoint> points;
  double max_deviation_db = 0.0;
};

/**
 * Horizontal distance between gfsk_ber (1 Mbit/s) and the tabulated
 * reference over rows with SNR in [snr_min, snr_max] and BER in (0, 0.5).
 * Throws OutputError if the fixture cannot be read.
 */
BerReport validate_ber(const std::string& fixture_path, double snr_min_db = 0.0, double snr_max_db = 18.0,
                       double delta = 0.68);

struct CalibrationCheck {
  std::string name;
  double computed = 0.0;
  double reference = 0.0;
  std::string unit;
  double relative_error = 0.0;
  bool pass = false;
};

std::vector<CalibrationCheck> check_calibration(const energy::StateCurrentTable& table, double tolerance = 0.05);

}  // namespace riot::harness

#endif  // RIOT_HARNESS_REPORTS_H
