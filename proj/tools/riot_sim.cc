// Command-line front end: run, sweep, validate-ber, check-calibration, print-config.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riot/energy/calibration.h"
#include "riot/harness/reports.h"
#include "riot/harness/scenario.h"
#include "riot/harness/simulation.h"

namespace {

using namespace riot;
using namespace riot::harness;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string optimizer;
  std::string rates;
  std::vector<std::string> overrides;
  std::string calibration;
  double snr_min = 0.0;
  double snr_max = 18.0;
  double delta = 0.68;
  double max_deviation = 0.5;
  std::string fixture;
};

std::vector<double> parse_rates(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !(v > 0.0)) throw ConfigError("bad rate '" + item + "' in --rates");
    out.push_back(v);
  }
  return out;
}

Scenario build_scenario(const Options& o) {
  Scenario s = o.config.empty() ? Scenario{} : load_scenario(o.config);
  for (const auto& a : o.overrides) apply_override(s, a);
  if (o.seed) s.seed = *o.seed;
  if (!o.optimizer.empty()) s.optimizer = parse_optimizer(o.optimizer);
  if (!o.calibration.empty()) s.calibration = o.calibration;
  s.validate();
  return s;
}

int cmd_run(const Options& o) {
  const Scenario s = build_scenario(o);
  const RunResult r = run(s);
  if (!o.out.empty()) {
    for (const auto& p : write_traces(r, o.out)) std::cerr << "wrote " << p << "\n";
  }
  for (const auto& n : r.nodes) {
    std::printf("node %u: %.3f MB delivered, %.1f kb/s over %.0f s eligible, %llu switches, remaining %.3f J\n", n.id,
                n.bytes_delivered / 1e6, n.achieved_rate_bps() / 1e3, n.eligible_time_s,
                static_cast<unsigned long long>(n.modality_switches), n.remaining_j);
  }
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  const Scenario s = build_scenario(o);
  std::vector<double> rates = o.rates.empty() ? s.sweep_rates_kbps : parse_rates(o.rates);
  if (rates.empty()) throw ConfigError("sweep needs a non-empty rate list (--rates or run.sweep_rates_kbps)");
  std::vector<OptimizerKind> opts;
  if (o.optimizer.empty()) opts = {OptimizerKind::Euno, OptimizerKind::Etno, OptimizerKind::EtnoOwc};
  else opts = {s.optimizer};
  const auto rows = sweep(s, rates, opts, scenario_calibration(s));
  const std::string csv = sweep_csv(rows);
  if (!o.out.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(o.out, ec);
    const auto p = std::filesystem::path(o.out) / "sweep.csv";
    std::ofstream f(p);
    if (!f || !(f << csv)) throw OutputError("cannot write '" + p.string() + "'");
    std::cerr << "wrote " << p.string() << "\n";
  }
  std::cout << csv;
  return kExitOk;
}

int cmd_validate_ber(const Options& o) {
  const std::string fixture = o.fixture.empty() ? data_dir() + "/gfsk_reference.csv" : o.fixture;
  const BerReport rep = validate_ber(fixture, o.snr_min, o.snr_max, o.delta);
  std::printf("snr_db,reference_ber,model_snr_db,deviation_db\n");
  for (const auto& p : rep.points) {
    std::printf("%.3f,%.6e,%.4f,%.4f\n", p.snr_db, p.reference_ber, p.model_snr_db, p.deviation_db);
  }
  const bool ok = rep.max_deviation_db <= o.max_deviation;
  std::printf("# points=%zu max_deviation_db=%.4f limit=%.3f %s\n", rep.points.size(), rep.max_deviation_db,
              o.max_deviation, ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitValidation;
}

int cmd_check_calibration(const Options& o) {
  const auto table = o.calibration.empty() ? default_calibration()
                                           : energy::load_calibration(o.calibration, default_calibration());
  bool ok = true;
  std::printf("%-22s %14s %14s %5s %9s %s\n", "check", "computed", "reference", "unit", "rel_err", "result");
  for (const auto& c : check_calibration(table)) {
    std::printf("%-22s %14.6g %14.6g %5s %8.2f%% %s\n", c.name.c_str(), c.computed, c.reference, c.unit.c_str(),
                100.0 * c.relative_error, c.pass ? "PASS" : "FAIL");
    ok = ok && c.pass;
  }
  return ok ? kExitOk : kExitValidation;
}

int cmd_print_config(const Options& o) {
  std::cout << format_scenario(build_scenario(o));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid OWC/BLE IoT network simulator"};
  app.require_subcommand(1);
  Options o;

  auto scenario_flags = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "Scenario file")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Override run.seed");
    sub->add_option("--optimizer", o.optimizer, "Override optimizer")
        ->check(CLI::IsMember({"euno", "etno", "etno-owc"}));
    sub->add_option("--set", o.overrides, "Override a key, section.key=value (repeatable)");
    sub->add_option("--calibration", o.calibration, "Calibration override CSV");
  };

  auto* run_cmd = app.add_subcommand("run", "Run one scenario");
  scenario_flags(run_cmd);
  run_cmd->add_option("--out", o.out, "Directory for traces and summary");

  auto* sweep_cmd = app.add_subcommand("sweep", "Achieved rate versus target rate");
  scenario_flags(sweep_cmd);
  sweep_cmd->add_option("--rates", o.rates, "Comma-separated target rates in kb/s");
  sweep_cmd->add_option("--out", o.out, "Directory for sweep.csv");

  auto* ber_cmd = app.add_subcommand("validate-ber", "Compare the GFSK model with the reference table");
  ber_cmd->add_option("--fixture", o.fixture, "Reference CSV (default: shipped table)");
  ber_cmd->add_option("--snr-min", o.snr_min, "Lower SNR bound, dB");
  ber_cmd->add_option("--snr-max", o.snr_max, "Upper SNR bound, dB");
  ber_cmd->add_option("--delta", o.delta, "Modulation constant used by the model");
  ber_cmd->add_option("--max-deviation", o.max_deviation, "Pass limit, dB");

  auto* cal_cmd = app.add_subcommand("check-calibration", "Recompute headline per-operation energies");
  cal_cmd->add_option("--calibration", o.calibration, "Calibration override CSV");

  auto* cfg_cmd = app.add_subcommand("print-config", "Print the resolved scenario");
  scenario_flags(cfg_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(o);
    if (sweep_cmd->parsed()) return cmd_sweep(o);
    if (ber_cmd->parsed()) return cmd_validate_ber(o);
    if (cal_cmd->parsed()) return cmd_check_calibration(o);
    if (cfg_cmd->parsed()) return cmd_print_config(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const energy::CalibrationError& e) {
    std::cerr << "calibration error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const opt::WeightError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
