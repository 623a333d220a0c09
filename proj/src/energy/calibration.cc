#include "riot/energy/calibration.h"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace riot::energy {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

const char* const kHeader = "device,state,profile,current_mA,duration_ms";

}  // namespace

CalibrationParseError::CalibrationParseError(const std::string& source, int line, const std::string& what)
    : CalibrationError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

CalibrationValidationError::CalibrationValidationError(std::vector<std::string> missing)
    : CalibrationError([&] {
        std::string msg = "calibration table is missing " + std::to_string(missing.size()) + " required state(s):";
        for (const auto& m : missing) msg += "\n  " + m;
        return msg;
      }()),
      missing_(std::move(missing)) {}

std::string to_string(const CalibrationKey& k) {
  return k.device + "," + k.state + "," + std::string(to_string(k.profile));
}

void StateCurrentTable::set(const CalibrationKey& key, CalibrationEntry entry) {
  if (!(entry.current_ma >= 0.0)) throw CalibrationError("negative current for " + to_string(key));
  entries_[key] = entry;
}

const CalibrationEntry* StateCurrentTable::find(const std::string& device, const std::string& state,
                                                PowerProfile profile) const {
  const auto it = entries_.find(CalibrationKey{device, state, profile});
  return it == entries_.end() ? nullptr : &it->second;
}

const CalibrationEntry& StateCurrentTable::at(const std::string& device, const std::string& state,
                                              PowerProfile profile) const {
  if (const auto* e = find(device, state, profile)) return *e;
  throw CalibrationError("unknown calibration state " + to_string(CalibrationKey{device, state, profile}));
}

double StateCurrentTable::duration_ms(const std::string& device, const std::string& state,
                                      PowerProfile profile) const {
  const auto& e = at(device, state, profile);
  if (!e.duration_ms)
    throw CalibrationError("no duration for " + to_string(CalibrationKey{device, state, profile}));
  return *e.duration_ms;
}

void StateCurrentTable::overlay(const StateCurrentTable& overrides) {
  for (const auto& [k, v] : overrides.entries_) entries_[k] = v;
}

StateCurrentTable parse_calibration(std::istream& in, const std::string& source) {
  StateCurrentTable table;
  std::string raw;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kHeader) throw CalibrationParseError(source, line_no, std::string("expected header '") + kHeader + "'");
      header_seen = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 5) {
      throw CalibrationParseError(source, line_no, "expected 5 fields, found " + std::to_string(f.size()));
    }
    if (f[0].empty() || f[1].empty()) throw CalibrationParseError(source, line_no, "device and state must be non-empty");
    const auto profile = parse_profile(f[2]);
    if (!profile) throw CalibrationParseError(source, line_no, "unknown profile '" + f[2] + "'");
    const auto current = parse_double(f[3]);
    if (!current || *current < 0.0)
      throw CalibrationParseError(source, line_no, "current_mA must be a nonnegative number, got '" + f[3] + "'");
    CalibrationEntry e{*current, std::nullopt};
    if (!f[4].empty()) {
      const auto d = parse_double(f[4]);
      if (!d || *d < 0.0)
        throw CalibrationParseError(source, line_no, "duration_ms must be blank or a nonnegative number, got '" + f[4] + "'");
      e.duration_ms = *d;
    }
    table.set(CalibrationKey{f[0], f[1], *profile}, e);
  }
  return table;
}

std::vector<CalibrationKey> required_states() {
  struct Req {
    const char* device;
    const char* state;
  };
  static const Req reqs[] = {
      {"core", "awake"},        {"core", "deep_sleep"},  {"owc", "off"},          {"owc", "sleep"},
      {"owc", "idle"},          {"owc", "tx"},           {"owc", "rx"},           {"owc", "tx_rx"},
      {"ble", "off"},           {"ble", "idle"},         {"ble", "tx_busy"},      {"ble", "rx_busy"},
      {"periph", "sensor_init"}, {"periph", "sense"},    {"periph", "eink_refresh"}, {"periph", "localize"},
      {"periph", "advertising"},
  };
  std::vector<CalibrationKey> out;
  for (PowerProfile p : {PowerProfile::Normal, PowerProfile::LowPower}) {
    for (const auto& r : reqs) out.push_back({r.device, r.state, p});
  }
  return out;
}

std::vector<std::string> missing_states(const StateCurrentTable& table) {
  std::vector<std::string> missing;
  for (const auto& k : required_states()) {
    if (!table.find(k.device, k.state, k.profile)) missing.push_back(to_string(k));
  }
  return missing;
}

void validate_calibration(const StateCurrentTable& table) {
  auto missing = missing_states(table);
  if (!missing.empty()) throw CalibrationValidationError(std::move(missing));
}

namespace {
StateCurrentTable parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CalibrationError("cannot open calibration file '" + path + "'");
  return parse_calibration(in, path);
}
}  // namespace

StateCurrentTable load_calibration(const std::string& path) {
  auto table = parse_file(path);
  validate_calibration(table);
  return table;
}

StateCurrentTable load_calibration(const std::string& path, const StateCurrentTable& base) {
  StateCurrentTable merged = base;
  merged.overlay(parse_file(path));
  validate_calibration(merged);
  return merged;
}

}  // namespace riot::energy
