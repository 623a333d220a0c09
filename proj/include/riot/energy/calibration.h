#ifndef RIOT_ENERGY_CALIBRATION_H
#define RIOT_ENERGY_CALIBRATION_H

#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "riot/types.h"

namespace riot::energy {

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed CSV row; `line()` is 1-based.
class CalibrationParseError : public CalibrationError {
 public:
  CalibrationParseError(const std::string& source, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

/// Table is well-formed but lacks states the simulator needs.
class CalibrationValidationError : public CalibrationError {
 public:
  explicit CalibrationValidationError(std::vector<std::string> missing);
  const std::vector<std::string>& missing() const { return missing_; }

 private:
  std::vector<std::string> missing_;
};

struct CalibrationEntry {
  double current_ma = 0.0;
  std::optional<double> duration_ms;
};

struct CalibrationKey {
  std::string device;
  std::string state;
  PowerProfile profile = PowerProfile::Normal;

  auto tie() const { return std::tie(device, state, profile); }
  bool operator<(const CalibrationKey& o) const { return tie() < o.tie(); }
  bool operator==(const CalibrationKey& o) const { return tie() == o.tie(); }
};

std::string to_string(const CalibrationKey& k);

/// (device, state, profile) -> measured current and optional phase duration.
class StateCurrentTable {
 public:
  void set(const CalibrationKey& key, CalibrationEntry entry);
  const CalibrationEntry* find(const std::string& device, const std::string& state,
                               PowerProfile profile) const;
  /// Throws CalibrationError when absent.
  const CalibrationEntry& at(const std::string& device, const std::string& state,
                             PowerProfile profile) const;
  /// Duration of a phase-shaped entry; throws if absent or blank.
  double duration_ms(const std::string& device, const std::string& state, PowerProfile profile) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<CalibrationKey, CalibrationEntry>& entries() const { return entries_; }

  /// Entries of `overrides` replace or extend this table.
  void overlay(const StateCurrentTable& overrides);

 private:
  std::map<CalibrationKey, CalibrationEntry> entries_;
};

/// Parses CSV text without validating completeness.
StateCurrentTable parse_calibration(std::istream& in, const std::string& source = "<stream>");

/// States the simulator reads, for normal and low-power profiles.
std::vector<CalibrationKey> required_states();
std::vector<std::string> missing_states(const StateCurrentTable& table);
/// Throws CalibrationValidationError naming every missing state.
void validate_calibration(const StateCurrentTable& table);

/// Reads and validates a calibration file.
StateCurrentTable load_calibration(const std::string& path);

/// Reads `path` as overrides on top of `base`, then validates the result.
StateCurrentTable load_calibration(const std::string& path, const StateCurrentTable& base);

}  // namespace riot::energy

#endif  // RIOT_ENERGY_CALIBRATION_H
