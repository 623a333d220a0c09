#include "riot/types.h"

namespace riot {

std::string_view to_string(Modality m) { return m == Modality::OWC ? "OWC" : "BLE"; }

std::string_view to_string(OperatingMode m) {
  switch (m) {
    case OperatingMode::Performance: return "Performance";
    case OperatingMode::Conservation: return "Conservation";
    case OperatingMode::Sleep: return "Sleep";
  }
  return "?";
}

std::string_view to_string(PowerProfile p) {
  switch (p) {
    case PowerProfile::Normal: return "normal";
    case PowerProfile::LowPower: return "low-power";
    case PowerProfile::VeryLowPower: return "very-low-power";
  }
  return "?";
}

std::optional<Modality> parse_modality(std::string_view s) {
  if (s == "OWC" || s == "owc") return Modality::OWC;
  if (s == "BLE" || s == "ble") return Modality::BLE;
  return std::nullopt;
}

std::optional<OperatingMode> parse_mode(std::string_view s) {
  if (s == "Performance" || s == "performance") return OperatingMode::Performance;
  if (s == "Conservation" || s == "conservation") return OperatingMode::Conservation;
  if (s == "Sleep" || s == "sleep") return OperatingMode::Sleep;
  return std::nullopt;
}

std::optional<PowerProfile> parse_profile(std::string_view s) {
  if (s == "normal") return PowerProfile::Normal;
  if (s == "low-power") return PowerProfile::LowPower;
  if (s == "very-low-power") return PowerProfile::VeryLowPower;
  return std::nullopt;
}

std::string to_string(const Action& a) {
  return std::string(to_string(a.mode)) + "/" + std::string(to_string(a.modality));
}

}  // namespace riot
