#ifndef RIOT_TYPES_H
#define RIOT_TYPES_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace riot {

enum class Modality : std::uint8_t { OWC, BLE };

enum class OperatingMode : std::uint8_t { Performance, Conservation, Sleep };

/// Firmware profile selecting the calibration column.
enum class PowerProfile : std::uint8_t { Normal, LowPower, VeryLowPower };

std::string_view to_string(Modality m);
std::string_view to_string(OperatingMode m);
std::string_view to_string(PowerProfile p);

std::optional<Modality> parse_modality(std::string_view s);
std::optional<OperatingMode> parse_mode(std::string_view s);
/// Accepts "normal", "low-power", "very-low-power".
std::optional<PowerProfile> parse_profile(std::string_view s);

inline Modality other(Modality m) { return m == Modality::OWC ? Modality::BLE : Modality::OWC; }

/// Optimizer decision: operating mode plus the modality used when awake.
struct Action {
  OperatingMode mode = OperatingMode::Performance;
  Modality modality = Modality::OWC;

  bool operator==(const Action&) const = default;
};

std::string to_string(const Action& a);

}  // namespace riot

#endif  // RIOT_TYPES_H
