#ifndef RIOT_SIM_TIME_H
#define RIOT_SIM_TIME_H

#include <cmath>
#include <compare>
#include <cstdint>

namespace riot::sim {

/// Signed span of virtual time with nanosecond resolution.
struct SimDuration {
  std::int64_t ns = 0;

  static constexpr SimDuration nanos(std::int64_t v) { return {v}; }
  static constexpr SimDuration micros(std::int64_t v) { return {v * 1000}; }
  static constexpr SimDuration millis(std::int64_t v) { return {v * 1000000}; }
  static constexpr SimDuration seconds(std::int64_t v) { return {v * 1000000000}; }
  /// Rounds to the nearest nanosecond.
  static SimDuration from_seconds(double s) { return {std::llround(s * 1e9)}; }
  static SimDuration from_millis(double ms) { return {std::llround(ms * 1e6)}; }

  constexpr double to_seconds() const { return static_cast<double>(ns) * 1e-9; }
  constexpr double to_millis() const { return static_cast<double>(ns) * 1e-6; }

  constexpr auto operator<=>(const SimDuration&) const = default;
  constexpr SimDuration operator+(SimDuration o) const { return {ns + o.ns}; }
  constexpr SimDuration operator-(SimDuration o) const { return {ns - o.ns}; }
  constexpr SimDuration operator*(std::int64_t k) const { return {ns * k}; }
  constexpr SimDuration& operator+=(SimDuration o) {
    ns += o.ns;
    return *this;
  }
};

/// Instant on the virtual clock, nanoseconds since the start of the run.
struct SimTime {
  std::int64_t ns = 0;

  static constexpr SimTime from_ns(std::int64_t v) { return {v}; }
  static SimTime from_seconds(double s) { return {std::llround(s * 1e9)}; }

  constexpr double to_seconds() const { return static_cast<double>(ns) * 1e-9; }

  constexpr auto operator<=>(const SimTime&) const = default;
  constexpr SimTime operator+(SimDuration d) const { return {ns + d.ns}; }
  constexpr SimTime operator-(SimDuration d) const { return {ns - d.ns}; }
  constexpr SimDuration operator-(SimTime o) const { return {ns - o.ns}; }
};

}  // namespace riot::sim

#endif  // RIOT_SIM_TIME_H
