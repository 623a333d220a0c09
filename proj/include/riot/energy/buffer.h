#ifndef RIOT_ENERGY_BUFFER_H
#define RIOT_ENERGY_BUFFER_H

#include <optional>
#include <stdexcept>
#include <vector>

namespace riot::energy {

enum class BatteryEvent { BatteryLow, BatteryCharged };

class EnergyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Joule store clamped to [0, capacity]. A single critical fraction drives
 * edge-triggered BatteryLow (downward crossing) and BatteryCharged (upward)
 * notifications. The consumed/harvested totals count only what actually
 * moved, so remaining == initial + harvested - consumed holds exactly up to
 * rounding.
 */
class EnergyBuffer {
 public:
  EnergyBuffer(double capacity_j, double initial_j, double critical_fraction,
               double supply_voltage = 3.3);

  std::optional<BatteryEvent> consume(double joules);

  struct HarvestResult {
    double added = 0.0;
    std::optional<BatteryEvent> event;
  };
  HarvestResult harvest(double joules);

  double capacity() const { return capacity_; }
  double remaining() const { return remaining_; }
  double fraction() const { return remaining_ / capacity_; }
  double initial() const { return initial_; }
  double consumed() const { return consumed_; }
  double harvested() const { return harvested_; }
  double supply_voltage() const { return voltage_; }
  double critical_fraction() const { return critical_; }
  bool below_critical() const { return below_; }

 private:
  double capacity_;
  double initial_;
  double remaining_;
  double critical_;
  double voltage_;
  double consumed_ = 0.0;
  double harvested_ = 0.0;
  bool below_;
};

/// Piecewise-constant input power, segments sorted by start time.
class HarvestProfile {
 public:
  struct Segment {
    double start_s;
    double power_w;
  };

  HarvestProfile() = default;
  explicit HarvestProfile(std::vector<Segment> segments);
  static HarvestProfile constant(double power_w) { return HarvestProfile({{0.0, power_w}}); }

  double power_at(double t_s) const;
  /// Exact integral of the profile over [a, b].
  double energy_between(double a_s, double b_s) const;
  const std::vector<Segment>& segments() const { return segments_; }

 private:
  std::vector<Segment> segments_;
};

/// Adds the profile's energy over [t0, t0 + dt] to the buffer; returns what was stored.
EnergyBuffer::HarvestResult harvest_tick(EnergyBuffer& buffer, const HarvestProfile& profile,
                                         double t0_s, double dt_s);

/// E = I * V * t with I in mA and t in ms.
double phase_energy(double current_ma, double duration_ms, double voltage);

}  // namespace riot::energy

#endif  // RIOT_ENERGY_BUFFER_H
