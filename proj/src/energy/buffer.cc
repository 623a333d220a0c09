#include "riot/energy/buffer.h"

#include <algorithm>
#include <cmath>

namespace riot::energy {

EnergyBuffer::EnergyBuffer(double capacity_j, double initial_j, double critical_fraction,
                           double supply_voltage)
    : capacity_(capacity_j),
      initial_(initial_j),
      remaining_(initial_j),
      critical_(critical_fraction),
      voltage_(supply_voltage) {
  if (!(capacity_j > 0.0)) throw EnergyError("buffer capacity must be > 0");
  if (!(initial_j >= 0.0 && initial_j <= capacity_j)) throw EnergyError("initial energy outside [0, capacity]");
  if (!(critical_fraction >= 0.0 && critical_fraction < 1.0))
    throw EnergyError("critical fraction must lie in [0, 1)");
  if (!(supply_voltage > 0.0)) throw EnergyError("supply voltage must be > 0");
  below_ = remaining_ < critical_ * capacity_;
}

std::optional<BatteryEvent> EnergyBuffer::consume(double joules) {
  if (joules < 0.0 || std::isnan(joules)) throw EnergyError("cannot consume a negative amount of energy");
  const double taken = std::min(joules, remaining_);
  remaining_ -= taken;
  consumed_ += taken;
  if (!below_ && remaining_ < critical_ * capacity_) {
    below_ = true;
    return BatteryEvent::BatteryLow;
  }
  return std::nullopt;
}

EnergyBuffer::HarvestResult EnergyBuffer::harvest(double joules) {
  if (joules < 0.0 || std::isnan(joules)) throw EnergyError("cannot harvest a negative amount of energy");
  HarvestResult r;
  r.added = std::min(joules, capacity_ - remaining_);
  remaining_ += r.added;
  harvested_ += r.added;
  if (below_ && remaining_ >= critical_ * capacity_) {
    below_ = false;
    r.event = BatteryEvent::BatteryCharged;
  }
  return r;
}

HarvestProfile::HarvestProfile(std::vector<Segment> segments) : segments_(std::move(segments)) {
  std::stable_sort(segments_.begin(), segments_.end(),
                   [](const Segment& a, const Segment& b) { return a.start_s < b.start_s; });
  for (const auto& s : segments_) {
    if (!(s.power_w >= 0.0)) throw EnergyError("harvest power must be >= 0");
  }
}

double HarvestProfile::power_at(double t_s) const {
  double p = 0.0;
  for (const auto& s : segments_) {
    if (s.start_s <= t_s) p = s.power_w;
    else break;
  }
  return p;
}

double HarvestProfile::energy_between(double a_s, double b_s) const {
  if (b_s <= a_s) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const double lo = std::max(a_s, segments_[i].start_s);
    const double hi = i + 1 < segments_.size() ? std::min(b_s, segments_[i + 1].start_s) : b_s;
    if (hi > lo) total += segments_[i].power_w * (hi - lo);
  }
  return total;
}

EnergyBuffer::HarvestResult harvest_tick(EnergyBuffer& buffer, const HarvestProfile& profile,
                                         double t0_s, double dt_s) {
  if (!(dt_s > 0.0)) throw EnergyError("harvest tick duration must be > 0");
  return buffer.harvest(profile.energy_between(t0_s, t0_s + dt_s));
}

double phase_energy(double current_ma, double duration_ms, double voltage) {
  if (current_ma < 0.0 || duration_ms < 0.0 || voltage < 0.0)
    throw EnergyError("phase energy inputs must be nonnegative");
  return current_ma * 1e-3 * voltage * duration_ms * 1e-3;
}

}  // namespace riot::energy
