#ifndef RIOT_OPTIMIZER_PREDICTORS_H
#define RIOT_OPTIMIZER_PREDICTORS_H

#include <optional>
#include <variant>
#include <vector>

namespace riot::opt {

/**
 * EWMA baseline of the sampled SNR and the sigmoid mapping of its deviation
 * to a mobility probability. The deviation is taken against the baseline
 * before the new sample is folded in; the first sample seeds the baseline.
 */
class MobilityPredictor {
 public:
  MobilityPredictor(double lambda, double k, double c);

  /// Feeds S(t_n) and returns p_m(t_n).
  double observe(double snr_db);

  std::optional<double> baseline() const { return w_a_; }
  double last_probability() const { return p_m_; }

 private:
  double lambda_, k_, c_;
  std::optional<double> w_a_;
  double p_m_;
};

/// Source of the user-interaction probability p_int(t).
class InteractionModel {
 public:
  struct Window {
    double start_s;
    double end_s;  // exclusive; +inf allowed
    double probability;
  };

  static InteractionModel constant(double p);
  /// First matching window wins; `fallback` outside all windows.
  static InteractionModel schedule(std::vector<Window> windows, double fallback = 0.0);
  /// EWMA of per-interval downlink command arrivals (1 if any arrived).
  static InteractionModel ewma(double lambda, double initial);

  double probability(double t_s) const;
  /// Records the commands seen since the last call (EWMA source only).
  void observe_commands(unsigned count);

 private:
  struct Constant {
    double p;
  };
  struct Schedule {
    std::vector<Window> windows;
    double fallback;
  };
  struct Ewma {
    double lambda;
    double value;
  };
  explicit InteractionModel(std::variant<Constant, Schedule, Ewma> impl) : impl_(std::move(impl)) {}
  std::variant<Constant, Schedule, Ewma> impl_;
};

}  // namespace riot::opt

#endif  // RIOT_OPTIMIZER_PREDICTORS_H
