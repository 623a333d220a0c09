#ifndef RIOT_OPTIMIZER_UTILITY_H
#define RIOT_OPTIMIZER_UTILITY_H

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "riot/types.h"

namespace riot::opt {

class WeightError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct UtilityWeights {
  double p_M = 0.91;
  double p_S = 0.045;
  double p_L = 0.045;
  double p_p = 2.0;
  double p_t = 2.0;
  double p_c = 1.0;
  double p_e = 0.8;
  double p_ch = 0.1;
  double alpha = 1.0;    // screen reward
  double beta = 1.0;     // localization reward
  double theta_s = 0.5;  // interaction threshold
  double theta_l = 0.5;  // mobility threshold
  double f_c = 0.2;
  double lambda = 0.2;   // EWMA smoothing
  double k = 1.5;        // sigmoid slope
  double C = 3.0;        // critical SNR deviation, dB
  double dt_pr_s = 10.0;

  /// Throws WeightError naming the violated constraint.
  void validate() const;
};

/// p_E = 1 - (f_r - f_c) / (1 - f_c), clamped to [0, 1].
double energy_weight(double f_r, double f_c);

struct ModalityScores {
  double x_p = 0.0;
  double x_c = 0.0;
  double x_t = 0.0;
  double x_e = 0.0;
  double x_ch = 0.0;
};

/// Zero for Sleep actions.
double modality_utility(double f_r, const Action& action, const ModalityScores& s, const UtilityWeights& w);
double screen_utility(const Action& action, double p_int, double theta_s, double alpha);
double localization_utility(const Action& action, double p_m, double theta_l, double beta);
/// 1 - E_a / E_max with E_a clamped to [0, E_max].
double energy_utility(double e_a, double e_max);

double ewma_update(double w_prev, double s_now, double lambda);
/// 1 / (1 + exp(-k (|W_A - S| - C))).
double mobility_probability(double w_a, double s_now, double k, double c);

struct UtilityComponents {
  double u_m = 0.0;
  double u_s = 0.0;
  double u_l = 0.0;
  double u_e = 0.0;

  UtilityComponents scaled(double factor) const { return {u_m * factor, u_s * factor, u_l * factor, u_e * factor}; }
};

double total_utility(const UtilityComponents& u, const UtilityWeights& w, double f_r);

/// What the optimizer sees at a decision instant.
struct NodeObservation {
  double f_r = 1.0;
  Modality current = Modality::OWC;
  std::array<double, 2> snr_db{};          // indexed by Modality
  std::array<double, 2> throughput_bps{};  // achievable per modality
  std::array<double, 2> plr{};             // packet loss ratio per modality
  double p_int = 0.0;
  double p_m = 0.0;
  /// Predicted energy E_a per candidate, aligned with the action set.
  std::vector<double> predicted_energy_j;
  double e_max_j = 1.0;
};

/// Four non-sleep actions plus one Sleep action on the current modality.
std::vector<Action> enumerate_actions(Modality current);

/// Scores of `actions[index]` normalized over the whole set.
ModalityScores compute_scores(const NodeObservation& obs, const std::vector<Action>& actions, std::size_t index);

UtilityComponents evaluate_components(const NodeObservation& obs, const std::vector<Action>& actions,
                                      std::size_t index, const UtilityWeights& w);

struct Decision {
  Action action;
  bool guard = false;  // forced by f_r < f_c
  std::vector<double> utilities;
};

/// Strict weak order used to break exact ties between equal-utility actions.
bool tie_break_less(const Action& a, const Action& b, Modality current);

Decision euno_select(const NodeObservation& obs, const UtilityWeights& w, const std::vector<Action>& actions);
/// Same argmax over pre-computed components; used for scaling checks.
Decision euno_select_components(const NodeObservation& obs, const UtilityWeights& w,
                                const std::vector<Action>& actions,
                                const std::vector<UtilityComponents>& components);

struct EtnoConfig {
  double sleep_threshold = 0.2;
  double conservation_threshold = 0.4;
  bool owc_only = false;

  void validate() const;
};

/**
 * Threshold baseline. Sleep keeps `current_modality`; Conservation uses BLE
 * (OWC for the OWC-only variant); Performance uses `best_snr`.
 */
Action etno_select(double f_r, const EtnoConfig& cfg, Modality best_snr, Modality current_modality);

/// Modality with the higher SNR; OWC on ties.
Modality best_snr_modality(const std::array<double, 2>& snr_db);

}  // namespace riot::opt

#endif  // RIOT_OPTIMIZER_UTILITY_H
