#include "riot/optimizer/utility.h"

#include <algorithm>
#include <cmath>

namespace riot::opt {

namespace {
bool is_prob(double p) { return p >= 0.0 && p <= 1.0; }
std::size_t idx(Modality m) { return static_cast<std::size_t>(m); }
int mode_rank(OperatingMode m) {
  switch (m) {
    case OperatingMode::Performance: return 2;
    case OperatingMode::Conservation: return 1;
    case OperatingMode::Sleep: return 0;
  }
  return 0;
}
}  // namespace

void UtilityWeights::validate() const {
  if (std::abs(p_M + p_S + p_L - 1.0) > 1e-9) throw WeightError("weights violate p_M + p_S + p_L = 1");
  for (double v : {p_M, p_S, p_L, p_p, p_t, p_c, p_e, p_ch, alpha, beta}) {
    if (!(v >= 0.0)) throw WeightError("utility weights must be nonnegative");
  }
  if (!is_prob(theta_s) || !is_prob(theta_l)) throw WeightError("thresholds theta_s, theta_l must lie in [0, 1]");
  if (!(f_c >= 0.0 && f_c < 1.0)) throw WeightError("critical fraction f_c must satisfy 0 <= f_c < 1");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw WeightError("EWMA smoothing lambda must satisfy 0 < lambda <= 1");
  if (!(k > 0.0)) throw WeightError("sigmoid slope k must be > 0");
  if (!(C >= 0.0)) throw WeightError("critical SNR deviation C must be >= 0");
  if (!(dt_pr_s > 0.0)) throw WeightError("optimizer period dt_pr must be > 0");
}

double energy_weight(double f_r, double f_c) {
  return std::clamp(1.0 - (f_r - f_c) / (1.0 - f_c), 0.0, 1.0);
}

double modality_utility(double f_r, const Action& action, const ModalityScores& s, const UtilityWeights& w) {
  if (action.mode == OperatingMode::Sleep) return 0.0;
  return f_r * (w.p_p * s.x_p + w.p_t * s.x_t) + (1.0 - f_r) * (w.p_c * s.x_c + w.p_e * s.x_e) - w.p_ch * s.x_ch;
}

double screen_utility(const Action& action, double p_int, double theta_s, double alpha) {
  const bool required = p_int > theta_s;
  if (action.mode == OperatingMode::Performance && required) return alpha;
  if (action.mode == OperatingMode::Conservation && !required) return alpha;
  return 0.0;
}

double localization_utility(const Action& action, double p_m, double theta_l, double beta) {
  const bool required = p_m > theta_l;
  if (action.mode == OperatingMode::Performance && required) return beta;
  if (action.mode == OperatingMode::Conservation && !required) return beta;
  return 0.0;
}

double energy_utility(double e_a, double e_max) {
  if (!(e_max > 0.0)) return 0.0;
  return 1.0 - std::clamp(e_a, 0.0, e_max) / e_max;
}

double ewma_update(double w_prev, double s_now, double lambda) { return lambda * s_now + (1.0 - lambda) * w_prev; }

double mobility_probability(double w_a, double s_now, double k, double c) {
  const double ds = std::abs(w_a - s_now);
  return 1.0 / (1.0 + std::exp(-k * (ds - c)));
}

double total_utility(const UtilityComponents& u, const UtilityWeights& w, double f_r) {
  return w.p_M * u.u_m + w.p_S * u.u_s + w.p_L * u.u_l + energy_weight(f_r, w.f_c) * u.u_e;
}

std::vector<Action> enumerate_actions(Modality current) {
  return {
      {OperatingMode::Performance, Modality::OWC},
      {OperatingMode::Performance, Modality::BLE},
      {OperatingMode::Conservation, Modality::OWC},
      {OperatingMode::Conservation, Modality::BLE},
      {OperatingMode::Sleep, current},
  };
}

ModalityScores compute_scores(const NodeObservation& obs, const std::vector<Action>& actions, std::size_t index) {
  const Action& a = actions.at(index);
  ModalityScores s;
  s.x_p = a.mode == OperatingMode::Performance ? 1.0 : 0.0;
  s.x_c = a.mode == OperatingMode::Conservation ? 1.0 : 0.0;
  s.x_ch = a.modality != obs.current ? 1.0 : 0.0;

  auto effective = [&](Modality m) { return obs.throughput_bps[idx(m)] * (1.0 - std::clamp(obs.plr[idx(m)], 0.0, 1.0)); };
  double best_t = 0.0;
  double best_e = 0.0;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i].mode != OperatingMode::Sleep) best_t = std::max(best_t, effective(actions[i].modality));
    if (i < obs.predicted_energy_j.size()) best_e = std::max(best_e, obs.predicted_energy_j[i]);
  }
  if (a.mode != OperatingMode::Sleep && best_t > 0.0) s.x_t = effective(a.modality) / best_t;
  const double e_a = index < obs.predicted_energy_j.size() ? obs.predicted_energy_j[index] : 0.0;
  s.x_e = best_e > 0.0 ? 1.0 - e_a / best_e : 1.0;
  return s;
}

UtilityComponents evaluate_components(const NodeObservation& obs, const std::vector<Action>& actions,
                                      std::size_t index, const UtilityWeights& w) {
  const Action& a = actions.at(index);
  UtilityComponents u;
  u.u_m = modality_utility(obs.f_r, a, compute_scores(obs, actions, index), w);
  u.u_s = screen_utility(a, obs.p_int, w.theta_s, w.alpha);
  u.u_l = localization_utility(a, obs.p_m, w.theta_l, w.beta);
  const double e_a = index < obs.predicted_energy_j.size() ? obs.predicted_energy_j[index] : 0.0;
  u.u_e = energy_utility(e_a, obs.e_max_j);
  return u;
}

bool tie_break_less(const Action& a, const Action& b, Modality current) {
  // "less" means preferred.
  const bool keep_a = a.modality == current;
  const bool keep_b = b.modality == current;
  if (keep_a != keep_b) return keep_a;
  if (mode_rank(a.mode) != mode_rank(b.mode)) return mode_rank(a.mode) > mode_rank(b.mode);
  if (a.modality != b.modality) return a.modality == Modality::OWC;
  return false;
}

Decision euno_select_components(const NodeObservation& obs, const UtilityWeights& w,
                                const std::vector<Action>& actions,
                                const std::vector<UtilityComponents>& components) {
  if (actions.empty()) throw std::invalid_argument("action set must be non-empty");
  Decision d;
  d.utilities.reserve(actions.size());
  for (const auto& c : components) d.utilities.push_back(total_utility(c, w, obs.f_r));
  if (obs.f_r < w.f_c) {
    d.guard = true;
    d.action = {OperatingMode::Sleep, obs.current};
    return d;
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < actions.size(); ++i) {
    const double ui = d.utilities[i];
    const double ub = d.utilities[best];
    const double tol = 1e-12 * std::max({1.0, std::abs(ui), std::abs(ub)});
    if (ui > ub + tol || (std::abs(ui - ub) <= tol && tie_break_less(actions[i], actions[best], obs.current))) {
      best = i;
    }
  }
  d.action = actions[best];
  return d;
}

Decision euno_select(const NodeObservation& obs, const UtilityWeights& w, const std::vector<Action>& actions) {
  std::vector<UtilityComponents> comps;
  comps.reserve(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) comps.push_back(evaluate_components(obs, actions, i, w));
  return euno_select_components(obs, w, actions, comps);
}

void EtnoConfig::validate() const {
  if (!(sleep_threshold >= 0.0 && sleep_threshold < conservation_threshold && conservation_threshold <= 1.0))
    throw WeightError("ETNO thresholds must satisfy 0 <= sleep < conservation <= 1");
}

Action etno_select(double f_r, const EtnoConfig& cfg, Modality best_snr, Modality current_modality) {
  if (f_r < cfg.sleep_threshold) return {OperatingMode::Sleep, current_modality};
  if (f_r < cfg.conservation_threshold) {
    return {OperatingMode::Conservation, cfg.owc_only ? Modality::OWC : Modality::BLE};
  }
  return {OperatingMode::Performance, cfg.owc_only ? Modality::OWC : best_snr};
}

Modality best_snr_modality(const std::array<double, 2>& snr_db) {
  return snr_db[idx(Modality::BLE)] > snr_db[idx(Modality::OWC)] ? Modality::BLE : Modality::OWC;
}

}  // namespace riot::opt
