#include "riot/optimizer/predictors.h"

#include <algorithm>
#include <stdexcept>

#include "riot/optimizer/utility.h"

namespace riot::opt {

MobilityPredictor::MobilityPredictor(double lambda, double k, double c)
    : lambda_(lambda), k_(k), c_(c), p_m_(mobility_probability(0.0, 0.0, k, c)) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw WeightError("EWMA smoothing lambda must satisfy 0 < lambda <= 1");
  if (!(k > 0.0)) throw WeightError("sigmoid slope k must be > 0");
}

double MobilityPredictor::observe(double snr_db) {
  if (!w_a_) w_a_ = snr_db;
  p_m_ = mobility_probability(*w_a_, snr_db, k_, c_);
  w_a_ = ewma_update(*w_a_, snr_db, lambda_);
  return p_m_;
}

InteractionModel InteractionModel::constant(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("interaction probability must lie in [0, 1]");
  return InteractionModel(Constant{p});
}

InteractionModel InteractionModel::schedule(std::vector<Window> windows, double fallback) {
  for (const auto& w : windows) {
    if (!(w.probability >= 0.0 && w.probability <= 1.0) || !(w.end_s > w.start_s))
      throw std::invalid_argument("interaction schedule windows need start < end and p in [0, 1]");
  }
  if (!(fallback >= 0.0 && fallback <= 1.0)) throw std::invalid_argument("fallback probability must lie in [0, 1]");
  return InteractionModel(Schedule{std::move(windows), fallback});
}

InteractionModel InteractionModel::ewma(double lambda, double initial) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw std::invalid_argument("EWMA smoothing must satisfy 0 < lambda <= 1");
  if (!(initial >= 0.0 && initial <= 1.0)) throw std::invalid_argument("initial probability must lie in [0, 1]");
  return InteractionModel(Ewma{lambda, initial});
}

double InteractionModel::probability(double t_s) const {
  if (const auto* c = std::get_if<Constant>(&impl_)) return c->p;
  if (const auto* s = std::get_if<Schedule>(&impl_)) {
    for (const auto& w : s->windows) {
      if (t_s >= w.start_s && t_s < w.end_s) return w.probability;
    }
    return s->fallback;
  }
  return std::get<Ewma>(impl_).value;
}

void InteractionModel::observe_commands(unsigned count) {
  if (auto* e = std::get_if<Ewma>(&impl_)) {
    e->value = ewma_update(e->value, count > 0 ? 1.0 : 0.0, e->lambda);
  }
}

}  // namespace riot::opt
