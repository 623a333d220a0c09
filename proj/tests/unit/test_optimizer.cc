#include <doctest.h>

#include <cmath>

#include "riot/optimizer/predictors.h"
#include "riot/optimizer/utility.h"
#include "riot/sim/rng.h"

using namespace riot;
using namespace riot::opt;

namespace {

constexpr Action kPerfOwc{OperatingMode::Performance, Modality::OWC};
constexpr Action kPerfBle{OperatingMode::Performance, Modality::BLE};
constexpr Action kConsOwc{OperatingMode::Conservation, Modality::OWC};
constexpr Action kConsBle{OperatingMode::Conservation, Modality::BLE};
constexpr Action kSleepOwc{OperatingMode::Sleep, Modality::OWC};

NodeObservation random_observation(sim::RngStream& r) {
  NodeObservation o;
  o.f_r = r.uniform();
  o.current = r.bernoulli(0.5) ? Modality::OWC : Modality::BLE;
  o.snr_db = {r.uniform() * 60.0 - 10.0, r.uniform() * 60.0 - 10.0};
  o.throughput_bps = {r.uniform() * 1e6, r.uniform() * 1e6};
  o.plr = {r.uniform(), r.uniform()};
  o.p_int = r.uniform();
  o.p_m = r.uniform();
  o.e_max_j = 8.0;
  for (int i = 0; i < 5; ++i) o.predicted_energy_j.push_back(r.uniform() * 8.0);
  return o;
}

}  // namespace

TEST_CASE("energy weight") {
  CHECK(energy_weight(1.0, 0.2) == 0.0);
  CHECK(energy_weight(0.2, 0.2) == 1.0);
  CHECK(energy_weight(0.6, 0.2) == doctest::Approx(0.5));
  CHECK(energy_weight(0.0, 0.2) == 1.0);
}

TEST_CASE("energy weight is non-increasing in f_r") {
  for (double fc : {0.0, 0.1, 0.2, 0.5, 0.9}) {
    double prev = 2.0;
    for (int i = 0; i <= 1000; ++i) {
      const double p = energy_weight(i / 1000.0, fc);
      CHECK(p <= prev);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      prev = p;
    }
  }
}

TEST_CASE("modality utility") {
  UtilityWeights w;
  CHECK(modality_utility(1.0, kPerfOwc, {1, 0, 1, 0, 0}, w) == doctest::Approx(4.0));
  CHECK(modality_utility(0.0, kConsBle, {0, 1, 0, 1, 1}, w) == doctest::Approx(1.7));
  const ModalityScores keep{1, 0, 0.7, 0.3, 0};
  const ModalityScores sw{1, 0, 0.7, 0.3, 1};
  CHECK(modality_utility(0.4, kPerfOwc, keep, w) - modality_utility(0.4, kPerfOwc, sw, w) ==
        doctest::Approx(w.p_ch));
  CHECK(modality_utility(1.0, kSleepOwc, {1, 1, 1, 1, 0}, w) == 0.0);
}

TEST_CASE("modality utility stays inside [-p_ch, 4] for binary and unit scores") {
  UtilityWeights w;
  sim::RngStream r(3, 3);
  for (int i = 0; i < 10000; ++i) {
    const ModalityScores s{double(r.bernoulli(0.5)), double(r.bernoulli(0.5)), r.uniform(), r.uniform(),
                           double(r.bernoulli(0.5))};
    const Action a = r.bernoulli(0.5) ? kPerfOwc : kConsBle;
    const double u = modality_utility(r.uniform(), a, s, w);
    CHECK(u >= -w.p_ch - 1e-12);
    CHECK(u <= 4.0 + 1e-12);
  }
}

TEST_CASE("screen utility") {
  CHECK(screen_utility(kPerfOwc, 0.9, 0.5, 1.0) == 1.0);
  CHECK(screen_utility(kConsOwc, 0.1, 0.5, 0.7) == 0.7);
  CHECK(screen_utility(kConsOwc, 0.9, 0.5, 1.0) == 0.0);
  CHECK(screen_utility(kPerfOwc, 0.1, 0.5, 1.0) == 0.0);
  for (double p : {0.0, 0.3, 0.5, 0.8, 1.0}) CHECK(screen_utility(kSleepOwc, p, 0.5, 1.0) == 0.0);
  CHECK(screen_utility(kConsOwc, 0.5, 0.5, 1.0) == 1.0);  // not strictly above
}

TEST_CASE("localization utility") {
  CHECK(localization_utility(kPerfOwc, 0.8, 0.5, 1.0) == 1.0);
  CHECK(localization_utility(kConsOwc, 0.8, 0.5, 1.0) == 0.0);
  CHECK(localization_utility(kPerfOwc, 0.5, 0.5, 1.0) == 0.0);
  CHECK(localization_utility(kConsOwc, 0.5, 0.5, 1.0) == 1.0);
  CHECK(localization_utility(kSleepOwc, 0.9, 0.5, 1.0) == 0.0);
}

TEST_CASE("ewma update") {
  CHECK(ewma_update(3.0, 9.0, 1.0) == 9.0);
  CHECK(ewma_update(10.0, 20.0, 0.5) == doctest::Approx(15.0));
  double w = 4.2;
  for (int i = 0; i < 100; ++i) w = ewma_update(w, 4.2, 0.2);
  CHECK(w == doctest::Approx(4.2));
}

TEST_CASE("mobility probability") {
  CHECK(mobility_probability(10.0, 13.0, 1.5, 3.0) == doctest::Approx(0.5));
  CHECK(mobility_probability(10.0, 7.0, 1.5, 3.0) == doctest::Approx(0.5));
  CHECK(mobility_probability(5.0, 5.0, 20.0, 3.0) < 1e-20);
  CHECK(mobility_probability(0.0, 5.0, 1.0, 3.0) == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))));
  CHECK(mobility_probability(0.0, 5.0, 1.0, 3.0) == doctest::Approx(0.8808).epsilon(1e-4));
}

TEST_CASE("mobility probability is in (0, 1) and increasing in deviation") {
  double prev = 0.0;
  for (double ds = 0.0; ds <= 20.0; ds += 0.05) {
    const double p = mobility_probability(0.0, ds, 1.5, 3.0);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("energy utility") {
  CHECK(energy_utility(0.0, 8.0) == 1.0);
  CHECK(energy_utility(8.0, 8.0) == 0.0);
  CHECK(energy_utility(2.0, 8.0) == doctest::Approx(0.75));
  CHECK(energy_utility(20.0, 8.0) == 0.0);
}

TEST_CASE("total utility") {
  UtilityWeights w;
  CHECK(total_utility({}, w, 0.5) == 0.0);
  CHECK(total_utility({0, 0, 0, 1.0}, w, 1.0) == 0.0);
  CHECK(total_utility({0, 0, 0, 123.0}, w, 1.0) == 0.0);
  CHECK(total_utility({4, 1, 1, 0.3}, w, 1.0) == doctest::Approx(3.73));
  CHECK(total_utility({0, 0, 0, 1.0}, w, 0.6) == doctest::Approx(0.5));
}

TEST_CASE("weights validation") {
  UtilityWeights w;
  CHECK_NOTHROW(w.validate());
  w.p_M = 0.5;
  try {
    w.validate();
    FAIL("expected WeightError");
  } catch (const WeightError& e) {
    CHECK(std::string(e.what()).find("p_M + p_S + p_L") != std::string::npos);
  }
  UtilityWeights l;
  l.lambda = 0.0;
  CHECK_THROWS_AS(l.validate(), WeightError);
  UtilityWeights k;
  k.k = 0.0;
  CHECK_THROWS_AS(k.validate(), WeightError);
  UtilityWeights f;
  f.f_c = 1.0;
  CHECK_THROWS_AS(f.validate(), WeightError);
}

TEST_CASE("action set") {
  const auto a = enumerate_actions(Modality::BLE);
  REQUIRE(a.size() == 5);
  CHECK(a[4] == Action{OperatingMode::Sleep, Modality::BLE});
  int sleeps = 0;
  for (const auto& x : a) sleeps += x.mode == OperatingMode::Sleep;
  CHECK(sleeps == 1);
}

TEST_CASE("sleep guard dominates below the critical fraction") {
  UtilityWeights w;
  sim::RngStream r(77, 0);
  for (int i = 0; i < 10000; ++i) {
    NodeObservation o = random_observation(r);
    o.f_r = r.uniform() * w.f_c * (1.0 - 1e-12);
    const auto actions = enumerate_actions(o.current);
    const auto d = euno_select(o, w, actions);
    REQUIRE(d.action.mode == OperatingMode::Sleep);
    CHECK(d.guard);
  }
}

TEST_CASE("argmax is invariant under common positive scaling") {
  UtilityWeights w;
  sim::RngStream r(78, 0);
  for (int i = 0; i < 5000; ++i) {
    NodeObservation o = random_observation(r);
    o.f_r = w.f_c + (1.0 - w.f_c) * r.uniform();
    const auto actions = enumerate_actions(o.current);
    std::vector<UtilityComponents> comps;
    for (std::size_t j = 0; j < actions.size(); ++j) comps.push_back(evaluate_components(o, actions, j, w));
    const Action base = euno_select_components(o, w, actions, comps).action;
    for (double c : {1e-3, 0.5, 2.0, 7.0, 1e3}) {
      std::vector<UtilityComponents> scaled;
      for (const auto& x : comps) scaled.push_back(x.scaled(c));
      REQUIRE(euno_select_components(o, w, actions, scaled).action == base);
    }
  }
}

TEST_CASE("lower energy never promotes the most expensive action") {
  UtilityWeights w;
  sim::RngStream r(79, 0);
  for (int i = 0; i < 2000; ++i) {
    NodeObservation o = random_observation(r);
    const auto actions = enumerate_actions(o.current);
    std::vector<UtilityComponents> comps;
    for (std::size_t j = 0; j < actions.size(); ++j) comps.push_back(evaluate_components(o, actions, j, w));
    std::size_t top = 0;
    for (std::size_t j = 1; j < actions.size(); ++j)
      if (o.predicted_energy_j[j] > o.predicted_energy_j[top]) top = j;
    auto rank = [&](double f_r) {
      int better = 0;
      const double u_top = total_utility(comps[top], w, f_r);
      for (std::size_t j = 0; j < actions.size(); ++j)
        if (j != top && total_utility(comps[j], w, f_r) > u_top) ++better;
      return better;
    };
    const double hi = 0.2 + 0.8 * r.uniform();
    const double lo = 0.2 + (hi - 0.2) * r.uniform();
    CHECK(rank(lo) >= rank(hi));
  }
}

TEST_CASE("full energy with a strong optical link picks performance over OWC") {
  UtilityWeights w;
  NodeObservation o;
  o.f_r = 1.0;
  o.current = Modality::OWC;
  o.snr_db = {45.0, 20.0};
  o.throughput_bps = {498782.0, 379623.0};
  o.p_int = 0.9;
  o.p_m = 0.9;
  o.e_max_j = 8.0;
  o.predicted_energy_j = {0.05, 0.03, 0.02, 0.01, 0.001};
  CHECK(euno_select(o, w, enumerate_actions(o.current)).action == kPerfOwc);
  o.f_r = 0.1;
  CHECK(euno_select(o, w, enumerate_actions(o.current)).action.mode == OperatingMode::Sleep);
}

TEST_CASE("exact ties keep the current modality") {
  UtilityWeights w;
  w.p_ch = 0.0;
  NodeObservation o;
  o.f_r = 1.0;
  o.current = Modality::BLE;
  o.throughput_bps = {1e5, 1e5};
  o.e_max_j = 8.0;
  o.predicted_energy_j = {0.1, 0.1, 0.05, 0.05, 0.01};
  const auto d = euno_select(o, w, enumerate_actions(o.current));
  CHECK(d.utilities[0] == d.utilities[1]);
  CHECK(d.action == kPerfBle);
  o.current = Modality::OWC;
  CHECK(euno_select(o, w, enumerate_actions(o.current)).action == kPerfOwc);
  CHECK(tie_break_less(kConsBle, kPerfOwc, Modality::BLE));
  CHECK(tie_break_less(kPerfOwc, kConsOwc, Modality::OWC));
}

TEST_CASE("etno thresholds") {
  EtnoConfig c;
  CHECK(etno_select(0.5, c, Modality::OWC, Modality::OWC) == kPerfOwc);
  CHECK(etno_select(0.5, c, Modality::BLE, Modality::OWC) == kPerfBle);
  CHECK(etno_select(0.3, c, Modality::OWC, Modality::OWC) == kConsBle);
  CHECK(etno_select(0.15, c, Modality::OWC, Modality::BLE).mode == OperatingMode::Sleep);
  CHECK(etno_select(0.4, c, Modality::OWC, Modality::OWC) == kPerfOwc);
  CHECK(etno_select(0.2, c, Modality::OWC, Modality::OWC) == kConsBle);
  EtnoConfig owc;
  owc.owc_only = true;
  CHECK(etno_select(0.3, owc, Modality::BLE, Modality::OWC) == kConsOwc);
  CHECK(etno_select(0.9, owc, Modality::BLE, Modality::OWC) == kPerfOwc);
  EtnoConfig bad{0.5, 0.4, false};
  CHECK_THROWS_AS(bad.validate(), WeightError);
  CHECK(best_snr_modality({10.0, 10.0}) == Modality::OWC);
  CHECK(best_snr_modality({10.0, 11.0}) == Modality::BLE);
}

TEST_CASE("mobility predictor") {
  MobilityPredictor m(0.2, 1.5, 3.0);
  CHECK_FALSE(m.baseline().has_value());
  m.observe(30.0);
  CHECK(*m.baseline() == 30.0);
  const double p = m.observe(36.0);
  CHECK(p == doctest::Approx(mobility_probability(30.0, 36.0, 1.5, 3.0)));
  CHECK(*m.baseline() == doctest::Approx(ewma_update(30.0, 36.0, 0.2)));
  MobilityPredictor s(0.2, 1.5, 3.0);
  for (int i = 0; i < 20; ++i) s.observe(25.0);
  CHECK(s.last_probability() < 0.02);
}

TEST_CASE("interaction models") {
  CHECK(InteractionModel::constant(0.7).probability(0.0) == 0.7);
  CHECK(InteractionModel::constant(0.7).probability(1e6) == 0.7);
  const auto sch = InteractionModel::schedule({{0, 100, 0.9}, {100, INFINITY, 0.1}});
  CHECK(sch.probability(50.0) == 0.9);
  CHECK(sch.probability(100.0) == 0.1);
  auto e = InteractionModel::ewma(0.3, 1.0);
  double prev = e.probability(0.0);
  for (int i = 0; i < 50; ++i) {
    e.observe_commands(0);
    const double p = e.probability(0.0);
    CHECK(p < prev);
    prev = p;
  }
  CHECK(prev < 1e-6);
  e.observe_commands(3);
  CHECK(e.probability(0.0) == doctest::Approx(0.3).epsilon(1e-3));
}
