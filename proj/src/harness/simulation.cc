#include "riot/harness/simulation.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <optional>

#include "riot/channel/channel.h"
#include "riot/energy/buffer.h"
#include "riot/energy/models.h"
#include "riot/harness/interaction.h"
#include "riot/link/mac.h"
#include "riot/optimizer/predictors.h"
#include "riot/optimizer/utility.h"
#include "riot/sim/rng.h"

#ifndef RIOT_DATA_DIR
#define RIOT_DATA_DIR "data"
#endif

namespace riot::harness {

std::string data_dir() {
  if (const char* env = std::getenv("RIOT_DATA_DIR"); env && *env) return env;
  return RIOT_DATA_DIR;
}

energy::StateCurrentTable default_calibration() { return energy::load_calibration(data_dir() + "/calibration.csv"); }

energy::StateCurrentTable scenario_calibration(const Scenario& s) {
  auto base = default_calibration();
  if (s.calibration.empty()) return base;
  return energy::load_calibration(s.calibration, base);
}

namespace {

using link::BleState;
using link::OwcState;
using sim::EventKind;
using sim::SimDuration;
using sim::SimTime;

constexpr sim::TargetId kGatewayTarget = 0;

std::size_t mi(Modality m) { return static_cast<std::size_t>(m); }

struct ActiveOp {
  energy::PeripheralKind kind;
  double current_ma;
  sim::EventHandle end;
};

struct Node {
  std::uint32_t id = 0;
  channel::Pose base_pose{{0, 0, 0}, {0, 0, 1}};
  std::optional<channel::LinearWaypointMover> mover;
  energy::EnergyBuffer buffer;
  link::OwcFsm owc;
  link::BleFsm ble;
  sim::RngStream rng;
  std::array<opt::MobilityPredictor, 2> mobility;
  opt::InteractionModel interaction;

  Action action{OperatingMode::Performance, Modality::OWC};
  bool awake = true;
  bool initializing = true;
  bool in_slot = false;
  bool tx_busy = false;
  bool rx_busy = false;
  bool pending_reconcile = false;
  std::uint32_t queued = 0;
  std::optional<sim::EventHandle> app_timer;
  std::vector<ActiveOp> ops;
  unsigned commands_since_decision = 0;
  bool pending_trace = false;

  link::TxOutcome tx;
  std::size_t burst = 0;
  SimTime tx_start;
  Modality tx_modality = Modality::OWC;

  SimTime last_settle;
  double current_ma = 0.0;
  SimTime mode_since;
  NodeMetrics m;

  Node(std::uint32_t id_, const Scenario& s, opt::InteractionModel im)
      : id(id_),
        buffer(s.capacity_j, s.capacity_j * s.initial_fraction, s.weights.f_c, s.voltage),
        rng(s.seed, id_),
        mobility{opt::MobilityPredictor(s.weights.lambda, s.weights.k, s.weights.C),
                 opt::MobilityPredictor(s.weights.lambda, s.weights.k, s.weights.C)},
        interaction(std::move(im)) {}
};

class Simulation {
 public:
  Simulation(const Scenario& s, const energy::StateCurrentTable& table)
      : s_(s),
        currents_(energy::node_currents(table, s.profile)),
        harvest_(s.harvest),
        poll_(make_order(s.node_count), SimDuration::from_seconds(s.slot_s)),
        gateway_pose_({0, 0, 0}, {0, 0, -1}) {
    end_ = SimTime::from_seconds(s.init_s + s.duration_s);
    link_.owc_phy = s.owc_phy_config();
    link_.ble = s.ble;
    link_.ble_rate = s.radio.phy_rate;
    energy_cfg_.currents = currents_;
    energy_cfg_.voltage = s.voltage;
    energy_cfg_.packet_bytes = s.packet_bytes;
    energy_cfg_.performance_rate_bps = s.target_rate_bps();
    energy_cfg_.conservation_rate_bps = s.conservation_rate_bps();
    energy_cfg_.tx_share = 1.0 / s.node_count;
    energy_cfg_.awake_share = s.inter_tx_sleep ? 1.0 / s.node_count : 1.0;
    energy_cfg_.peripheral_period = SimDuration::from_seconds(s.peripheral_period_s);
    energy_cfg_.link = link_;
    for (Modality m : {Modality::OWC, Modality::BLE}) throughput_[mi(m)] = link::achievable_throughput_bps(m, s.packet_bytes, link_);

    if (const auto* idle = table.find("gateway", s.gateway_idle_state, PowerProfile::Normal)) gw_idle_ma_ = idle->current_ma;
    if (const auto* txs = table.find("gateway", s.gateway_tx_state, PowerProfile::Normal)) gw_tx_ma_ = txs->current_ma;
    else gw_tx_ma_ = gw_idle_ma_;

    const double psi = s.incidence_deg * std::numbers::pi / 180.0;
    for (std::uint32_t i = 0; i < s.node_count; ++i) {
      auto node = std::make_unique<Node>(i + 1, s, parse_interaction(s.interaction));
      const double theta = 2.0 * std::numbers::pi * i / s.node_count;
      const channel::Vec3 radial{std::cos(theta), std::sin(theta), 0.0};
      const channel::Vec3 pos{s.distance_m * std::sin(psi) * radial.x, s.distance_m * std::sin(psi) * radial.y,
                              -s.distance_m * std::cos(psi)};
      node->base_pose = channel::Pose(pos, {0, 0, 1});
      if (s.mobility_amplitude_m > 0.0) {
        node->mover.emplace(pos, pos + radial * s.mobility_amplitude_m, s.mobility_period_s, gateway_pose_.position());
      }
      node->m.id = node->id;
      node->m.capacity_j = node->buffer.capacity();
      node->m.initial_j = node->buffer.initial();
      nodes_.push_back(std::move(node));
    }
  }

  RunResult execute() {
    const SimTime t0{};
    for (auto& n : nodes_) {
      n->last_settle = t0;
      n->mode_since = t0;
      refresh(*n);
      record(*n);
    }
    kernel_.schedule(t0, kGatewayTarget, EventKind::OptimizerTick, [this](const sim::SimEvent&) { on_optimizer_tick(); });
    kernel_.schedule(SimTime::from_seconds(s_.init_s), kGatewayTarget, EventKind::PollTick,
                     [this](const sim::SimEvent&) { on_poll_tick(); });
    schedule_periodic(SimDuration::from_seconds(s_.harvest_period_s), EventKind::HarvestTick, [this] { on_harvest_tick(); });
    const SimDuration pp = SimDuration::from_seconds(s_.peripheral_period_s);
    schedule_at_then_every(SimTime{} + SimDuration::from_seconds(0.3 * s_.peripheral_period_s), pp,
                           EventKind::PeripheralStart, [this] { on_peripheral_tick(); });
    trace_period_ = SimDuration::from_seconds(s_.trace_period_s);
    next_trace_ = SimTime{} + trace_period_;
    schedule_at_then_every(next_trace_, trace_period_, EventKind::HarvestTick, [this] { on_trace_tick(); });

    RunResult r;
    r.kernel = kernel_.run_until(end_);
    for (auto& n : nodes_) {
      settle(*n);
      close_mode_interval(*n);
      if (n->m.trace.empty() || n->m.trace.back().t_s < end_.to_seconds()) record(*n);
      n->m.remaining_j = n->buffer.remaining();
      n->m.consumed_j = n->buffer.consumed();
      n->m.harvested_j = n->buffer.harvested();
      n->m.undefined_transitions = n->owc.undefined_count() + n->ble.undefined_count();
      r.nodes.push_back(n->m);
    }
    const double total_s = end_.to_seconds();
    r.gateway.tx_airtime_s = gw_airtime_s_;
    r.gateway.energy_j = s_.gateway_voltage * 1e-3 * (gw_idle_ma_ * total_s + (gw_tx_ma_ - gw_idle_ma_) * gw_airtime_s_);
    r.scenario = s_;
    return r;
  }

 private:
  static std::vector<std::uint32_t> make_order(std::uint32_t n) {
    std::vector<std::uint32_t> order;
    for (std::uint32_t i = 1; i <= n; ++i) order.push_back(i);
    return order;
  }

  template <typename F>
  void schedule_at_then_every(SimTime first, SimDuration period, EventKind kind, F fn) {
    if (first > end_) return;
    kernel_.schedule(first, kGatewayTarget, kind, [this, period, kind, fn](const sim::SimEvent& ev) {
      fn();
      schedule_at_then_every(ev.fire_at + period, period, kind, fn);
    });
  }

  template <typename F>
  void schedule_periodic(SimDuration period, EventKind kind, F fn) {
    schedule_at_then_every(SimTime{} + period, period, kind, fn);
  }

  Node& node(std::uint32_t id) { return *nodes_.at(id - 1); }

  // ---- energy ----------------------------------------------------------

  double compute_current(const Node& n) const {
    double i = n.awake ? currents_.core_awake : currents_.core_deep_sleep;
    i += currents_.owc_ma(n.owc.state()) + currents_.ble_ma(n.ble.state());
    if (n.awake) {
      for (const auto& op : n.ops) i += op.current_ma;
      if (n.initializing) i += currents_.advertising;
    }
    return i;
  }

  void settle(Node& n) {
    const SimTime now = kernel_.now();
    const double dt = (now - n.last_settle).to_seconds();
    n.last_settle = now;
    if (dt <= 0.0) return;
    const auto ev = n.buffer.consume(n.current_ma * 1e-3 * s_.voltage * dt);
    if (ev == energy::BatteryEvent::BatteryLow) post_battery_event(n, EventKind::BatteryLow);
  }

  void refresh(Node& n) { n.current_ma = compute_current(n); }

  void post_battery_event(Node& n, EventKind kind) {
    const std::uint32_t id = n.id;
    kernel_.schedule(kernel_.now(), id, kind, [this, id, kind](const sim::SimEvent&) {
      Node& x = node(id);
      settle(x);
      x.owc.dispatch(kind);
      x.ble.dispatch(kind);
      decide(x);
      reconcile(x);
      refresh(x);
      flush_trace(x);
    });
  }

  // ---- channel ---------------------------------------------------------

  channel::Pose pose_of(const Node& n) const {
    return n.mover ? n.mover->pose_at(kernel_.now().to_seconds()) : n.base_pose;
  }

  std::array<double, 2> snr_now(const Node& n) const {
    const channel::Pose p = pose_of(n);
    std::array<double, 2> snr{};
    snr[mi(Modality::OWC)] = channel::owc_snr_db(s_.optical, channel::owc_channel_gain(s_.optical, p, gateway_pose_));
    snr[mi(Modality::BLE)] = channel::snr_db(channel::friis_rx_power_dbm(s_.radio, p, gateway_pose_),
                                             s_.radio.noise_figure_db, s_.radio.bandwidth_hz);
    return snr;
  }

  double ber_of(Modality m, double snr) const {
    if (m == Modality::OWC) return std::isfinite(snr) ? channel::ook_ber(snr) : 0.5;
    return channel::gfsk_ber(snr, s_.radio.phy_rate);
  }

  // ---- optimizer -------------------------------------------------------

  void decide(Node& n) {
    const auto snr = snr_now(n);
    std::array<double, 2> plr{};
    for (Modality m : {Modality::OWC, Modality::BLE}) {
      plr[mi(m)] = 1.0 - channel::packet_success(ber_of(m, snr[mi(m)]), 8ull * s_.packet_bytes);
    }
    const double clamp_snr_owc = std::isfinite(snr[mi(Modality::OWC)]) ? snr[mi(Modality::OWC)] : -100.0;
    const double p_m_owc = n.mobility[mi(Modality::OWC)].observe(clamp_snr_owc);
    const double p_m_ble = n.mobility[mi(Modality::BLE)].observe(snr[mi(Modality::BLE)]);
    n.interaction.observe_commands(n.commands_since_decision);
    n.commands_since_decision = 0;

    Action next;
    const Modality current = n.action.modality;
    switch (s_.optimizer) {
      case OptimizerKind::Euno: {
        opt::NodeObservation obs;
        obs.f_r = n.buffer.fraction();
        obs.current = current;
        obs.snr_db = snr;
        obs.throughput_bps = throughput_;
        obs.plr = plr;
        obs.p_int = n.interaction.probability(kernel_.now().to_seconds());
        obs.p_m = current == Modality::OWC ? p_m_owc : p_m_ble;
        obs.e_max_j = n.buffer.capacity();
        const auto actions = opt::enumerate_actions(current);
        const SimDuration horizon = SimDuration::from_seconds(s_.weights.dt_pr_s);
        for (const auto& a : actions) obs.predicted_energy_j.push_back(energy::predict_action_energy(energy_cfg_, a, horizon));
        next = opt::euno_select(obs, s_.weights, actions).action;
        break;
      }
      case OptimizerKind::Etno:
      case OptimizerKind::EtnoOwc: {
        opt::EtnoConfig cfg = s_.etno;
        cfg.owc_only = s_.optimizer == OptimizerKind::EtnoOwc;
        next = opt::etno_select(n.buffer.fraction(), cfg, opt::best_snr_modality(snr), current);
        break;
      }
    }
    ++n.m.decisions;
    if (next == n.action) return;
    close_mode_interval(n);
    if (next.modality != n.action.modality) ++n.m.modality_switches;
    if (next.mode == OperatingMode::Sleep && n.action.mode != OperatingMode::Sleep) ++n.m.sleep_entries;
    n.action = next;
    n.pending_trace = true;
  }

  void close_mode_interval(Node& n) {
    const double dt = (kernel_.now() - n.mode_since).to_seconds();
    n.mode_since = kernel_.now();
    switch (n.action.mode) {
      case OperatingMode::Performance: n.m.performance_time_s += dt; break;
      case OperatingMode::Conservation: n.m.conservation_time_s += dt; break;
      case OperatingMode::Sleep: n.m.sleep_time_s += dt; break;
    }
  }

  // ---- node state ------------------------------------------------------

  void reconcile(Node& n) {
    if (n.tx_busy || n.rx_busy) {
      n.pending_reconcile = true;
      return;
    }
    n.pending_reconcile = false;
    const bool want_awake =
        n.action.mode != OperatingMode::Sleep && (n.initializing || !s_.inter_tx_sleep || n.in_slot);
    if (want_awake && !n.awake) {
      n.awake = true;
      start_op(n, energy::PeripheralKind::SensorInit);
    } else if (!want_awake && n.awake) {
      n.awake = false;
      for (const auto& op : n.ops) kernel_.cancel(op.end);
      n.ops.clear();
    }
    const bool owc_on = n.awake && n.action.modality == Modality::OWC;
    const bool ble_on = n.awake && n.action.modality == Modality::BLE;
    const bool charged = !n.buffer.below_critical();
    if (owc_on) {
      if (n.owc.state() == OwcState::SLEEP && charged) n.owc.dispatch(EventKind::WakeSignal);
    } else if (n.owc.state() == OwcState::IDLE) {
      n.owc.dispatch(EventKind::SleepSignal);
    }
    if (ble_on) {
      if (n.ble.state() == BleState::OFF && charged) n.ble.dispatch(EventKind::WakeSignal);
    } else if (n.ble.state() == BleState::IDLE) {
      n.ble.dispatch(EventKind::SleepSignal);
    }
    const bool generate = n.awake && n.in_slot && n.action.mode != OperatingMode::Sleep;
    if (generate && !n.app_timer) {
      schedule_app(n, kernel_.now() + app_gap(n));
    } else if (!generate && n.app_timer) {
      kernel_.cancel(*n.app_timer);
      n.app_timer.reset();
    }
    try_send(n);
  }

  double app_rate_bps(const Node& n) const {
    return n.action.mode == OperatingMode::Performance ? s_.target_rate_bps() : s_.conservation_rate_bps();
  }

  SimDuration app_gap(const Node& n) const { return SimDuration::from_seconds(8.0 * s_.packet_bytes / app_rate_bps(n)); }

  void schedule_app(Node& n, SimTime at) {
    const std::uint32_t id = n.id;
    n.app_timer = kernel_.schedule(at, id, EventKind::AppPacketReady, [this, id](const sim::SimEvent& ev) {
      Node& x = node(id);
      settle(x);
      x.app_timer.reset();
      ++x.m.packets_generated;
      if (x.queued < s_.queue_capacity) ++x.queued;
      else ++x.m.packets_dropped;
      try_send(x);
      const SimDuration gap = app_gap(x);
      if (ev.fire_at + gap <= end_) schedule_app(x, ev.fire_at + gap);
      refresh(x);
    });
  }

  void start_op(Node& n, energy::PeripheralKind kind) {
    for (const auto& op : n.ops) {
      if (op.kind == kind) return;
    }
    const auto& spec = currents_.op(kind);
    const std::uint32_t id = n.id;
    const auto handle = kernel_.schedule(kernel_.now() + spec.duration, id, EventKind::PeripheralEnd,
                                         [this, id, kind](const sim::SimEvent&) {
                                           Node& x = node(id);
                                           settle(x);
                                           std::erase_if(x.ops, [kind](const ActiveOp& o) { return o.kind == kind; });
                                           refresh(x);
                                         });
    n.ops.push_back({kind, spec.current_ma, handle});
  }

  void try_send(Node& n) {
    if (!n.awake || !n.in_slot || n.tx_busy || n.queued == 0 || n.action.mode == OperatingMode::Sleep) return;
    const Modality m = n.action.modality;
    if (m == Modality::OWC ? !link::can_transmit(n.owc.state()) : !link::can_transmit(n.ble.state())) return;
    link::LinkState ls = link_;
    ls.ber = ber_of(m, snr_now(n)[mi(m)]);
    n.tx = link::transmit_packet(true, m, n.owc.state(), n.ble.state(), s_.packet_bytes, ls, n.rng);
    --n.queued;
    n.tx_busy = true;
    n.tx_modality = m;
    n.tx_start = kernel_.now();
    n.burst = 0;
    begin_burst(n);
  }

  void begin_burst(Node& n) {
    if (n.tx_modality == Modality::OWC) n.owc.dispatch(EventKind::TransmitStart);
    else n.ble.dispatch(EventKind::TransmitStart);
    const auto& b = n.tx.bursts[n.burst];
    const std::uint32_t id = n.id;
    kernel_.schedule(n.tx_start + b.offset + b.length, id, EventKind::TransmitEnd,
                     [this, id](const sim::SimEvent&) { on_transmit_end(node(id)); });
  }

  void on_transmit_end(Node& n) {
    settle(n);
    const bool off = n.tx_modality == Modality::OWC ? n.owc.state() == OwcState::OFF : n.ble.state() == BleState::OFF;
    if (n.tx_modality == Modality::OWC) n.owc.dispatch(EventKind::TransmitEnd);
    else n.ble.dispatch(EventKind::TransmitEnd);
    gw_airtime_s_ += n.tx.bursts[n.burst].length.to_seconds();
    ++n.burst;
    if (!off && n.burst < n.tx.bursts.size()) {
      const std::uint32_t id = n.id;
      kernel_.schedule(n.tx_start + n.tx.bursts[n.burst].offset, id, EventKind::TransmitStart,
                       [this, id](const sim::SimEvent&) {
                         Node& x = node(id);
                         settle(x);
                         begin_burst(x);
                         refresh(x);
                       });
      refresh(n);
      return;
    }
    ++n.m.packets_sent;
    if (n.tx.delivered && !off) n.m.bytes_delivered += s_.packet_bytes;
    else ++n.m.packets_lost;
    n.tx_busy = false;
    if (n.pending_reconcile) reconcile(n);
    else try_send(n);
    refresh(n);
  }

  void start_downlink(Node& n) {
    if (!n.awake || n.action.mode == OperatingMode::Sleep || n.rx_busy) return;
    const Modality m = n.action.modality;
    if (m == Modality::OWC) {
      if (n.owc.state() != OwcState::IDLE && n.owc.state() != OwcState::TX) return;
      n.owc.dispatch(EventKind::ReceiveStart);
    } else {
      if (n.ble.state() != BleState::IDLE) return;
      n.ble.dispatch(EventKind::ReceiveStart);
    }
    n.rx_busy = true;
    ++n.commands_since_decision;
    const std::uint32_t id = n.id;
    kernel_.schedule(kernel_.now() + SimDuration::from_millis(s_.ble.downlink_rx_len_ms), id, EventKind::ReceiveEnd,
                     [this, id, m](const sim::SimEvent&) {
                       Node& x = node(id);
                       settle(x);
                       if (m == Modality::OWC) x.owc.dispatch(EventKind::ReceiveEnd);
                       else x.ble.dispatch(EventKind::ReceiveEnd);
                       x.rx_busy = false;
                       if (x.pending_reconcile) reconcile(x);
                       else try_send(x);
                       refresh(x);
                     });
  }

  // ---- periodic handlers ----------------------------------------------

  void on_optimizer_tick() {
    for (auto& n : nodes_) {
      settle(*n);
      decide(*n);
      reconcile(*n);
      refresh(*n);
      flush_trace(*n);
    }
    const SimTime next = kernel_.now() + SimDuration::from_seconds(s_.weights.dt_pr_s);
    if (next <= end_) {
      kernel_.schedule(next, kGatewayTarget, EventKind::OptimizerTick, [this](const sim::SimEvent&) { on_optimizer_tick(); });
    }
  }

  void on_poll_tick() {
    const SimTime now = kernel_.now();
    if (first_poll_) {
      first_poll_ = false;
      for (auto& n : nodes_) {
        settle(*n);
        n->initializing = false;
        reconcile(*n);
        refresh(*n);
      }
    }
    const auto prev = poll_.holder();
    const auto tick = poll_.poll_tick(s_.inter_tx_sleep);
    if (prev && *prev != tick.polled) {
      Node& p = node(*prev);
      settle(p);
      p.in_slot = false;
      reconcile(p);
      refresh(p);
    }
    Node& n = node(tick.polled);
    settle(n);
    n.in_slot = true;
    const SimTime slot_end = std::min(end_, now + poll_.slot_length());
    n.m.eligible_time_s += (slot_end - now).to_seconds();
    reconcile(n);
    start_downlink(n);
    refresh(n);
    const SimTime next = now + poll_.slot_length();
    if (next < end_) {
      kernel_.schedule(next, kGatewayTarget, EventKind::PollTick, [this](const sim::SimEvent&) { on_poll_tick(); });
    }
  }

  void on_harvest_tick() {
    const double dt = s_.harvest_period_s;
    const double t1 = kernel_.now().to_seconds();
    for (auto& n : nodes_) {
      settle(*n);
      const auto r = energy::harvest_tick(n->buffer, harvest_, t1 - dt, dt);
      if (r.event == energy::BatteryEvent::BatteryCharged) post_battery_event(*n, EventKind::BatteryCharged);
    }
  }

  void on_peripheral_tick() {
    for (auto& n : nodes_) {
      if (!n->awake || n->action.mode == OperatingMode::Sleep) continue;
      settle(*n);
      start_op(*n, energy::PeripheralKind::Sense);
      if (n->action.mode == OperatingMode::Performance) {
        start_op(*n, energy::PeripheralKind::EinkRefresh);
        start_op(*n, energy::PeripheralKind::Localize);
      }
      refresh(*n);
    }
  }

  void on_trace_tick() {
    for (auto& n : nodes_) {
      settle(*n);
      record(*n);
    }
  }

  // ---- trace -----------------------------------------------------------

  void flush_trace(Node& n) {
    if (n.pending_trace) record(n);
  }

  void record(Node& n) {
    n.pending_trace = false;
    TraceRow row{kernel_.now().to_seconds(), n.buffer.remaining(), n.buffer.consumed(), n.buffer.harvested(),
                 n.action.mode,          n.action.modality,    n.owc.state(),         n.ble.state()};
    if (!n.m.trace.empty() && n.m.trace.back().t_s == row.t_s) n.m.trace.back() = row;
    else n.m.trace.push_back(row);
  }

  const Scenario& s_;
  energy::NodeCurrents currents_;
  energy::HarvestProfile harvest_;
  link::PollSchedule poll_;
  channel::Pose gateway_pose_;
  link::LinkState link_;
  energy::ActionEnergyConfig energy_cfg_;
  std::array<double, 2> throughput_{};
  sim::Kernel kernel_;
  std::vector<std::unique_ptr<Node>> nodes_;
  SimTime end_;
  SimDuration trace_period_;
  SimTime next_trace_;
  bool first_poll_ = true;
  double gw_idle_ma_ = 0.0;
  double gw_tx_ma_ = 0.0;
  double gw_airtime_s_ = 0.0;
};

}  // namespace

RunResult run(const Scenario& scenario, const energy::StateCurrentTable& calibration) {
  scenario.validate();
  Simulation sim(scenario, calibration);
  return sim.execute();
}

RunResult run(const Scenario& scenario) { return run(scenario, scenario_calibration(scenario)); }

}  // namespace riot::harness
