#pragma once

#include <cmath>
#include <memory>
#include <variant>
#include <vector>

#include "swflow/controllers.hpp"
#include "swflow/cost.hpp"
#include "swflow/disturbance.hpp"
#include "swflow/plant.hpp"
#include "swflow/switching.hpp"

namespace swflow {

struct HybridTime {
  double t = 0.0;
  long j = 0;
};

enum class JumpKind { plant_switch, controller_reset };

struct JumpRecord {
  HybridTime when;  // j is the post-jump index
  JumpKind kind = JumpKind::plant_switch;
  std::size_t pre_sample = 0;
  std::size_t post_sample = 0;
};

// Closed-loop trajectory sampled over hybrid time. Each sample state is the
// concatenation [x; controller block; tau; sigma] where the controller block
// is u (gradient) or u1, u2, u3 (momentum controller).
struct HybridArc {
  int n = 0, m = 0, p = 0;
  bool nesterov = false;
  std::vector<HybridTime> times;
  std::vector<Vector> states;
  std::vector<JumpRecord> jumps;
  bool diverged = false;
  double divergence_time = 0.0;

  std::size_t size() const { return times.size(); }
  Vector x(std::size_t i) const { return states[i].head(n); }
  Vector u1(std::size_t i) const { return states[i].segment(n, m); }
  Vector u2(std::size_t i) const { return states[i].segment(n + m, m); }
  double u3(std::size_t i) const { return states[i](n + 2 * m); }
  double tau(std::size_t i) const { return states[i](states[i].size() - 2); }
  int sigma(std::size_t i) const { return static_cast<int>(states[i](states[i].size() - 1)); }
  long plant_switch_count() const {
    long c = 0;
    for (const auto& jp : jumps)
      if (jp.kind == JumpKind::plant_switch) ++c;
    return c;
  }
  long controller_reset_count() const { return static_cast<long>(jumps.size()) - plant_switch_count(); }
};

struct GradientConfig {
  Vector u0;  // defaults to zero
};

struct NesterovConfig {
  NesterovParams params;
  Vector u1_0, u2_0;   // default zero
  double u3_0 = -1.0;  // < 0: defaults to delta
};

using ControllerConfig = std::variant<GradientConfig, NesterovConfig>;

struct IntegratorConfig {
  double step = 1e-3;
  double horizon = 10.0;
  double record_interval = 0.0;  // <= 0: record every step
};

struct CertificateOptions {
  double varrho = -1.0;  // < 0: midpoint of the admissible window
  double theta_override = -1.0;
};

struct Scenario {
  SwitchedPlant plant;
  std::shared_ptr<Cost> cost;
  ControllerConfig controller;
  SwitchingSignal signal;
  DwellTimeParams dwell;
  std::vector<double> epsilon;  // one per mode
  DisturbanceSignal disturbance = DisturbanceSignal::constant(Vector::Zero(1));
  IntegratorConfig integrator;
  Vector x0;  // defaults to zero
  CertificateOptions certificates;
  double quartic_ball_radius = 2.0;  // local-constant ball for quartic costs

  bool is_nesterov() const { return std::holds_alternative<NesterovConfig>(controller); }

  double epsilon_for(int mode_index_1based) const {
    return epsilon.at(static_cast<std::size_t>(mode_index_1based - 1));
  }
};

namespace detail {

struct SimState {
  Vector packed;  // [x; controller block]
  int n, m;
  bool nesterov;

  Eigen::VectorBlock<Vector> x() { return packed.head(n); }
  Eigen::VectorBlock<Vector> uctrl() { return packed.tail(packed.size() - n); }
};

inline Vector closed_loop_field(const Scenario& sc, const SteadyStateMap& map, int sigma,
                                double t, const Vector& packed, int n, int m) {
  const LtiMode& mode = sc.plant.modes[static_cast<std::size_t>(sigma - 1)];
  const Vector w = sc.disturbance.value(t);
  Vector deriv(packed.size());
  const auto x = packed.head(n);
  const Vector y = sc.plant.C * x + sc.plant.D * w;
  const double eps = sc.epsilon_for(sigma);
  if (std::holds_alternative<GradientConfig>(sc.controller)) {
    const auto u = packed.segment(n, m);
    deriv.head(n) = (mode.A * x + mode.B * u + mode.E * w) / eps;
    deriv.segment(n, m) = gradient_flow_field(*sc.cost, map, u, y);
  } else {
    const auto& cfg = std::get<NesterovConfig>(sc.controller);
    NesterovControllerState st{packed.segment(n, m), packed.segment(n + m, m),
                               packed(n + 2 * m)};
    deriv.head(n) = (mode.A * x + mode.B * st.u1 + mode.E * w) / eps;
    auto d = nesterov_flow_field(*sc.cost, map, st, cfg.params, y);
    deriv.segment(n, m) = d.du1;
    deriv.segment(n + m, m) = d.du2;
    deriv(n + 2 * m) = d.du3;
  }
  return deriv;
}

inline void rk4_step(const Scenario& sc, const SteadyStateMap& map, int sigma, double t,
                     double dt, Vector& packed, int n, int m) {
  const Vector k1 = closed_loop_field(sc, map, sigma, t, packed, n, m);
  const Vector k2 = closed_loop_field(sc, map, sigma, t + 0.5 * dt, packed + 0.5 * dt * k1, n, m);
  const Vector k3 = closed_loop_field(sc, map, sigma, t + 0.5 * dt, packed + 0.5 * dt * k2, n, m);
  const Vector k4 = closed_loop_field(sc, map, sigma, t + dt, packed + dt * k3, n, m);
  packed += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

// Integrates the closed loop over [0, horizon]. Integration steps are split
// exactly at plant-switch times (known from the signal) and controller-reset
// times (predicted exactly from the timer), so no event is crossed inside a
// step. A non-finite state ends the arc early with the divergence flag set;
// the arc up to that point is returned.
inline HybridArc simulate(const Scenario& sc) {
  sc.plant.validate();
  sc.signal.validate();
  const int n = sc.plant.n(), m = sc.plant.m(), p = sc.plant.p();
  const int S = sc.plant.num_modes();
  if (static_cast<int>(sc.epsilon.size()) != S)
    throw DimensionMismatch("simulate: need one epsilon per mode");
  double eps_min = sc.epsilon.front();
  for (double e : sc.epsilon) {
    if (!(e > 0.0)) throw std::invalid_argument("simulate: epsilon must be positive");
    eps_min = std::min(eps_min, e);
  }
  const double h = sc.integrator.step;
  if (h > eps_min / 10.0 + 1e-15)
    throw StiffnessBudgetExceeded("simulate: step exceeds min(epsilon)/10");

  const SteadyStateMap map = steady_state_maps(sc.plant.modes.front(), sc.plant.C, sc.plant.D);

  HybridArc arc;
  arc.n = n;
  arc.m = m;
  arc.p = p;
  arc.nesterov = sc.is_nesterov();

  // restart condition must hold before simulating with momentum resets
  const NesterovConfig* ncfg = std::get_if<NesterovConfig>(&sc.controller);
  if (ncfg != nullptr) {
    ncfg->params.validate();
    if (ncfg->params.r0 && !ncfg->params.unbounded_timer) {
      if (const auto* quad = dynamic_cast<const QuadraticCost*>(sc.cost.get())) {
        const double mu = cost_constants(*quad, map).mu;
        const auto& pr = ncfg->params;
        if (!(pr.Delta * pr.Delta - pr.delta * pr.delta > 2.0 * pr.rho / (pr.kappa * mu)))
          throw RestartConditionViolated(
              "simulate: Delta^2 - delta^2 <= 2 rho / (kappa mu) with r0 = 1");
      }
    }
  }

  // initial packed state
  const int ctrl_dim = arc.nesterov ? 2 * m + 1 : m;
  Vector packed(n + ctrl_dim);
  packed.head(n) = sc.x0.size() == n ? sc.x0 : Vector::Zero(n);
  if (arc.nesterov) {
    packed.segment(n, m) = ncfg->u1_0.size() == m ? ncfg->u1_0 : Vector::Zero(m);
    packed.segment(n + m, m) = ncfg->u2_0.size() == m ? ncfg->u2_0 : Vector::Zero(m);
    packed(n + 2 * m) = ncfg->u3_0 > 0.0 ? ncfg->u3_0 : ncfg->params.delta;
  } else {
    const auto& gcfg = std::get<GradientConfig>(sc.controller);
    packed.segment(n, m) = gcfg.u0.size() == m ? gcfg.u0 : Vector::Zero(m);
  }

  const double T = sc.integrator.horizon;
  const double rec = sc.integrator.record_interval > 0.0 ? sc.integrator.record_interval : h;

  double t = 0.0;
  long j = 0;
  int sigma = sc.signal.events.front().second;
  double tau = sc.signal.tau0 >= 0.0 ? sc.signal.tau0 : static_cast<double>(sc.dwell.N0);
  std::size_t next_switch = 1;  // index into signal.events

  auto record = [&]() {
    Vector full(packed.size() + 2);
    full.head(packed.size()) = packed;
    full(packed.size()) = tau;
    full(packed.size() + 1) = static_cast<double>(sigma);
    arc.times.push_back({t, j});
    arc.states.push_back(std::move(full));
  };
  record();

  double next_record = rec;
  const double time_eps = 1e-12 * std::max(1.0, T);

  while (t < T - time_eps && !arc.diverged) {
    // next event: plant switch or controller reset, whichever is first
    double t_switch = next_switch < sc.signal.events.size()
                          ? sc.signal.events[next_switch].first
                          : std::numeric_limits<double>::infinity();
    double t_reset = std::numeric_limits<double>::infinity();
    if (arc.nesterov && !ncfg->params.unbounded_timer) {
      NesterovControllerState st{packed.segment(n, m), packed.segment(n + m, m),
                                 packed(n + 2 * m)};
      t_reset = next_controller_jump_time(st, ncfg->params, t);
    }
    const double t_stop = std::min({t_switch, t_reset, T});

    // flow up to t_stop with steps of size h (shorter final step)
    const double tau_seg_start = tau;
    const double t_seg_start = t;
    long step_count = 0;
    while (t < t_stop - time_eps) {
      const double t_next = std::min(t_seg_start + static_cast<double>(step_count + 1) * h, t_stop);
      detail::rk4_step(sc, map, sigma, t, t_next - t, packed, n, m);
      t = t_next;
      ++step_count;
      tau = std::min(static_cast<double>(sc.dwell.N0),
                     tau_seg_start + sc.signal.timer_rate * (t - t_seg_start) / sc.dwell.tau_d);
      if (!packed.allFinite()) {
        arc.diverged = true;
        arc.divergence_time = t;
        break;
      }
      if (t >= next_record - time_eps || t >= t_stop - time_eps) {
        record();
        while (next_record <= t + time_eps) next_record += rec;
      }
    }
    if (arc.diverged) break;
    t = t_stop;

    // process jumps due at t_stop: plant switch first, then controller reset
    if (t_switch <= t_stop + time_eps && next_switch < sc.signal.events.size()) {
      const std::size_t pre = arc.size() - 1;
      sigma = sc.signal.events[next_switch].second;
      tau = std::max(0.0, tau - 1.0);
      ++next_switch;
      ++j;
      record();
      arc.jumps.push_back({{t, j}, JumpKind::plant_switch, pre, arc.size() - 1});
    }
    if (t_reset <= t_stop + time_eps) {
      const std::size_t pre = arc.size() - 1;
      NesterovControllerState st{packed.segment(n, m), packed.segment(n + m, m),
                                 packed(n + 2 * m)};
      st.u3 = ncfg->params.Delta;  // exact event alignment
      NesterovControllerState post = nesterov_jump(st, ncfg->params);
      packed.segment(n, m) = post.u1;
      packed.segment(n + m, m) = post.u2;
      packed(n + 2 * m) = post.u3;
      ++j;
      record();
      arc.jumps.push_back({{t, j}, JumpKind::controller_reset, pre, arc.size() - 1});
    }
  }
  return arc;
}

// Distance to the optimal trajectory, per sample: || (x, u1) - (x*, u*) ||
// with u*(t) from the pointwise optimizer and x*(t) the equilibrium of the
// active mode.
inline std::vector<std::pair<HybridTime, double>> tracking_error(
    const HybridArc& arc, const Cost& cost, const SwitchedPlant& plant,
    const DisturbanceSignal& disturbance) {
  const SteadyStateMap map = steady_state_maps(plant.modes.front(), plant.C, plant.D);
  std::vector<std::pair<HybridTime, double>> series;
  series.reserve(arc.size());
  for (std::size_t i = 0; i < arc.size(); ++i) {
    const Vector w = disturbance.value(arc.times[i].t);
    const Vector ustar = optimal_input(cost, map, w);
    const Vector xstar =
        equilibrium_state(plant.modes[static_cast<std::size_t>(arc.sigma(i) - 1)], ustar, w);
    const double err = std::sqrt((arc.x(i) - xstar).squaredNorm() +
                                 (arc.u1(i) - ustar).squaredNorm());
    series.emplace_back(arc.times[i], err);
  }
  return series;
}

// f(u1(t,j), w(t)) - f(u*(t), w(t)) per sample.
inline std::vector<std::pair<HybridTime, double>> suboptimality(
    const HybridArc& arc, const Cost& cost, const SteadyStateMap& map,
    const DisturbanceSignal& disturbance) {
  std::vector<std::pair<HybridTime, double>> series;
  series.reserve(arc.size());
  for (std::size_t i = 0; i < arc.size(); ++i) {
    const Vector w = disturbance.value(arc.times[i].t);
    const Vector ustar = optimal_input(cost, map, w);
    const double gap = f_value(cost, map, arc.u1(i), w) - f_value(cost, map, ustar, w);
    series.emplace_back(arc.times[i], gap);
  }
  return series;
}

}  // namespace swflow
