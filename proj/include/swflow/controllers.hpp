#pragma once

#include "swflow/cost.hpp"
#include "swflow/linalg.hpp"

namespace swflow {

struct GradientControllerState {
  Vector u;
};

// Momentum controller state: u1 drives the plant, u2 carries momentum, u3 is
// the restart timer confined to [delta, Delta].
struct NesterovControllerState {
  Vector u1;
  Vector u2;
  double u3 = 0.0;
};

struct NesterovParams {
  double kappa = 1.0;
  double rho = 1.0;   // <= 4
  double delta = 1.0;
  double Delta = 2.0;
  bool r0 = true;     // true: reset momentum to u1 at restarts
  bool unbounded_timer = false;  // disables the jump set (the "Delta = inf" arm)

  void validate() const {
    if (!(kappa > 0.0) || !(rho > 0.0) || rho > 4.0)
      throw std::invalid_argument("NesterovParams: need kappa > 0 and rho in (0, 4]");
    if (!(Delta > delta) || !(delta > 0.0))
      throw std::invalid_argument("NesterovParams: need Delta > delta > 0");
  }
};

// u' = -grad h(u) - G^T grad g(y), driven by the measured output y rather
// than the steady-state model output.
inline Vector gradient_flow_field(const Cost& cost, const SteadyStateMap& map, const Vector& u,
                                  const Vector& y) {
  if (u.size() != map.G.cols() || y.size() != map.G.rows())
    throw DimensionMismatch("gradient_flow_field: dimension mismatch");
  return -(cost.grad_h(u) + map.G.transpose() * cost.grad_g(y));
}

struct NesterovDerivative {
  Vector du1;
  Vector du2;
  double du3 = 1.0;
};

inline NesterovDerivative nesterov_flow_field(const Cost& cost, const SteadyStateMap& map,
                                              const NesterovControllerState& state,
                                              const NesterovParams& params, const Vector& y) {
  if (!params.unbounded_timer &&
      (state.u3 < params.delta - 1e-9 || state.u3 > params.Delta + 1e-9))
    throw TimerOutOfRange("nesterov_flow_field: timer outside [delta, Delta]");
  if (state.u1.size() != map.G.cols() || y.size() != map.G.rows())
    throw DimensionMismatch("nesterov_flow_field: dimension mismatch");
  NesterovDerivative d;
  d.du1 = (params.rho / state.u3) * (state.u2 - state.u1);
  d.du2 = -(params.kappa * state.u3 / params.rho) *
          (cost.grad_h(state.u1) + map.G.transpose() * cost.grad_g(y));
  d.du3 = 1.0;
  return d;
}

// Reset map: u1 unchanged, u2 reset to u1 when r0 is set, timer rescaled to
// delta. Enabled on the jump set u3 = Delta (with a small alignment
// tolerance).
inline NesterovControllerState nesterov_jump(const NesterovControllerState& state,
                                             const NesterovParams& params) {
  if (state.u3 < params.Delta - 1e-12)
    throw JumpNotEnabled("nesterov_jump: timer has not reached Delta");
  NesterovControllerState next;
  next.u1 = state.u1;
  next.u2 = params.r0 ? state.u1 : state.u2;
  next.u3 = (params.delta / params.Delta) * state.u3;
  return next;
}

// Exact because du3/dt = 1 during flows.
inline double next_controller_jump_time(const NesterovControllerState& state,
                                        const NesterovParams& params, double t_now) {
  return t_now + (params.Delta - state.u3);
}

}  // namespace swflow
