#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "swflow/linalg.hpp"

namespace swflow {

// Average dwell-time constraint: N(t, s) <= N0 + (t - s) / tau_d over every
// open window (s, t).
struct DwellTimeParams {
  double tau_d = 1.0;
  int N0 = 1;
};

// Piecewise-constant mode schedule. The first event at time 0 sets the
// initial mode; later events are switches. timer_rate and tau0 describe the
// jump-budget timer used to generate (or reconstruct) the signal.
struct SwitchingSignal {
  std::vector<std::pair<double, int>> events;  // (time, mode), modes 1-based
  double horizon = 0.0;
  double timer_rate = 1.0;
  double tau0 = -1.0;  // < 0: defaults to N0 on use

  void validate() const {
    if (events.empty() || events.front().first != 0.0)
      throw std::invalid_argument("SwitchingSignal: first event must be at time 0");
    for (std::size_t i = 1; i < events.size(); ++i)
      if (events[i].first <= events[i - 1].first)
        throw std::invalid_argument("SwitchingSignal: event times must be strictly increasing");
    if (events.back().first > horizon)
      throw std::invalid_argument("SwitchingSignal: event beyond horizon");
  }

  std::vector<double> switch_times() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < events.size(); ++i) out.push_back(events[i].first);
    return out;
  }
};

// Jump-budget timer state of the dwell-time automaton.
struct AutomatonState {
  double tau = 0.0;
  int sigma = 1;
};

struct AdtReport {
  bool valid = true;
  std::pair<double, double> worst_window{0.0, 0.0};
  double worst_excess = 0.0;  // max over windows of N - (N0 + (t-s)/tau_d)
};

// Checks the constraint over all switch-pair windows; for piecewise-constant
// signals the binding open windows shrink onto these pairs.
inline AdtReport validate_adt(const SwitchingSignal& signal, const DwellTimeParams& params) {
  signal.validate();
  AdtReport rep;
  const std::vector<double> sw = signal.switch_times();
  rep.worst_excess = -static_cast<double>(params.N0);  // empty-window baseline
  for (std::size_t i = 0; i < sw.size(); ++i) {
    for (std::size_t j = i; j < sw.size(); ++j) {
      const double count = static_cast<double>(j - i + 1);
      const double excess = count - (params.N0 + (sw[j] - sw[i]) / params.tau_d);
      if (excess > rep.worst_excess) {
        rep.worst_excess = excess;
        rep.worst_window = {sw[i], sw[j]};
      }
    }
  }
  rep.valid = rep.worst_excess <= 0.0;
  return rep;
}

// Simulates the dwell-time automaton on a candidate grid of period
// tau_d / 10: the timer grows at rate / tau_d (saturating at N0) and, when
// tau >= 1, a seeded coin decides whether to jump; each jump spends one unit
// of budget and moves to a uniformly drawn different mode.
inline SwitchingSignal generate_signal(const DwellTimeParams& params, int num_modes,
                                       double horizon, std::uint64_t seed, double rate,
                                       double jump_prob = 0.5, double tau0 = -1.0) {
  if (rate < 0.0 || rate > 1.0)
    throw InvalidRate("generate_signal: rate must lie in [0, 1]");
  if (num_modes < 1) throw std::invalid_argument("generate_signal: need at least one mode");
  Rng rng(seed);
  SwitchingSignal signal;
  signal.horizon = horizon;
  signal.timer_rate = rate;
  signal.tau0 = tau0 < 0.0 ? static_cast<double>(params.N0) : tau0;

  AutomatonState st;
  st.tau = signal.tau0;
  st.sigma = 1;
  signal.events.emplace_back(0.0, st.sigma);
  if (num_modes == 1) return signal;

  // The timer is grown a hair slower than requested; boundary regrowth then
  // takes one extra grid tick, so the emitted schedule satisfies the dwell
  // bound with real slack instead of exact equality (which floating point
  // would sometimes tip over).
  const double rate_eff = rate * (1.0 - 1e-6);
  signal.timer_rate = rate_eff;
  const double grid = params.tau_d / 10.0;
  for (long k = 1; k * grid <= horizon; ++k) {
    const double t = k * grid;
    st.tau = std::min(static_cast<double>(params.N0), st.tau + rate_eff * grid / params.tau_d);
    if (st.tau >= 1.0 && rng.bernoulli(jump_prob)) {
      st.tau -= 1.0;
      int next = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(num_modes - 1)));
      if (next >= st.sigma) ++next;
      st.sigma = next;
      signal.events.emplace_back(t, st.sigma);
    }
  }
  return signal;
}

// Right-continuous mode lookup.
inline int mode_at(const SwitchingSignal& signal, double t) {
  if (t < 0.0 || t > signal.horizon)
    throw OutOfHorizon("mode_at: time outside [0, horizon]");
  int mode = signal.events.front().second;
  for (const auto& [time, sigma] : signal.events) {
    if (time <= t)
      mode = sigma;
    else
      break;
  }
  return mode;
}

}  // namespace swflow
