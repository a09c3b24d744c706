#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "swflow/certificates.hpp"
#include "swflow/generate.hpp"
#include "swflow/scenario_io.hpp"
#include "swflow/sim.hpp"

namespace swflow {
namespace experiments {

// ---------------------------------------------------------------------------
// Named instances
// ---------------------------------------------------------------------------

// Two-mode traffic-cell plant. Mode 1 is the free-flow regime, mode 2 the
// congested one. With controlled = true the controllable inflow u enters
// both cells (B = [1; 1]) and mode 2 reuses the mode-1 equilibrium geometry
// (B2 = A2 A1^{-1} B1, E2 = A2 A1^{-1} E1) so that all modes share
// equilibria; with controlled = false the inflows are fully exogenous.
inline SwitchedPlant build_ctm(bool controlled) {
  const double d1 = 0.79, d2 = 0.67, s1 = 1.33, s2 = 0.71, r12 = 0.79, r21 = 0.47;
  Matrix A1(2, 2), A2(2, 2);
  A1 << -d1 + r21 * s1, 0.0,
        -s1 + r12 * d1, -(1.0 - r21) * d2;
  A2 << -(1.0 - r12) * d1, -s2 + r21 * d2,
        0.0, -d2 + r12 * s2;
  SwitchedPlant plant;
  LtiMode m1, m2;
  m1.A = A1;
  m2.A = A2;
  if (controlled) {
    m1.B = Matrix::Ones(2, 1);
    m1.E = Matrix::Identity(2, 2);
    Eigen::FullPivLU<Matrix> lu(A1);
    m2.B = A2 * lu.solve(m1.B);
    m2.E = A2 * lu.solve(m1.E);
  } else {
    m1.B = Matrix::Zero(2, 1);
    m1.E = Matrix::Identity(2, 2);
    m2.B = Matrix::Zero(2, 1);
    m2.E = Matrix::Identity(2, 2);
  }
  plant.modes = {m1, m2};
  plant.C = Matrix::Identity(2, 2);
  plant.D = Matrix::Zero(2, 2);
  return plant;
}

// Momentum-controller parameters derived from the strong-convexity modulus.
// The window on kappa keeps (a) the restart contraction at the Delta - delta
// branch of the c constant, (b) the V1 reset contraction at least e^{-c},
// and (c) the envelope rate at the first branch of b.
inline NesterovParams derive_nesterov_params(double mu, double rho = 2.0, double delta = 0.25,
                                             double Delta = 2.5) {
  // a smaller delta widens the feasible kappa window, so shrink it until
  // the interval closes
  for (int iter = 0; iter < 60; ++iter) {
    const double window = std::exp(delta - Delta) * Delta * Delta - delta * delta;
    const double kap_lo = 2.0 * rho / (mu * window);
    const double kap_hi =
        std::min(2.0 * rho / (delta * mu * mu), 2.0 * rho * rho / (delta * mu * Delta));
    if (kap_lo <= kap_hi) {
      NesterovParams params;
      params.rho = rho;
      params.delta = delta;
      params.Delta = Delta;
      params.kappa = std::sqrt(kap_lo * kap_hi);
      params.r0 = true;
      return params;
    }
    delta *= 0.8;
  }
  throw ConvergenceFailure("derive_nesterov_params: no feasible kappa window");
}

namespace detail {

// mode-1 gains normalized to unit spectral norm, shared-equilibrium modes
// rederived from them
inline SwitchedPlant normalized_plant(Rng& rng, int n, int m, int p, int q, int num_modes,
                                      double margin = 1.0) {
  SwitchedPlant plant;
  LtiMode mode1;
  mode1.A = random_hurwitz(rng, n, margin);
  mode1.B = rng.matrix(n, m);
  mode1.B /= spectral_norm(mode1.B);
  mode1.E = rng.matrix(n, q);
  mode1.E /= spectral_norm(mode1.E);
  plant.modes.push_back(mode1);
  Eigen::FullPivLU<Matrix> lu(mode1.A);
  for (int k = 1; k < num_modes; ++k) {
    LtiMode mk;
    mk.A = random_hurwitz(rng, n, margin);
    mk.B = mk.A * lu.solve(mode1.B);
    mk.E = mk.A * lu.solve(mode1.E);
    plant.modes.push_back(mk);
  }
  plant.C = rng.matrix(p, n);
  plant.C /= spectral_norm(plant.C);
  plant.D = rng.matrix(p, q) * 0.2;
  return plant;
}

inline std::vector<double> half_eps_bars(const GradientCertificate& cert) {
  std::vector<double> eps;
  for (const auto& mc : cert.modes) eps.push_back(mc.eps_bar / 2.0);
  return eps;
}

// Rescales the output map until the largest per-mode bound lands in
// [lo, hi]: eps_bar scales as 1/||C||^2, so this pins the benchmark in a
// genuinely two-time-scale regime (a huge eps_bar would make "eps_bar / 2"
// slower than the plant itself).
inline GradientCertificate normalize_eps_bar(SwitchedPlant& plant, std::shared_ptr<Cost>& cost,
                                             double lo = 0.02, double hi = 0.3) {
  for (int iter = 0; iter < 40; ++iter) {
    const SteadyStateMap map = steady_state_maps(plant.modes[0], plant.C, plant.D);
    const CostConstants cc = cost_constants(dynamic_cast<const QuadraticCost&>(*cost), map);
    GradientCertificate cert = gradient_certificate(plant, map, cc, {}, DwellTimeParams{1.0, 1});
    double worst = 0.0;
    for (const auto& mc : cert.modes) worst = std::max(worst, mc.eps_bar);
    if (worst > hi) {
      plant.C *= 1.3;
      plant.D *= 1.3;
    } else if (worst < lo) {
      plant.C /= 1.3;
      plant.D /= 1.3;
    } else {
      return cert;
    }
  }
  throw ConvergenceFailure("normalize_eps_bar: could not land eps_bar in range");
}

inline double limsup_tail(const std::vector<std::pair<HybridTime, double>>& series,
                          double t_from) {
  double v = 0.0;
  for (const auto& [ht, e] : series)
    if (ht.t >= t_from) v = std::max(v, e);
  return v;
}

}  // namespace detail

// Compact seeded gradient-flow benchmark. num_modes = 1 gives the
// regulation instance, 2 the switched one. epsilon is eps_bar/2 per mode,
// tau_d twice the dwell bound.
inline Scenario gradient_bench(std::uint64_t seed, int num_modes) {
  Rng rng(seed);
  Scenario sc;
  sc.plant = detail::normalized_plant(rng, 4, 2, 2, 2, num_modes);
  sc.cost = std::make_shared<QuadraticCost>(rng.spd(2, 0.5, 1.5), rng.spd(2, 0.4, 1.0),
                                            rng.vector(2));
  sc.controller = GradientConfig{};
  GradientCertificate cert = detail::normalize_eps_bar(sc.plant, sc.cost);
  sc.epsilon = detail::half_eps_bars(cert);
  sc.dwell.N0 = 2;
  sc.dwell.tau_d = std::max(2.0 * cert.tau_d_min, 1.0);
  const double horizon = num_modes > 1 ? std::max(12.0, 1.5 * sc.dwell.tau_d) : 12.0;
  if (num_modes > 1) {
    sc.signal = generate_signal(sc.dwell, num_modes, horizon, seed + 17, 1.0, 0.6);
  } else {
    sc.signal.events = {{0.0, 1}};
    sc.signal.horizon = horizon;
  }
  sc.disturbance = DisturbanceSignal::constant(rng.vector(2, -0.5, 0.5));
  const double eps_min = *std::min_element(sc.epsilon.begin(), sc.epsilon.end());
  sc.integrator.step = eps_min / 10.0;
  sc.integrator.horizon = horizon;
  sc.integrator.record_interval = horizon / 600.0;
  return sc;
}

// Compact seeded momentum-controller benchmark (single mode, normalized
// output coupling, mu scaled to 1.5, controller parameters derived).
inline Scenario nesterov_bench(std::uint64_t seed) {
  Rng rng(seed);
  Scenario sc;
  sc.plant = detail::normalized_plant(rng, 2, 1, 1, 1, 1);
  sc.plant.D = Matrix::Zero(1, 1);
  const SteadyStateMap map = steady_state_maps(sc.plant.modes[0], sc.plant.C, sc.plant.D);
  Matrix R = Matrix::Constant(1, 1, 1.0), Qy = Matrix::Constant(1, 1, 0.25);
  QuadraticCost raw(R, Qy, Vector::Constant(1, 0.8));
  const double scale = 1.5 / cost_constants(raw, map).mu;
  sc.cost = std::make_shared<QuadraticCost>(scale * R, scale * Qy, Vector::Constant(1, 0.8));
  const auto& quad = dynamic_cast<const QuadraticCost&>(*sc.cost);
  const CostConstants cc = cost_constants(quad, map);

  NesterovParams params = derive_nesterov_params(cc.mu);
  NesterovCertificate cert = nesterov_certificate(sc.plant, map, cc, params);
  const double eps = cert.modes[0].eps_bar / 2.0;
  sc.controller = NesterovConfig{params, Vector::Constant(1, 2.0), Vector::Constant(1, 2.0), -1.0};
  sc.signal.events = {{0.0, 1}};
  sc.signal.horizon = 25.0;
  sc.epsilon = {eps};
  sc.disturbance = DisturbanceSignal::constant(Vector::Constant(1, 0.3));
  sc.integrator = {eps / 10.0, 25.0, 0.02};
  return sc;
}

// Scalar quartic-cost instance. With excitation the disturbance shakes the
// plant but cancels in the steady-state output (D = C A^{-1} E, so H = 0);
// the tracking residual is then dominated by the epsilon-scaled boundary
// layer, the quantity the practical time-scale bound controls.
inline Scenario quartic_bench(bool excitation) {
  const double egain = 60.0;
  Scenario sc;
  LtiMode mode{Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, 1.0),
               Matrix::Constant(1, 1, egain)};
  sc.plant.modes = {mode};
  sc.plant.C = Matrix::Identity(1, 1);
  sc.plant.D = Matrix::Constant(1, 1, -egain);
  sc.cost = std::make_shared<QuarticCost>(0.5);
  sc.quartic_ball_radius = 0.5;
  NesterovParams params{8.0, 2.0, 1.0, 2.0, false};
  sc.controller =
      NesterovConfig{params, Vector::Constant(1, 0.25), Vector::Constant(1, 0.25), -1.0};
  sc.signal.events = {{0.0, 1}};
  if (excitation) {
    sc.disturbance =
        DisturbanceSignal::sinusoid(Vector::Zero(1), Vector::Constant(1, 0.5), 1.0);
  } else {
    sc.disturbance = DisturbanceSignal::constant(Vector::Zero(1));
  }
  const SteadyStateMap map = steady_state_maps(mode, sc.plant.C, sc.plant.D);
  const CostConstants cc =
      quartic_constants(dynamic_cast<const QuarticCost&>(*sc.cost), map, 0.5, 0.5);  // nu0 = ball
  StabilityCertificate stab = mode_certificate(mode);
  const double eps0 = nesterov_practical_epsilon(stab, mode, sc.plant.C, map, cc, params);
  sc.epsilon = {eps0};
  const double horizon = excitation ? 200.0 : 600.0;
  sc.signal.horizon = horizon;
  sc.integrator = {eps0 / 10.0, horizon, 0.05};
  return sc;
}

// Large benchmark instance: two modes, n = 10 states, m = 5 inputs,
// p = 5 outputs, q = 6 disturbances, quadratic cost, certificate-derived
// defaults (epsilon = eps_bar/2, tau_d twice the dwell bound).
inline Scenario build_random_instance(std::uint64_t seed) {
  Rng rng(seed);
  Scenario sc;
  sc.plant = detail::normalized_plant(rng, 10, 5, 5, 6, 2);
  sc.cost = std::make_shared<QuadraticCost>(rng.spd(5, 0.5, 1.5), rng.spd(5, 0.4, 1.0),
                                            rng.vector(5));
  sc.controller = GradientConfig{};
  GradientCertificate cert = detail::normalize_eps_bar(sc.plant, sc.cost);
  sc.epsilon = detail::half_eps_bars(cert);
  sc.dwell.N0 = 2;
  sc.dwell.tau_d = 2.0 * cert.tau_d_min;
  const double horizon = std::max(10.0, 1.2 * sc.dwell.tau_d);
  sc.signal = generate_signal(sc.dwell, 2, horizon, seed + 17, 1.0, 0.6);
  sc.disturbance = DisturbanceSignal::constant(rng.vector(6, -0.5, 0.5));
  const double eps_min = *std::min_element(sc.epsilon.begin(), sc.epsilon.end());
  sc.integrator.step = eps_min / 10.0;
  sc.integrator.horizon = horizon;
  sc.integrator.record_interval = horizon / 400.0;
  return sc;
}

// ---------------------------------------------------------------------------
// Experiment execution and summaries
// ---------------------------------------------------------------------------

struct Summary {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(const std::string& key, double value) { entries.emplace_back(key, format_double(value)); }
  void add(const std::string& key, const std::string& value) { entries.emplace_back(key, value); }
  void add(const std::string& key, bool value) { entries.emplace_back(key, value ? "true" : "false"); }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    for (const auto& [k, v] : entries) out << k << " = " << v << "\n";
  }
  std::string str() const {
    std::ostringstream os;
    for (const auto& [k, v] : entries) os << k << " = " << v << "\n";
    return os.str();
  }
};

namespace detail {

inline void emit_arc(const std::string& out_dir, const std::string& name, const Scenario& sc,
                     const HybridArc& arc, const ArcSeries& series) {
  if (out_dir.empty()) return;
  std::filesystem::create_directories(out_dir);
  write_arc_csv_file(out_dir + "/" + name + ".csv", arc, sc.plant, sc.disturbance, series);
}

inline ArcSeries basic_series(const Scenario& sc, const HybridArc& arc) {
  ArcSeries series;
  const SteadyStateMap map = steady_state_maps(sc.plant.modes[0], sc.plant.C, sc.plant.D);
  for (const auto& [ht, e] : tracking_error(arc, *sc.cost, sc.plant, sc.disturbance))
    series.err_track.push_back(e);
  for (const auto& [ht, g] : suboptimality(arc, *sc.cost, map, sc.disturbance))
    series.f_gap.push_back(g);
  return series;
}

}  // namespace detail

// Single-mode exponential regulation (10 seeded runs): envelope with
// a0 = sqrt(abar/aunder), b0 = 2 mu^2 / ell, c0 = d0 = 0.
struct GradRegulationResult {
  int scenarios = 0;
  int envelope_failures = 0;
  double worst_violation = 0.0;
  double worst_final_error = 0.0;
};

inline GradRegulationResult run_grad_regulation(std::uint64_t seed, const std::string& out_dir) {
  GradRegulationResult res;
  Summary summary;
  struct ArmOutcome {
    EnvelopeReport rep;
    EissCoefficients co;
    double final_error = 0.0;
  };
  auto arm = [&](int k) -> ArmOutcome {
    Scenario sc = gradient_bench(seed + static_cast<std::uint64_t>(k), 1);
    const SteadyStateMap map = steady_state_maps(sc.plant.modes[0], sc.plant.C, sc.plant.D);
    const CostConstants cc =
        cost_constants(dynamic_cast<const QuadraticCost&>(*sc.cost), map);
    GradientCertificate cert = gradient_certificate(sc.plant, map, cc, sc.epsilon, sc.dwell);
    EissCoefficients co = gradient_eiss_coeffs(cert, cc, sc.dwell, 0.0, false);
    co.d0 = 0.0;  // constant w

    HybridArc arc = simulate(sc);
    auto errs = tracking_error(arc, *sc.cost, sc.plant, sc.disturbance);
    auto rep = eiss_envelope_check(errs, co, errs.front().second, 0.0);
    ArcSeries series = detail::basic_series(sc, arc);
    for (std::size_t i = 0; i < arc.size(); ++i)
      series.envelope.push_back(co.a0 * std::exp(-0.5 * co.b0 * arc.times[i].t) *
                                errs.front().second);
    detail::emit_arc(out_dir, "arm" + std::to_string(k), sc, arc, series);
    return {rep, co, errs.back().second};
  };
  // arms are independent jobs with per-arm output files
  std::vector<std::future<ArmOutcome>> jobs;
  for (int k = 0; k < 10; ++k) jobs.push_back(std::async(std::launch::async, arm, k));
  for (int k = 0; k < 10; ++k) {
    ArmOutcome out = jobs[static_cast<std::size_t>(k)].get();
    ++res.scenarios;
    if (!out.rep.holds) ++res.envelope_failures;
    res.worst_violation = std::max(res.worst_violation, out.rep.max_violation);
    res.worst_final_error = std::max(res.worst_final_error, out.final_error);
    summary.add("arm" + std::to_string(k) + ".envelope_holds", out.rep.holds);
    summary.add("arm" + std::to_string(k) + ".a0", out.co.a0);
    summary.add("arm" + std::to_string(k) + ".b0", out.co.b0);
  }
  summary.add("scenarios", static_cast<double>(res.scenarios));
  summary.add("envelope_failures", static_cast<double>(res.envelope_failures));
  summary.add("worst_violation", res.worst_violation);
  if (!out_dir.empty()) summary.write(out_dir + "/summary.txt");
  return res;
}

// Switched exponential regulation (10 seeded two-mode runs): envelope with
// the switched coefficients at the varrho-window midpoint, plus the dwell
// validity of the executed switching signal.
struct GradSwitchedResult {
  int scenarios = 0;
  int envelope_failures = 0;
  int adt_failures = 0;
  double worst_violation = 0.0;
  long total_switches = 0;
};

inline GradSwitchedResult run_grad_switched(std::uint64_t seed, const std::string& out_dir) {
  GradSwitchedResult res;
  Summary summary;
  struct ArmOutcome {
    EnvelopeReport rep;
    bool adt_valid = false;
    long switches = 0;
    double varrho = 0.0;
  };
  auto arm = [&](int k) -> ArmOutcome {
    Scenario sc = gradient_bench(seed + static_cast<std::uint64_t>(k), 2);
    const SteadyStateMap map = steady_state_maps(sc.plant.modes[0], sc.plant.C, sc.plant.D);
    const CostConstants cc =
        cost_constants(dynamic_cast<const QuadraticCost&>(*sc.cost), map);
    GradientCertificate cert = gradient_certificate(sc.plant, map, cc, sc.epsilon, sc.dwell);
    const double varrho = 0.5 * (cert.varrho_lo + cert.varrho_hi);
    EissCoefficients co = gradient_eiss_coeffs(cert, cc, sc.dwell, varrho, true);
    co.d0 = 0.0;  // constant w

    HybridArc arc = simulate(sc);
    auto errs = tracking_error(arc, *sc.cost, sc.plant, sc.disturbance);
    auto rep = eiss_envelope_check(errs, co, errs.front().second, 0.0);
    ArcSeries series = detail::basic_series(sc, arc);
    for (std::size_t i = 0; i < arc.size(); ++i)
      series.envelope.push_back(
          co.a0 *
          std::exp(-0.5 * (co.b0 * arc.times[i].t + co.c0 * static_cast<double>(arc.times[i].j))) *
          errs.front().second);
    detail::emit_arc(out_dir, "arm" + std::to_string(k), sc, arc, series);
    return {rep, validate_adt(sc.signal, sc.dwell).valid, arc.plant_switch_count(), varrho};
  };
  std::vector<std::future<ArmOutcome>> jobs;
  for (int k = 0; k < 10; ++k) jobs.push_back(std::async(std::launch::async, arm, k));
  for (int k = 0; k < 10; ++k) {
    ArmOutcome out = jobs[static_cast<std::size_t>(k)].get();
    ++res.scenarios;
    if (!out.rep.holds) ++res.envelope_failures;
    if (!out.adt_valid) ++res.adt_failures;
    res.worst_violation = std::max(res.worst_violation, out.rep.max_violation);
    res.total_switches += out.switches;
    summary.add("arm" + std::to_string(k) + ".envelope_holds", out.rep.holds);
    summary.add("arm" + std::to_string(k) + ".switches", static_cast<double>(out.switches));
    summary.add("arm" + std::to_string(k) + ".varrho", out.varrho);
  }
  summary.add("scenarios", static_cast<double>(res.scenarios));
  summary.add("envelope_failures", static_cast<double>(res.envelope_failures));
  summary.add("adt_failures", static_cast<double>(res.adt_failures));
  summary.add("total_switches", static_cast<double>(res.total_switches));
  if (!out_dir.empty()) summary.write(out_dir + "/summary.txt");
  return res;
}

// Tracking under a sinusoidal disturbance at two drift levels, plus a
// frozen-disturbance arm that must settle.
struct GradTrackingResult {
  double limsup_small = 0.0, limsup_large = 0.0;
  double bound_small = 0.0, bound_large = 0.0;
  double scaling_ratio = 0.0;  // limsup_large / limsup_small
  double frozen_final_error = 0.0;
};

inline GradTrackingResult run_grad_tracking(std::uint64_t seed, const std::string& out_dir) {
  GradTrackingResult res;
  Summary summary;
  Scenario base = gradient_bench(seed, 1);
  const SteadyStateMap map = steady_state_maps(base.plant.modes[0], base.plant.C, base.plant.D);
  const CostConstants cc =
      cost_constants(dynamic_cast<const QuadraticCost&>(*base.cost), map);
  GradientCertificate cert = gradient_certificate(base.plant, map, cc, base.epsilon, base.dwell);
  EissCoefficients co = gradient_eiss_coeffs(cert, cc, base.dwell, 0.0, false);

  const double omega = 1.0;
  const double horizon = 40.0;
  auto arm = [&](double sup_wdot, double freeze_time, const std::string& name) {
    Scenario sc = base;
    const double amp_total = sup_wdot / omega;
    Vector amp = Vector::Constant(2, amp_total / std::sqrt(2.0));
    sc.disturbance =
        DisturbanceSignal::sinusoid(Vector::Constant(2, 0.2), amp, omega, 0.0, freeze_time);
    sc.integrator.horizon = horizon;
    sc.signal.horizon = horizon;
    sc.integrator.record_interval = horizon / 2000.0;
    HybridArc arc = simulate(sc);
    auto errs = tracking_error(arc, *sc.cost, sc.plant, sc.disturbance);
    ArcSeries series = detail::basic_series(sc, arc);
    detail::emit_arc(out_dir, name, sc, arc, series);
    return std::make_pair(detail::limsup_tail(errs, 0.8 * horizon), errs.back().second);
  };

  res.limsup_small = arm(0.1, -1.0, "wdot_0p1").first;
  res.limsup_large = arm(1.0, -1.0, "wdot_1").first;
  res.bound_small = co.a0 * co.d0 * 0.1;
  res.bound_large = co.a0 * co.d0 * 1.0;
  res.scaling_ratio = res.limsup_large / res.limsup_small;
  // freeze at a derivative zero near mid-horizon
  const double tf = (std::floor(0.5 * horizon * omega / M_PI) * M_PI + 0.5 * M_PI) / omega;
  res.frozen_final_error = arm(1.0, tf, "frozen").second;

  summary.add("limsup_small", res.limsup_small);
  summary.add("limsup_large", res.limsup_large);
  summary.add("bound_small", res.bound_small);
  summary.add("bound_large", res.bound_large);
  summary.add("scaling_ratio", res.scaling_ratio);
  summary.add("frozen_final_error", res.frozen_final_error);
  summary.add("a0", co.a0);
  summary.add("d0", co.d0);
  if (!out_dir.empty()) summary.write(out_dir + "/summary.txt");
  return res;
}

// Restarted momentum regulation (one certified run) plus the Delta = inf
// instability arm on a shared instance.
struct NesterovRegulationResult {
  bool envelope_holds = false;
  bool jumps_contract = false;
  long resets = 0;
  double final_error = 0.0;
  // restart-necessity contrast
  double finite_arm_error = 0.0;
  double unbounded_arm_error = 0.0;
  bool unbounded_diverged = false;
};

inline NesterovRegulationResult run_nesterov_regulation(std::uint64_t seed,
                                                        const std::string& out_dir) {
  NesterovRegulationResult res;
  Summary summary;

  Scenario sc = nesterov_bench(seed);
  const auto& cfg = std::get<NesterovConfig>(sc.controller);
  const SteadyStateMap map = steady_state_maps(sc.plant.modes[0], sc.plant.C, sc.plant.D);
  const CostConstants cc = cost_constants(dynamic_cast<const QuadraticCost&>(*sc.cost), map);
  NesterovCertificate cert = nesterov_certificate(sc.plant, map, cc, cfg.params);
  EissCoefficients co = nesterov_eiss_coeffs(cert);

  HybridArc arc = simulate(sc);
  auto dist = nesterov_set_distance(arc, *sc.cost, sc.plant, sc.disturbance);
  auto rep = eiss_envelope_check(dist, co, dist.front().second, 0.0);
  LyapunovMonitor mon = make_nesterov_monitor(sc.plant, sc.cost, cert, cfg.params, 0.0);
  auto jrep = lyapunov_decrease_check(arc, mon, sc.disturbance, DecreaseCheck::jump_contraction,
                                      cert.c, 0.05);
  res.envelope_holds = rep.holds;
  res.jumps_contract = jrep.holds;
  res.resets = arc.controller_reset_count();
  res.final_error = dist.back().second;

  ArcSeries series = detail::basic_series(sc, arc);
  for (std::size_t i = 0; i < arc.size(); ++i)
    series.envelope.push_back(
        co.a0 *
        std::exp(-0.5 * (co.b0 * arc.times[i].t + co.c0 * static_cast<double>(arc.times[i].j))) *
        dist.front().second);
  detail::emit_arc(out_dir, "restarted", sc, arc, series);

  // restart-necessity contrast on a shared scalar instance
  Scenario fin;
  fin.plant.modes = {LtiMode{Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, 1.0),
                             Matrix::Constant(1, 1, 1.0)}};
  fin.plant.C = Matrix::Identity(1, 1);
  fin.plant.D = Matrix::Zero(1, 1);
  fin.cost = std::make_shared<QuadraticCost>(Matrix::Constant(1, 1, 0.5),
                                             Matrix::Constant(1, 1, 1.5),
                                             Vector::Constant(1, 0.7));
  fin.signal.events = {{0.0, 1}};
  fin.disturbance = DisturbanceSignal::constant(Vector::Constant(1, 0.2));
  const double eps = 0.05, horizon = 120.0;
  fin.epsilon = {eps};
  fin.signal.horizon = horizon;
  fin.integrator = {eps / 10.0, horizon, 0.1};
  NesterovParams pf{2.0, 1.0, 0.5, 2.0, true};
  fin.controller = NesterovConfig{pf, Vector::Constant(1, 1.5), Vector::Constant(1, 1.5), -1.0};
  HybridArc af = simulate(fin);
  auto ef = tracking_error(af, *fin.cost, fin.plant, fin.disturbance);
  res.finite_arm_error = ef.back().second;
  detail::emit_arc(out_dir, "finite_delta", fin, af, detail::basic_series(fin, af));

  Scenario unb = fin;
  NesterovParams pu{2.0, 1.0, 0.5, 2.0, false, true};
  unb.controller = NesterovConfig{pu, Vector::Constant(1, 1.5), Vector::Constant(1, 1.5), 0.5};
  HybridArc au = simulate(unb);
  auto eu = tracking_error(au, *unb.cost, unb.plant, unb.disturbance);
  res.unbounded_arm_error = eu.back().second;
  res.unbounded_diverged = au.diverged;
  detail::emit_arc(out_dir, "delta_inf", unb, au, detail::basic_series(unb, au));

  summary.add("envelope_holds", res.envelope_holds);
  summary.add("jumps_contract", res.jumps_contract);
  summary.add("resets", static_cast<double>(res.resets));
  summary.add("final_error", res.final_error);
  summary.add("finite_arm_error", res.finite_arm_error);
  summary.add("unbounded_arm_error", res.unbounded_arm_error);
  summary.add("unbounded_diverged", res.unbounded_diverged);
  summary.add("c", cert.c);
  summary.add("eps_bar", cert.modes[0].eps_bar);
  if (!out_dir.empty()) summary.write(out_dir + "/summary.txt");
  return res;
}

// Switched momentum run: weakly output-coupled instance so the certified
// dwell time is reachable at desk scale.
struct NesterovSwitchedResult {
  bool envelope_holds = false;
  bool adt_valid = false;
  long switches = 0;
  double tau_under = 0.0, tau_d = 0.0;
};

inline NesterovSwitchedResult run_nesterov_switched(std::uint64_t seed,
                                                    const std::string& out_dir) {
  NesterovSwitchedResult res;
  Summary summary;
  Rng rng(seed);
  Scenario sc;
  sc.plant = detail::normalized_plant(rng, 2, 1, 1, 1, 1);
  sc.plant.C *= 0.1;  // weak output coupling keeps eps_bar and b workable
  sc.plant.D = Matrix::Zero(1, 1);
  const SteadyStateMap map = steady_state_maps(sc.plant.modes[0], sc.plant.C, sc.plant.D);
  Matrix R = Matrix::Constant(1, 1, 1.0), Qy = Matrix::Constant(1, 1, 0.25);
  QuadraticCost raw(R, Qy, Vector::Constant(1, 0.8));
  const double scale = 1.5 / cost_constants(raw, map).mu;
  sc.cost = std::make_shared<QuadraticCost>(scale * R, scale * Qy, Vector::Constant(1, 0.8));
  const CostConstants cc = cost_constants(dynamic_cast<const QuadraticCost&>(*sc.cost), map);

  NesterovParams params = derive_nesterov_params(cc.mu);
  // mode 2 shares the equilibrium geometry already (normalized_plant)
  sc.plant.modes.push_back(sc.plant.modes[0]);
  sc.plant.modes[1].A = random_hurwitz(rng, 2, 1.0);
  Eigen::FullPivLU<Matrix> lu(sc.plant.modes[0].A);
  sc.plant.modes[1].B = sc.plant.modes[1].A * lu.solve(sc.plant.modes[0].B);
  sc.plant.modes[1].E = sc.plant.modes[1].A * lu.solve(sc.plant.modes[0].E);

  NesterovCertificate cert = nesterov_certificate(sc.plant, map, cc, params);
  res.tau_under = cert.tau_under;
  sc.dwell.N0 = 1;
  sc.dwell.tau_d = 2.0 * cert.tau_under;
  res.tau_d = sc.dwell.tau_d;
  double eps = kUnbounded;
  for (const auto& mc : cert.modes) eps = std::min(eps, mc.eps_bar / 2.0);
  sc.epsilon = {eps, eps};
  const double horizon = 1.2 * sc.dwell.tau_d;
  sc.signal = generate_signal(sc.dwell, 2, horizon, seed + 5, 1.0, 0.7);
  sc.signal.horizon = horizon;
  sc.controller = NesterovConfig{params, Vector::Constant(1, 1.0), Vector::Constant(1, 1.0), -1.0};
  sc.disturbance = DisturbanceSignal::constant(Vector::Constant(1, 0.2));
  sc.integrator = {eps / 10.0, horizon, horizon / 4000.0};

  HybridArc arc = simulate(sc);
  auto dist = nesterov_set_distance(arc, *sc.cost, sc.plant, sc.disturbance);
  // switched envelope: a0 with chatter weight and flow rate b - varrho/tau_d.
  // The jump credit is dropped (c0 = 0): over thousands of resets the
  // credited envelope underflows past the floating-point floor of the error
  // itself, so only the uncredited form is checkable numerically.
  const double lratio = std::log(cert.a_bar / cert.a_under);
  const double varrho = std::min(0.5 * (lratio + cert.b * sc.dwell.tau_d), 2.0 * lratio);
  EissCoefficients co;
  co.varrho = varrho;
  co.a0 = std::sqrt(cert.a_bar * std::exp(sc.dwell.N0 * varrho) / cert.a_under);
  co.b0 = cert.b - varrho / sc.dwell.tau_d;
  co.c0 = 0.0;
  co.d0 = 0.0;
  auto rep = eiss_envelope_check(dist, co, dist.front().second, 0.0);
  res.envelope_holds = rep.holds;
  res.adt_valid = validate_adt(sc.signal, sc.dwell).valid;
  res.switches = arc.plant_switch_count();

  detail::emit_arc(out_dir, "switched", sc, arc, detail::basic_series(sc, arc));
  summary.add("envelope_holds", res.envelope_holds);
  summary.add("adt_valid", res.adt_valid);
  summary.add("switches", static_cast<double>(res.switches));
  summary.add("tau_under", res.tau_under);
  summary.add("tau_d", res.tau_d);
  summary.add("varrho", varrho);
  if (!out_dir.empty()) summary.write(out_dir + "/summary.txt");
  return res;
}

// Momentum tracking under a sinusoidal disturbance.
struct NesterovTrackingResult {
  double limsup = 0.0;
  double frozen_final_error = 0.0;
};

inline NesterovTrackingResult run_nesterov_tracking(std::uint64_t seed,
                                                    const std::string& out_dir) {
  NesterovTrackingResult res;
  Summary summary;
  Scenario base = nesterov_bench(seed);
  const double omega = 0.5, horizon = 40.0;
  auto arm = [&](double freeze, const std::string& name) {
    Scenario sc = base;
    sc.disturbance = DisturbanceSignal::sinusoid(Vector::Constant(1, 0.3),
                                                 Vector::Constant(1, 0.2), omega, 0.0, freeze);
    sc.integrator.horizon = horizon;
    sc.signal.horizon = horizon;
    sc.integrator.record_interval = horizon / 2000.0;
    HybridArc arc = simulate(sc);
    auto dist = nesterov_set_distance(arc, *sc.cost, sc.plant, sc.disturbance);
    detail::emit_arc(out_dir, name, sc, arc, detail::basic_series(sc, arc));
    return std::make_pair(detail::limsup_tail(dist, 0.8 * horizon), dist.back().second);
  };
  res.limsup = arm(-1.0, "tracking").first;
  const double tf = (std::floor(0.5 * horizon * omega / M_PI) * M_PI + 0.5 * M_PI) / omega;
  res.frozen_final_error = arm(tf, "frozen").second;
  summary.add("limsup", res.limsup);
  summary.add("frozen_final_error", res.frozen_final_error);
  if (!out_dir.empty()) summary.write(out_dir + "/summary.txt");
  return res;
}

// Practical convergence on the quartic cost: residual shrinks with epsilon,
// flow intervals obey the alpha/u3^2 budget, and the restart-period
// comparison (Delta = 2 vs Delta = 5) is recorded.
struct QuarticResult {
  std::vector<double> epsilons;
  std::vector<double> limsups;
  bool monotone = false;
  long alpha_checked = 0;
  long alpha_violations = 0;
  double limsup_delta2 = 0.0, limsup_delta5 = 0.0;
};

inline QuarticResult run_quartic(std::uint64_t, const std::string& out_dir) {
  QuarticResult res;
  Summary summary;
  Scenario base = quartic_bench(true);
  const double eps0 = base.epsilon[0];
  const SteadyStateMap map = steady_state_maps(base.plant.modes[0], base.plant.C, base.plant.D);
  const CostConstants cc = quartic_constants(dynamic_cast<const QuarticCost&>(*base.cost), map,
                                             base.quartic_ball_radius, base.quartic_ball_radius);
  const auto& cfg = std::get<NesterovConfig>(base.controller);

  double prev = kUnbounded;
  res.monotone = true;
  for (int k = 0; k < 3; ++k) {
    const double eps = eps0 / static_cast<double>(1 << k);
    Scenario sc = base;
    sc.epsilon = {eps};
    sc.integrator.step = eps / 10.0;
    HybridArc arc = simulate(sc);
    auto dist = nesterov_set_distance(arc, *sc.cost, sc.plant, sc.disturbance);
    auto gaps = suboptimality(arc, *sc.cost, map, sc.disturbance);
    const double limsup = detail::limsup_tail(dist, 0.8 * sc.integrator.horizon);
    res.epsilons.push_back(eps);
    res.limsups.push_back(limsup);
    if (limsup >= prev || !std::isfinite(limsup)) res.monotone = false;
    prev = limsup;

    if (k == 0) {
      // flow-interval budget: f(u1) - f* <= alpha(s, j)/u3^2 + nu_emp
      LyapunovMonitor mon = make_practical_monitor(sc.plant, sc.cost, map, cc, cfg.params, 1.0);
      double nu_emp = 0.0;
      for (std::size_t i = 0; i < gaps.size(); ++i)
        if (gaps[i].first.t >= 0.8 * sc.integrator.horizon)
          nu_emp = std::max(nu_emp, gaps[i].second);
      std::size_t start = 0;
      double alpha = practical_alpha(mon, arc, 0, sc.disturbance, cfg.params.delta);
      for (std::size_t i = 0; i < arc.size(); ++i) {
        if (arc.times[i].j != arc.times[start].j) {
          start = i;
          alpha = practical_alpha(mon, arc, i, sc.disturbance, cfg.params.delta);
          continue;
        }
        ++res.alpha_checked;
        const double bound = alpha / (arc.u3(i) * arc.u3(i)) + nu_emp;
        if (gaps[i].second > bound * 1.05 + 1e-9) ++res.alpha_violations;
      }
      summary.add("nu_emp", nu_emp);
    }
    ArcSeries series = detail::basic_series(sc, arc);
    detail::emit_arc(out_dir, "eps_over_" + std::to_string(1 << k), sc, arc, series);
    summary.add("eps" + std::to_string(k), eps);
    summary.add("limsup" + std::to_string(k), limsup);
  }

  // restart-period comparison at a shared epsilon
  for (double Delta : {2.0, 5.0}) {
    Scenario sc = base;
    NesterovConfig arm_cfg = cfg;
    arm_cfg.params.Delta = Delta;
    sc.controller = arm_cfg;
    HybridArc arc = simulate(sc);
    auto dist = nesterov_set_distance(arc, *sc.cost, sc.plant, sc.disturbance);
    const double limsup = detail::limsup_tail(dist, 0.8 * sc.integrator.horizon);
    if (Delta == 2.0)
      res.limsup_delta2 = limsup;
    else
      res.limsup_delta5 = limsup;
    detail::emit_arc(out_dir, "Delta_" + std::to_string(static_cast<int>(Delta)), sc, arc,
                     detail::basic_series(sc, arc));
  }

  summary.add("monotone", res.monotone);
  summary.add("alpha_checked", static_cast<double>(res.alpha_checked));
  summary.add("alpha_violations", static_cast<double>(res.alpha_violations));
  summary.add("limsup_delta2", res.limsup_delta2);
  summary.add("limsup_delta5", res.limsup_delta5);
  summary.add("delta2_no_slower", res.limsup_delta2 <= res.limsup_delta5);
  if (!out_dir.empty()) summary.write(out_dir + "/summary.txt");
  return res;
}

// Example-1 traffic instance: eigenvalue record, shared-map check, and a
// certificate-compliant closed-loop run against an uncontrolled fast-switching
// contrast arm.
struct CtmResult {
  std::vector<double> mode1_eigs, mode2_eigs;
  bool hurwitz = false;
  double map_deviation = 0.0;
  bool maps_common = false;
  double controlled_final_error = 0.0;
  double uncontrolled_drift = 0.0;
};

inline CtmResult run_ctm(const std::string& out_dir) {
  CtmResult res;
  Summary summary;
  SwitchedPlant plant = build_ctm(true);
  res.hurwitz = is_hurwitz(plant.modes[0]) && is_hurwitz(plant.modes[1]);
  for (const auto& ev : mode_eigenvalues(plant.modes[0])) res.mode1_eigs.push_back(ev.real());
  for (const auto& ev : mode_eigenvalues(plant.modes[1])) res.mode2_eigs.push_back(ev.real());
  auto common = check_common_maps(plant, 1e-8);
  res.map_deviation = common.max_deviation;
  res.maps_common = common.common;

  // closed-loop gradient run with certificate-derived settings
  Scenario sc;
  sc.plant = plant;
  const SteadyStateMap map = steady_state_maps(plant.modes[0], plant.C, plant.D);
  sc.cost = std::make_shared<QuadraticCost>(Matrix::Constant(1, 1, 0.01),
                                            0.01 * Matrix::Identity(2, 2),
                                            Vector::Constant(2, 1.0));
  sc.controller = GradientConfig{};
  const CostConstants cc = cost_constants(dynamic_cast<const QuadraticCost&>(*sc.cost), map);
  GradientCertificate cert =
      gradient_certificate(sc.plant, map, cc, {}, DwellTimeParams{1.0, 1});
  sc.epsilon = detail::half_eps_bars(cert);
  sc.dwell.N0 = 1;
  sc.dwell.tau_d = std::max(1.0, 2.0 * cert.tau_d_min);
  const double horizon = std::max(14.0, 2.0 * sc.dwell.tau_d);
  sc.signal = generate_signal(sc.dwell, 2, horizon, 99, 1.0, 0.6);
  sc.disturbance = DisturbanceSignal::constant(Vector::Constant(2, 0.1));
  const double eps_min = std::min(sc.epsilon[0], sc.epsilon[1]);
  sc.integrator = {eps_min / 10.0, horizon, horizon / 2000.0};
  HybridArc arc = simulate(sc);
  auto errs = tracking_error(arc, *sc.cost, sc.plant, sc.disturbance);
  res.controlled_final_error = errs.back().second;
  detail::emit_arc(out_dir, "controlled", sc, arc, detail::basic_series(sc, arc));

  // uncontrolled arm: no input authority, fast switching below the dwell bound
  Scenario un;
  un.plant = build_ctm(false);
  un.cost = sc.cost;
  un.controller = GradientConfig{};
  un.dwell = {0.05, 1};
  un.signal = generate_signal(un.dwell, 2, 20.0, 7, 1.0, 0.9);
  un.epsilon = {1.0, 1.0};
  un.disturbance = sc.disturbance;
  un.integrator = {0.01, 20.0, 0.01};
  HybridArc ua = simulate(un);
  // drift of the uncontrolled trajectory from the controlled equilibrium
  Vector ustar = optimal_input(*sc.cost, map, un.disturbance.value(0.0));
  Vector xstar = equilibrium_state(plant.modes[0], ustar, un.disturbance.value(0.0));
  double drift = 0.0;
  for (std::size_t i = 0; i < ua.size(); ++i)
    if (ua.times[i].t >= 0.8 * 20.0) drift = std::max(drift, (ua.x(i) - xstar).norm());
  res.uncontrolled_drift = drift;
  detail::emit_arc(out_dir, "uncontrolled", un, ua, ArcSeries{});

  summary.add("mode1_eig0", res.mode1_eigs[0]);
  summary.add("mode1_eig1", res.mode1_eigs[1]);
  summary.add("mode2_eig0", res.mode2_eigs[0]);
  summary.add("mode2_eig1", res.mode2_eigs[1]);
  summary.add("hurwitz", res.hurwitz);
  summary.add("map_deviation", res.map_deviation);
  summary.add("maps_common", res.maps_common);
  summary.add("controlled_final_error", res.controlled_final_error);
  summary.add("uncontrolled_drift", res.uncontrolled_drift);
  // values reported elsewhere for this example; the constructed matrices
  // are the source of truth here, so the discrepancy is recorded instead of
  // asserted
  summary.add("reported_mode1_eigs", std::string("-0.46, -0.17"));
  summary.add("reported_mode2_eigs", std::string("-0.17, -0.10"));
  if (!out_dir.empty()) summary.write(out_dir + "/summary.txt");
  return res;
}

// Acceleration trade-off: time-to-threshold race on an ill-conditioned
// quadratic, and terminal accuracy comparison on the quartic cost.
struct TradeoffResult {
  double grad_time_to_threshold = 0.0;
  double nesterov_time_to_threshold = 0.0;
  double grad_quartic_terminal = 0.0;
  double nesterov_quartic_residual = 0.0;
};

inline TradeoffResult run_grad_vs_nesterov(std::uint64_t seed, const std::string& out_dir) {
  TradeoffResult res;
  Summary summary;

  // ill-conditioned quadratic race
  Rng rng(seed);
  SwitchedPlant plant;
  LtiMode mode;
  mode.A = random_hurwitz(rng, 2, 1.0);
  mode.B = rng.matrix(2, 2);
  mode.E = rng.matrix(2, 1);
  plant.modes = {mode};
  plant.C = rng.matrix(2, 2);
  plant.D = Matrix::Zero(2, 1);
  const SteadyStateMap map = steady_state_maps(mode, plant.C, plant.D);
  Matrix R(2, 2);
  R << 1.0, 0.0, 0.0, 0.02;
  auto cost = std::make_shared<QuadraticCost>(R, 0.02 * Matrix::Identity(2, 2),
                                              Vector::Constant(2, 1.0));
  const CostConstants cc = cost_constants(*cost, map);

  const double eps = 0.01, horizon = 120.0;
  Scenario grad;
  grad.plant = plant;
  grad.cost = cost;
  grad.controller = GradientConfig{};
  grad.signal.events = {{0.0, 1}};
  grad.signal.horizon = horizon;
  grad.epsilon = {eps};
  grad.disturbance = DisturbanceSignal::constant(Vector::Constant(1, 0.3));
  grad.integrator = {eps / 10.0, horizon, 0.01};
  HybridArc ag = simulate(grad);
  auto eg = tracking_error(ag, *cost, plant, grad.disturbance);

  Scenario nest = grad;
  const double kappa = 20.0;
  const double dlt = 0.5;
  const double Dlt = std::sqrt(3.0 * 2.0 * 2.0 / (kappa * cc.mu) + dlt * dlt);
  NesterovParams pr{kappa, 2.0, dlt, Dlt, true};
  nest.controller = NesterovConfig{pr, Vector(), Vector(), -1.0};
  HybridArc an = simulate(nest);
  auto en = tracking_error(an, *cost, plant, nest.disturbance);

  auto time_to = [](const std::vector<std::pair<HybridTime, double>>& e, double thr) {
    for (const auto& [ht, v] : e)
      if (v <= thr) return ht.t;
    return -1.0;
  };
  res.grad_time_to_threshold = time_to(eg, 1e-2);
  res.nesterov_time_to_threshold = time_to(en, 1e-2);
  detail::emit_arc(out_dir, "race_gradient", grad, ag, detail::basic_series(grad, ag));
  detail::emit_arc(out_dir, "race_nesterov", nest, an, detail::basic_series(nest, an));

  // quartic accuracy comparison (regulation, constant w): the momentum
  // controller plateaus at its practical residual while the gradient flow
  // keeps converging
  Scenario quartic = quartic_bench(false);
  const SteadyStateMap qmap =
      steady_state_maps(quartic.plant.modes[0], quartic.plant.C, quartic.plant.D);
  NesterovParams slow{1.0, 2.0, 1.0, 2.0, false};
  quartic.controller =
      NesterovConfig{slow, Vector::Constant(1, 0.25), Vector::Constant(1, 0.25), -1.0};
  HybridArc aq = simulate(quartic);
  auto eq = tracking_error(aq, *quartic.cost, quartic.plant, quartic.disturbance);
  res.nesterov_quartic_residual = detail::limsup_tail(eq, 0.8 * quartic.integrator.horizon);
  detail::emit_arc(out_dir, "quartic_nesterov", quartic, aq,
                   detail::basic_series(quartic, aq));

  Scenario gq = quartic;
  gq.controller = GradientConfig{Vector::Constant(1, 0.25)};
  const CostConstants qcc = quartic_constants(
      dynamic_cast<const QuarticCost&>(*gq.cost), qmap, gq.quartic_ball_radius, gq.quartic_ball_radius);
  StabilityCertificate stab = mode_certificate(gq.plant.modes[0]);
  const double geps =
      gradient_epsilon_bound(stab, gq.plant.modes[0], gq.plant.C, qmap, qcc.ell_y) / 2.0;
  gq.epsilon = {geps};
  gq.integrator.step = geps / 10.0;
  HybridArc agq = simulate(gq);
  auto egq = tracking_error(agq, *gq.cost, gq.plant, gq.disturbance);
  res.grad_quartic_terminal = egq.back().second;
  detail::emit_arc(out_dir, "quartic_gradient", gq, agq, detail::basic_series(gq, agq));

  summary.add("grad_time_to_threshold", res.grad_time_to_threshold);
  summary.add("nesterov_time_to_threshold", res.nesterov_time_to_threshold);
  summary.add("nesterov_faster",
              res.nesterov_time_to_threshold > 0.0 &&
                  (res.grad_time_to_threshold < 0.0 ||
                   res.nesterov_time_to_threshold < res.grad_time_to_threshold));
  summary.add("grad_quartic_terminal", res.grad_quartic_terminal);
  summary.add("nesterov_quartic_residual", res.nesterov_quartic_residual);
  summary.add("gradient_more_accurate",
              res.grad_quartic_terminal < res.nesterov_quartic_residual);
  if (!out_dir.empty()) summary.write(out_dir + "/summary.txt");
  return res;
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "grad-regulation",  "grad-switched",     "grad-tracking",
      "nesterov-regulation", "nesterov-switched", "nesterov-tracking",
      "quartic",          "ctm",               "grad-vs-nesterov"};
  return names;
}

// Runs one named experiment, writing CSVs and summary.txt under out_dir.
// Returns 0 on completion, 1 when a recorded acceptance metric failed.
inline int run_experiment(const std::string& name, const std::string& out_dir,
                          std::uint64_t seed) {
  if (name == "grad-regulation") {
    auto r = run_grad_regulation(seed, out_dir);
    return r.envelope_failures == 0 ? 0 : 1;
  }
  if (name == "grad-switched") {
    auto r = run_grad_switched(seed, out_dir);
    return (r.envelope_failures == 0 && r.adt_failures == 0) ? 0 : 1;
  }
  if (name == "grad-tracking") {
    auto r = run_grad_tracking(seed, out_dir);
    const bool ok = r.limsup_small <= r.bound_small && r.limsup_large <= r.bound_large &&
                    r.scaling_ratio >= 5.0 && r.scaling_ratio <= 20.0 &&
                    r.frozen_final_error <= 1e-4;
    return ok ? 0 : 1;
  }
  if (name == "nesterov-regulation") {
    auto r = run_nesterov_regulation(seed, out_dir);
    const bool contrast =
        r.unbounded_diverged || r.unbounded_arm_error > 10.0 * std::max(r.finite_arm_error, 1e-3);
    return (r.envelope_holds && r.jumps_contract && r.finite_arm_error <= 1e-3 && contrast) ? 0
                                                                                            : 1;
  }
  if (name == "nesterov-switched") {
    auto r = run_nesterov_switched(seed, out_dir);
    return (r.envelope_holds && r.adt_valid) ? 0 : 1;
  }
  if (name == "nesterov-tracking") {
    auto r = run_nesterov_tracking(seed, out_dir);
    return std::isfinite(r.limsup) && r.frozen_final_error < r.limsup ? 0 : 1;
  }
  if (name == "quartic") {
    auto r = run_quartic(seed, out_dir);
    return (r.monotone && r.alpha_violations == 0) ? 0 : 1;
  }
  if (name == "ctm") {
    auto r = run_ctm(out_dir);
    return (r.hurwitz && r.maps_common && r.controlled_final_error <= 1e-4) ? 0 : 1;
  }
  if (name == "grad-vs-nesterov") {
    auto r = run_grad_vs_nesterov(seed, out_dir);
    const bool ok = r.nesterov_time_to_threshold > 0.0 &&
                    (r.grad_time_to_threshold < 0.0 ||
                     r.nesterov_time_to_threshold < r.grad_time_to_threshold) &&
                    r.grad_quartic_terminal < r.nesterov_quartic_residual;
    return ok ? 0 : 1;
  }
  throw UnknownExperiment("unknown experiment: " + name);
}

}  // namespace experiments
}  // namespace swflow
