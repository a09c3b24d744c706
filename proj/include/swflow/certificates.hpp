#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "swflow/cost.hpp"
#include "swflow/disturbance.hpp"
#include "swflow/plant.hpp"
#include "swflow/sim.hpp"
#include "swflow/switching.hpp"

namespace swflow {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Quadratic-form positive definiteness test
// ---------------------------------------------------------------------------

// Parameters of the 2x2 matrix
//   M = [ theta (alpha/eps - beta - b phi)   -((1-theta) eta + theta delta)/2 ]
//       [          (symmetric)                 (1-theta) (gamma - b nu)       ]
struct QuadFormParams {
  double alpha = 0.0, beta = 0.0, eta = 0.0, delta = 0.0;
  double phi = 0.0, nu = 0.0, gamma = 0.0;
  double theta = 0.5;
  double b = 0.0;
  double epsilon = 1.0;
};

struct QuadFormReport {
  bool pd = false;
  double minor1 = 0.0, minor2 = 0.0;
  double eps_star = 0.0;  // alpha gamma / (beta gamma + eta delta)
};

inline Matrix quad_form_matrix(const QuadFormParams& p) {
  Matrix m(2, 2);
  const double off = -0.5 * ((1.0 - p.theta) * p.eta + p.theta * p.delta);
  // b = 0 must stay exact even when nu or phi is unbounded
  const double b_phi = p.b == 0.0 ? 0.0 : p.b * p.phi;
  const double b_nu = p.b == 0.0 ? 0.0 : p.b * p.nu;
  m(0, 0) = p.theta * (p.alpha / p.epsilon - p.beta - b_phi);
  m(0, 1) = off;
  m(1, 0) = off;
  m(1, 1) = (1.0 - p.theta) * (p.gamma - b_nu);
  return m;
}

inline QuadFormReport lemma_a2_check(const QuadFormParams& p) {
  QuadFormReport rep;
  const Matrix m = quad_form_matrix(p);
  rep.minor1 = m(0, 0);
  rep.minor2 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  rep.pd = rep.minor1 > 0.0 && rep.minor2 > 0.0;
  const double denom = p.beta * p.gamma + p.eta * p.delta;
  rep.eps_star = denom > 0.0 ? p.alpha * p.gamma / denom : kUnbounded;
  return rep;
}

// ---------------------------------------------------------------------------
// Gradient-flow certificates
// ---------------------------------------------------------------------------

struct EissCoefficients {
  double a0 = 1.0, b0 = 0.0, c0 = 0.0, d0 = 0.0;
  double varrho = 0.0;
};

namespace detail {
struct ModeGeometry {
  double norm_C = 0.0;
  double norm_PAinvB = 0.0;
  double norm_PAinvE = 0.0;
};

inline ModeGeometry mode_geometry(const StabilityCertificate& cert, const LtiMode& mode,
                                  const Matrix& C) {
  ModeGeometry g;
  g.norm_C = spectral_norm(C);
  Eigen::FullPivLU<Matrix> lu(mode.A);
  g.norm_PAinvB = spectral_norm(cert.P * lu.solve(mode.B));
  g.norm_PAinvE = spectral_norm(cert.P * lu.solve(mode.E));
  return g;
}
}  // namespace detail

// Time-scale bound for one mode of the gradient-flow loop:
// eps_bar = lambda_min(Q) / (4 ell_y ||C|| ||G|| ||P A^{-1} B||).
// A zero denominator means g is insensitive to this loop and the bound is
// unbounded.
inline double gradient_epsilon_bound(const StabilityCertificate& cert, const LtiMode& mode,
                                     const Matrix& C, const SteadyStateMap& map, double ell_y) {
  const auto g = detail::mode_geometry(cert, mode, C);
  const double denom = 4.0 * ell_y * g.norm_C * map.norm_G * g.norm_PAinvB;
  if (denom == 0.0) return kUnbounded;
  return cert.lambda_min_Q / denom;
}

struct GradientCoeffs {
  double theta = 0.0;
  double a_bar = 0.0;
  double a_under = 0.0;
};

inline GradientCoeffs gradient_coeffs(const StabilityCertificate& cert, const LtiMode& mode,
                                      const Matrix& C, const SteadyStateMap& map,
                                      const CostConstants& cc,
                                      double theta_override = -1.0) {
  const auto g = detail::mode_geometry(cert, mode, C);
  GradientCoeffs out;
  const double num = cc.ell_y * g.norm_C * map.norm_G;
  out.theta = theta_override > 0.0 ? theta_override : num / (num + 2.0 * g.norm_PAinvB);
  out.a_bar = std::max((1.0 - out.theta) * cc.ell / 2.0, out.theta * cert.lambda_max_P);
  out.a_under = std::min((1.0 - out.theta) * cc.mu / 2.0, out.theta * cert.lambda_min_P);
  return out;
}

// tau_d > (ell / 2 mu^2) ln(a_bar / a_under) is needed for exponential
// regulation under switching.
inline double gradient_dwell_bound(double a_bar, double a_under, const CostConstants& cc) {
  return cc.ell / (2.0 * cc.mu * cc.mu) * std::log(a_bar / a_under);
}

// Admissible varrho interval (ln(a_bar/a_under), 2 mu^2 tau_d / ell).
inline std::pair<double, double> varrho_window(double a_bar, double a_under,
                                               const CostConstants& cc, double tau_d) {
  return {std::log(a_bar / a_under), 2.0 * cc.mu * cc.mu * tau_d / cc.ell};
}

// Everything cmd_check needs for the gradient-flow loop, per mode plus the
// aggregated quantities.
struct GradientModeCert {
  StabilityCertificate stab;
  GradientCoeffs coeffs;
  double eps_bar = 0.0;
  double r_x = 0.0, r_u = 0.0, r_norm = 0.0;  // r = [2 th ||PA^-1E||, (1-th) ell_y ||H|| ||G||]
  double k = 0.0;  // lambda_min(M-hat)/2 at the deployed epsilon, b = 0
};

struct GradientCertificate {
  std::vector<GradientModeCert> modes;
  double a_bar = 0.0, a_under = 0.0;
  double tau_d_min = 0.0;
  double varrho_lo = 0.0, varrho_hi = 0.0;  // for the supplied tau_d
};

inline QuadFormParams gradient_quad_form(const StabilityCertificate& cert,
                                         const detail::ModeGeometry& g,
                                         const SteadyStateMap& map, const CostConstants& cc,
                                         double theta, double epsilon, double b = 0.0) {
  QuadFormParams p;
  p.alpha = cert.lambda_min_Q;
  p.beta = 2.0 * cc.ell_y * g.norm_C * map.norm_G * g.norm_PAinvB;
  p.eta = cc.ell_y * g.norm_C * map.norm_G;
  p.delta = 2.0 * g.norm_PAinvB;
  p.phi = cert.lambda_max_P;
  p.nu = cc.mu > 0.0 ? cc.ell / (2.0 * cc.mu * cc.mu) : kUnbounded;
  p.gamma = 1.0;
  p.theta = theta;
  p.b = b;
  p.epsilon = epsilon;
  return p;
}

inline GradientCertificate gradient_certificate(
    const SwitchedPlant& plant, const SteadyStateMap& map, const CostConstants& cc,
    const std::vector<double>& epsilon, const DwellTimeParams& dwell,
    double theta_override = -1.0,
    const std::vector<std::optional<Matrix>>& P_overrides = {},
    const std::vector<std::optional<Matrix>>& Q_overrides = {}) {
  GradientCertificate out;
  out.a_bar = 0.0;
  out.a_under = kUnbounded;
  for (std::size_t s = 0; s < plant.modes.size(); ++s) {
    const LtiMode& mode = plant.modes[s];
    GradientModeCert mc;
    std::optional<Matrix> Pov = s < P_overrides.size() ? P_overrides[s] : std::nullopt;
    std::optional<Matrix> Qov = s < Q_overrides.size() ? Q_overrides[s] : std::nullopt;
    mc.stab = mode_certificate(mode, Pov, Qov);
    const auto g = detail::mode_geometry(mc.stab, mode, plant.C);
    mc.coeffs = gradient_coeffs(mc.stab, mode, plant.C, map, cc, theta_override);
    mc.eps_bar = gradient_epsilon_bound(mc.stab, mode, plant.C, map, cc.ell_y);
    mc.r_x = 2.0 * mc.coeffs.theta * g.norm_PAinvE;
    mc.r_u = (1.0 - mc.coeffs.theta) * cc.ell_y * map.norm_H * map.norm_G;
    mc.r_norm = std::hypot(mc.r_x, mc.r_u);
    const double eps_used = s < epsilon.size() ? epsilon[s] : mc.eps_bar / 2.0;
    const Matrix mhat =
        quad_form_matrix(gradient_quad_form(mc.stab, g, map, cc, mc.coeffs.theta, eps_used));
    mc.k = 0.5 * lambda_min_sym(mhat);
    out.modes.push_back(std::move(mc));
    out.a_bar = std::max(out.a_bar, out.modes.back().coeffs.a_bar);
    out.a_under = std::min(out.a_under, out.modes.back().coeffs.a_under);
  }
  out.tau_d_min = gradient_dwell_bound(out.a_bar, out.a_under, cc);
  std::tie(out.varrho_lo, out.varrho_hi) = varrho_window(out.a_bar, out.a_under, cc, dwell.tau_d);
  return out;
}

// E-ISS coefficients of the gradient-flow loop. With switched = false the
// single-mode coefficients of mode p are returned; otherwise the switched
// form with chatter bound N0 and the supplied varrho.
inline EissCoefficients gradient_eiss_coeffs(const GradientCertificate& cert,
                                             const CostConstants& cc,
                                             const DwellTimeParams& dwell, double varrho,
                                             bool switched, std::size_t p = 0) {
  EissCoefficients co;
  const double mu_min = std::min(1.0, cc.mu * cc.mu);
  if (!switched) {
    const GradientModeCert& mc = cert.modes.at(p);
    co.a0 = std::sqrt(mc.coeffs.a_bar / mc.coeffs.a_under);
    co.b0 = 2.0 * cc.mu * cc.mu / cc.ell;
    co.c0 = 0.0;
    co.d0 = mc.k > 0.0 ? std::sqrt(2.0) * mc.r_norm / (mc.k * mu_min) : kUnbounded;
    co.varrho = 0.0;
    return co;
  }
  auto [lo, hi] = varrho_window(cert.a_bar, cert.a_under, cc, dwell.tau_d);
  if (!(lo < hi))
    throw EmptyVarrhoWindow("gradient_eiss_coeffs: dwell bound violated, no admissible varrho");
  if (!(varrho > lo && varrho < hi))
    throw EmptyVarrhoWindow("gradient_eiss_coeffs: varrho outside the admissible window");
  co.varrho = varrho;
  co.a0 = std::sqrt(cert.a_bar * std::exp(dwell.N0 * varrho) / cert.a_under);
  co.b0 = 2.0 * cc.mu * cc.mu / cc.ell - varrho / dwell.tau_d;
  co.c0 = varrho - std::log(cert.a_bar / cert.a_under);
  double r_max = 0.0, k_min = kUnbounded;
  for (const auto& mc : cert.modes) {
    r_max = std::max(r_max, mc.r_norm);
    k_min = std::min(k_min, mc.k);
  }
  co.d0 = k_min > 0.0 ? std::sqrt(2.0) * r_max / (k_min * mu_min) : kUnbounded;
  return co;
}

// ---------------------------------------------------------------------------
// Hybrid momentum-controller certificates
// ---------------------------------------------------------------------------

struct NesterovModeCert {
  StabilityCertificate stab;
  double eta = 0.0;          // 2 sqrt2 kappa Delta ell_y ||C|| ||G|| / rho
  double delta_coeff = 0.0;  // 2 e^Delta rho ||P A^-1 B|| / delta
  double theta = 0.0;
  double a_bar = 0.0, a_under = 0.0;
  double eps_bar = 0.0;
  double r_x = 0.0, r_u = 0.0, r_norm = 0.0;
};

struct NesterovCertificate {
  std::vector<NesterovModeCert> modes;
  double a_bar = 0.0, a_under = 0.0;
  double b = 0.0, c = 0.0, gamma = 0.0;
  bool c_ln_branch_defined = false;  // delta kappa mu^2 > 2 rho
  double tau_under = 0.0;
  bool restart_ok = false;  // Delta^2 - delta^2 > 2 rho / (kappa mu)
};

inline NesterovCertificate nesterov_certificate(
    const SwitchedPlant& plant, const SteadyStateMap& map, const CostConstants& cc,
    const NesterovParams& params, double theta_override = -1.0,
    const std::vector<std::optional<Matrix>>& P_overrides = {},
    const std::vector<std::optional<Matrix>>& Q_overrides = {}) {
  params.validate();
  const double kappa = params.kappa, rho = params.rho;
  const double dlt = params.delta, Dlt = params.Delta;

  NesterovCertificate out;
  out.restart_ok = cc.mu > 0.0 && (Dlt * Dlt - dlt * dlt > 2.0 * rho / (kappa * cc.mu));
  if (params.r0 && !out.restart_ok)
    throw RestartConditionViolated(
        "nesterov_certificate: Delta^2 - delta^2 <= 2 rho / (kappa mu) with r0 = 1");

  out.b = std::min(dlt * cc.mu / (4.0 * cc.ell * Dlt * Dlt),
                   rho * rho / (2.0 * kappa * cc.ell * Dlt));
  out.gamma = std::min(rho / (4.0 * Dlt), kappa * dlt * cc.mu / (8.0 * rho));
  out.c_ln_branch_defined = dlt * kappa * cc.mu * cc.mu > 2.0 * rho;
  if (out.c_ln_branch_defined) {
    const double ln_branch =
        std::log(Dlt * Dlt * kappa * cc.mu * cc.mu / (dlt * kappa * cc.mu * cc.mu - 2.0 * rho));
    out.c = std::max(ln_branch, Dlt - dlt);
  } else {
    out.c = Dlt - dlt;
  }

  out.a_bar = 0.0;
  out.a_under = kUnbounded;
  for (std::size_t s = 0; s < plant.modes.size(); ++s) {
    const LtiMode& mode = plant.modes[s];
    NesterovModeCert mc;
    std::optional<Matrix> Pov = s < P_overrides.size() ? P_overrides[s] : std::nullopt;
    std::optional<Matrix> Qov = s < Q_overrides.size() ? Q_overrides[s] : std::nullopt;
    mc.stab = mode_certificate(mode, Pov, Qov);
    const auto g = detail::mode_geometry(mc.stab, mode, plant.C);
    mc.eta = 2.0 * std::sqrt(2.0) * kappa * Dlt * cc.ell_y * g.norm_C * map.norm_G / rho;
    mc.delta_coeff = 2.0 * std::exp(Dlt) * rho * g.norm_PAinvB / dlt;
    mc.theta = theta_override > 0.0 ? theta_override : mc.eta / (mc.eta + mc.delta_coeff);
    mc.a_bar = std::max((1.0 - mc.theta) * kappa * cc.ell * Dlt * Dlt / (2.0 * rho),
                        mc.theta * mc.stab.lambda_max_P * std::exp(Dlt));
    mc.a_under = std::min({(1.0 - mc.theta) / 2.0,
                           (1.0 - mc.theta) * kappa * cc.mu * dlt * dlt / (4.0 * rho),
                           mc.theta * mc.stab.lambda_min_P * std::exp(dlt)});
    const double denom = out.gamma * dlt * mc.stab.lambda_max_P +
                         2.0 * std::sqrt(2.0) * kappa * Dlt * cc.ell_y * g.norm_C * map.norm_G *
                             g.norm_PAinvB;
    mc.eps_bar = denom > 0.0
                     ? std::exp(dlt - Dlt) * out.gamma * mc.stab.lambda_min_Q * dlt / denom
                     : kUnbounded;
    mc.r_x = 2.0 * mc.theta * g.norm_PAinvE;
    mc.r_u = (1.0 - mc.theta) * std::sqrt(2.0) * kappa * cc.ell_y * Dlt * Dlt /
             (2.0 * rho) * map.norm_H * map.norm_G;
    mc.r_norm = std::hypot(mc.r_x, mc.r_u);
    out.modes.push_back(std::move(mc));
    out.a_bar = std::max(out.a_bar, out.modes.back().a_bar);
    out.a_under = std::min(out.a_under, out.modes.back().a_under);
  }
  out.tau_under = (std::log(out.a_bar) - std::log(out.a_under)) / out.b;
  return out;
}

// Practical (convex-only) time-scale bound:
// eps < lambda_min(Q) delta / (12 Delta ell_y rho ||C|| ||G|| ||PA^-1B||)
//       * min{rho / (kappa Delta), delta ell0 / (2 rho ell)}.
inline double nesterov_practical_epsilon(const StabilityCertificate& cert, const LtiMode& mode,
                                         const Matrix& C, const SteadyStateMap& map,
                                         const CostConstants& cc, const NesterovParams& params) {
  const auto g = detail::mode_geometry(cert, mode, C);
  const double denom =
      12.0 * params.Delta * cc.ell_y * params.rho * g.norm_C * map.norm_G * g.norm_PAinvB;
  if (denom == 0.0) return kUnbounded;
  const double lead = cert.lambda_min_Q * params.delta / denom;
  return lead * std::min(params.rho / (params.kappa * params.Delta),
                         params.delta * cc.ell0 / (2.0 * params.rho * cc.ell));
}

// Single-mode E-ISS coefficients of the restarted controller (constant w has
// d0 = 0; the tracking gain uses d_tilde = k from the mode's quadratic form).
inline EissCoefficients nesterov_eiss_coeffs(const NesterovCertificate& cert, std::size_t p = 0) {
  EissCoefficients co;
  const NesterovModeCert& mc = cert.modes.at(p);
  co.a0 = std::sqrt(mc.a_bar / mc.a_under);
  co.b0 = cert.b;
  co.c0 = cert.c;
  co.d0 = 0.0;
  return co;
}

// ---------------------------------------------------------------------------
// Runtime Lyapunov / E-ISS monitors
// ---------------------------------------------------------------------------

struct LyapunovMonitor {
  enum class Kind { gradient, nesterov };
  Kind kind = Kind::gradient;
  SwitchedPlant plant;
  std::shared_ptr<Cost> cost;
  SteadyStateMap map;
  std::vector<double> theta;  // per mode
  std::vector<Matrix> P;      // per mode
  double varrho = 0.0;        // only used by the switched form W = e^{varrho tau} V
  double kappa = 1.0, rho = 1.0;  // momentum controller parameters
};

inline LyapunovMonitor make_gradient_monitor(const SwitchedPlant& plant,
                                             std::shared_ptr<Cost> cost,
                                             const GradientCertificate& cert, double varrho) {
  LyapunovMonitor mon;
  mon.kind = LyapunovMonitor::Kind::gradient;
  mon.plant = plant;
  mon.cost = std::move(cost);
  mon.map = steady_state_maps(plant.modes.front(), plant.C, plant.D);
  for (const auto& mc : cert.modes) {
    mon.theta.push_back(mc.coeffs.theta);
    mon.P.push_back(mc.stab.P);
  }
  mon.varrho = varrho;
  return mon;
}

// Monitor for the convex-only (practical) analysis: theta per mode is the
// quadratic-form optimizer with eta = 3 kappa Delta ell_y ||C|| ||G|| / rho
// and delta = 2 rho ||P A^-1 B|| / delta.
inline LyapunovMonitor make_practical_monitor(const SwitchedPlant& plant,
                                              std::shared_ptr<Cost> cost,
                                              const SteadyStateMap& map, const CostConstants& cc,
                                              const NesterovParams& params, double varrho) {
  LyapunovMonitor mon;
  mon.kind = LyapunovMonitor::Kind::nesterov;
  mon.plant = plant;
  mon.cost = std::move(cost);
  mon.map = map;
  for (const auto& mode : plant.modes) {
    StabilityCertificate stab = mode_certificate(mode);
    const auto g = detail::mode_geometry(stab, mode, plant.C);
    const double eta = 3.0 * params.kappa * params.Delta * cc.ell_y * g.norm_C * map.norm_G /
                       params.rho;
    const double delta_coeff = 2.0 * params.rho * g.norm_PAinvB / params.delta;
    mon.theta.push_back(eta / (eta + delta_coeff));
    mon.P.push_back(stab.P);
  }
  mon.varrho = varrho;
  mon.kappa = params.kappa;
  mon.rho = params.rho;
  return mon;
}

inline LyapunovMonitor make_nesterov_monitor(const SwitchedPlant& plant,
                                             std::shared_ptr<Cost> cost,
                                             const NesterovCertificate& cert,
                                             const NesterovParams& params, double varrho) {
  LyapunovMonitor mon;
  mon.kind = LyapunovMonitor::Kind::nesterov;
  mon.plant = plant;
  mon.cost = std::move(cost);
  mon.map = steady_state_maps(plant.modes.front(), plant.C, plant.D);
  for (const auto& mc : cert.modes) {
    mon.theta.push_back(mc.theta);
    mon.P.push_back(mc.stab.P);
  }
  mon.varrho = varrho;
  mon.kappa = params.kappa;
  mon.rho = params.rho;
  return mon;
}

// V at one arc sample; with switched_form the dwell-timer weight
// W = e^{varrho tau} V is returned.
inline double lyapunov_value(const LyapunovMonitor& mon, const HybridArc& arc, std::size_t i,
                             const DisturbanceSignal& disturbance, bool switched_form = false) {
  const Vector w = disturbance.value(arc.times[i].t);
  const int sigma = arc.sigma(i);
  const std::size_t s = static_cast<std::size_t>(sigma - 1);
  const LtiMode& mode = mon.plant.modes[s];
  const Vector u1 = arc.u1(i);
  const Vector xt = arc.x(i) - equilibrium_state(mode, u1, w);
  const Vector ustar = optimal_input(*mon.cost, mon.map, w);
  const double fgap = f_value(*mon.cost, mon.map, u1, w) - f_value(*mon.cost, mon.map, ustar, w);
  const double th = mon.theta[s];
  double v = 0.0;
  if (mon.kind == LyapunovMonitor::Kind::gradient) {
    v = (1.0 - th) * fgap + th * xt.dot(mon.P[s] * xt);
  } else {
    const Vector u2 = arc.u2(i);
    const double u3 = arc.u3(i);
    const double v1 = 0.5 * ((u2 - u1).squaredNorm() + (u2 - ustar).squaredNorm() +
                             mon.kappa * u3 * u3 / mon.rho * fgap);
    const double v2 = std::exp(u3) * xt.dot(mon.P[s] * xt);
    v = (1.0 - th) * v1 + th * v2;
  }
  if (switched_form) v *= std::exp(mon.varrho * arc.tau(i));
  return v;
}

struct EnvelopeReport {
  bool holds = true;
  double max_violation = 0.0;  // error minus inflated envelope; <= 0 when holds
  HybridTime first_violation{0.0, 0};
};

// Checks err(t,j) <= a0 (e^{-(b0 t + c0 j)/2} z0_err + d0 sup_wdot) (1 + tol)
// over an error series aligned with the arc samples.
inline EnvelopeReport eiss_envelope_check(const std::vector<std::pair<HybridTime, double>>& errors,
                                          const EissCoefficients& co, double z0_err,
                                          double sup_wdot, double tol = 1e-6) {
  EnvelopeReport rep;
  bool first = true;
  for (const auto& [ht, err] : errors) {
    const double envelope =
        co.a0 * (std::exp(-0.5 * (co.b0 * ht.t + co.c0 * static_cast<double>(ht.j))) * z0_err +
                 co.d0 * sup_wdot);
    const double violation = err - envelope * (1.0 + tol);
    if (violation > rep.max_violation) rep.max_violation = violation;
    if (violation > 0.0 && first) {
      rep.first_violation = ht;
      first = false;
    }
  }
  rep.holds = rep.max_violation <= 0.0;
  return rep;
}

enum class DecreaseCheck { flow_rate, jump_contraction };

struct DecreaseReport {
  bool holds = true;
  double max_violation = 0.0;
  HybridTime first_violation{0.0, 0};
  long checked = 0;
};

// Verifies the Lyapunov conditions along an arc.
//   flow_rate:        log V difference quotient <= -b (1 - tol) between
//                     consecutive same-j samples, outside the ISS ball
//                     ||z~|| >= ball_coeff * sup||w'|| and above a relative
//                     V floor (difference quotients drown in roundoff near
//                     the target set)
//   jump_contraction: V+ <= e^{-c} V (1 + tol) at controller resets, or
//                     V+ <= V (1 + tol) when c = 0 is passed
inline DecreaseReport lyapunov_decrease_check(
    const HybridArc& arc, const LyapunovMonitor& mon, const DisturbanceSignal& disturbance,
    DecreaseCheck check, double rate, double tol, JumpKind jump_kind = JumpKind::controller_reset,
    double ball_coeff = 0.0, bool switched_form = false) {
  DecreaseReport rep;
  bool first = true;
  auto note = [&](double violation, HybridTime ht) {
    ++rep.checked;
    if (violation > rep.max_violation) rep.max_violation = violation;
    if (violation > 0.0 && first) {
      rep.first_violation = ht;
      first = false;
    }
  };

  if (check == DecreaseCheck::flow_rate) {
    const double sup_wdot = disturbance.sup_derivative_norm();
    const auto errs = tracking_error(arc, *mon.cost, mon.plant, disturbance);
    const double v0 = lyapunov_value(mon, arc, 0, disturbance, switched_form);
    const double floor = 1e-10 * std::max(v0, 1e-30);
    for (std::size_t i = 0; i + 1 < arc.size(); ++i) {
      if (arc.times[i].j != arc.times[i + 1].j) continue;
      const double dt = arc.times[i + 1].t - arc.times[i].t;
      if (dt <= 0.0) continue;
      if (errs[i].second < ball_coeff * sup_wdot) continue;
      const double va = lyapunov_value(mon, arc, i, disturbance, switched_form);
      const double vb = lyapunov_value(mon, arc, i + 1, disturbance, switched_form);
      if (va <= floor || vb <= floor) continue;
      const double quotient = std::log(vb / va) / dt;
      note(quotient - (-rate * (1.0 - tol)), arc.times[i + 1]);
    }
  } else {
    const double v0 = arc.size() > 0 ? lyapunov_value(mon, arc, 0, disturbance, switched_form) : 0.0;
    const double floor = 1e-10 * std::max(v0, 1e-30);
    for (const auto& jp : arc.jumps) {
      if (jp.kind != jump_kind) continue;
      const double va = lyapunov_value(mon, arc, jp.pre_sample, disturbance, switched_form);
      const double vb = lyapunov_value(mon, arc, jp.post_sample, disturbance, switched_form);
      if (va <= floor) continue;
      note(vb - std::exp(-rate) * va * (1.0 + tol), jp.when);
    }
  }
  rep.holds = rep.max_violation <= 0.0;
  return rep;
}

// Distance to the momentum controller's target set
// {x = x*, u1 = u*, u2 = u*, u3 in [delta, Delta]} per sample.
inline std::vector<std::pair<HybridTime, double>> nesterov_set_distance(
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
    const double d = std::sqrt((arc.x(i) - xstar).squaredNorm() +
                               (arc.u1(i) - ustar).squaredNorm() +
                               (arc.u2(i) - ustar).squaredNorm());
    series.emplace_back(arc.times[i], d);
  }
  return series;
}

// Flow-interval sub-optimality budget of the practical-convergence monitor:
// alpha(s,j) = theta x~^T P x~ e^{varrho u3} +
//              (1-theta)(|u1-u2|^2/4 + |u2-u*|^2/4 + kappa delta^2 (f - f*)).
inline double practical_alpha(const LyapunovMonitor& mon, const HybridArc& arc, std::size_t i,
                              const DisturbanceSignal& disturbance, double delta) {
  const Vector w = disturbance.value(arc.times[i].t);
  const std::size_t s = static_cast<std::size_t>(arc.sigma(i) - 1);
  const Vector u1 = arc.u1(i), u2 = arc.u2(i);
  const Vector xt = arc.x(i) - equilibrium_state(mon.plant.modes[s], u1, w);
  const Vector ustar = optimal_input(*mon.cost, mon.map, w);
  const double fgap = f_value(*mon.cost, mon.map, u1, w) - f_value(*mon.cost, mon.map, ustar, w);
  const double th = mon.theta[s];
  const double alpha_p = xt.dot(mon.P[s] * xt) * std::exp(mon.varrho * arc.u3(i));
  const double alpha_c = 0.25 * (u1 - u2).squaredNorm() + 0.25 * (u2 - ustar).squaredNorm() +
                         mon.kappa * delta * delta * fgap;
  return th * alpha_p + (1.0 - th) * alpha_c;
}

}  // namespace swflow
