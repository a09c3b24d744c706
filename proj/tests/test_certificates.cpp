#include <catch2/catch_amalgamated.hpp>

#include "swflow/certificates.hpp"
#include "swflow/experiments.hpp"
#include "swflow/generate.hpp"

using namespace swflow;

namespace {

// scalar benchmark loop: A=-1, B=1, C=1, D=0, E=1, Q=1 (so P=1/2),
// R=Qy=1/2 (so ell_u=ell_y=1, G=H=1, ell=2, mu=2)
struct ScalarInstance {
  SwitchedPlant plant;
  std::shared_ptr<QuadraticCost> cost;
  SteadyStateMap map;
  CostConstants cc;
  StabilityCertificate stab;
};

ScalarInstance scalar_instance(double r = 0.5, double qy = 0.5) {
  ScalarInstance si;
  LtiMode mode{Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, 1.0),
               Matrix::Constant(1, 1, 1.0)};
  si.plant.modes = {mode};
  si.plant.C = Matrix::Identity(1, 1);
  si.plant.D = Matrix::Zero(1, 1);
  si.cost = std::make_shared<QuadraticCost>(Matrix::Constant(1, 1, r),
                                            Matrix::Constant(1, 1, qy), Vector::Zero(1));
  si.map = steady_state_maps(mode, si.plant.C, si.plant.D);
  si.cc = cost_constants(*si.cost, si.map);
  si.stab = mode_certificate(mode);
  return si;
}

}  // namespace

TEST_CASE("gradient_epsilon_bound golden values") {
  ScalarInstance si = scalar_instance();
  // P = 1/2, ||P A^-1 B|| = 1/2, ell_y = 1: eps_bar = 1 / (4 * 1 * 1 * 1 * 0.5)
  CHECK(si.stab.P(0, 0) == Catch::Approx(0.5).epsilon(1e-12));
  const double eb = gradient_epsilon_bound(si.stab, si.plant.modes[0], si.plant.C, si.map, 1.0);
  CHECK(eb == Catch::Approx(0.5).epsilon(1e-12));

  // ell_y = 0 flags the unbounded case
  CHECK(gradient_epsilon_bound(si.stab, si.plant.modes[0], si.plant.C, si.map, 0.0) ==
        kUnbounded);

  // the bound is linear in lambda_min(Q) at fixed P
  StabilityCertificate doubled = si.stab;
  doubled.Q *= 2.0;
  doubled.lambda_min_Q *= 2.0;
  CHECK(gradient_epsilon_bound(doubled, si.plant.modes[0], si.plant.C, si.map, 1.0) ==
        Catch::Approx(2.0 * eb).epsilon(1e-9));
}

TEST_CASE("gradient_coeffs golden values") {
  ScalarInstance si = scalar_instance();
  // theta = 1 / (1 + 2 * 0.5) = 1/2 regardless of the cost scaling
  GradientCoeffs co = gradient_coeffs(si.stab, si.plant.modes[0], si.plant.C, si.map, si.cc);
  CHECK(co.theta == Catch::Approx(0.5).epsilon(1e-12));
  // ell = 2, mu = 2: a_bar = max{1/2, 1/4} and a_under = min{1/2, 1/4}
  CHECK(co.a_bar == Catch::Approx(0.5).epsilon(1e-12));
  CHECK(co.a_under == Catch::Approx(0.25).epsilon(1e-12));

  // plug-in case ell = 4, mu = 4 with ell_y = 1 (R = 1.5, Qy = 0.5)
  ScalarInstance s2 = scalar_instance(1.5, 0.5);
  CHECK(s2.cc.ell == Catch::Approx(4.0));
  CHECK(s2.cc.mu == Catch::Approx(4.0));
  GradientCoeffs c2 = gradient_coeffs(s2.stab, s2.plant.modes[0], s2.plant.C, s2.map, s2.cc);
  CHECK(c2.theta == Catch::Approx(0.5).epsilon(1e-12));
  CHECK(c2.a_bar == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(c2.a_under == Catch::Approx(0.25).epsilon(1e-12));
  CHECK(c2.a_under <= c2.a_bar);
}

TEST_CASE("gradient_dwell_bound") {
  CostConstants cc;
  cc.ell = 4.0;
  cc.mu = 2.0;
  // a_bar / a_under = e: bound = (4 / 8) ln e = 1/2
  CHECK(gradient_dwell_bound(std::exp(1.0), 1.0, cc) == Catch::Approx(0.5).epsilon(1e-12));
  // single symmetric mode: bound 0
  CHECK(gradient_dwell_bound(1.0, 1.0, cc) == 0.0);
  // monotone in the ratio
  CHECK(gradient_dwell_bound(3.0, 1.0, cc) > gradient_dwell_bound(2.0, 1.0, cc));
}

TEST_CASE("gradient certificate aggregates and single-mode EISS coefficients") {
  ScalarInstance si = scalar_instance();
  DwellTimeParams dwell{1.0, 1};
  GradientCertificate cert =
      gradient_certificate(si.plant, si.map, si.cc, {0.25}, dwell);
  REQUIRE(cert.modes.size() == 1);
  const GradientModeCert& mc = cert.modes[0];
  CHECK(mc.eps_bar == Catch::Approx(0.5).epsilon(1e-12));
  // r = [2 * 0.5 * ||P A^-1 E||, 0.5 * 1 * 1 * 1] = [1/2, 1/2]
  CHECK(mc.r_x == Catch::Approx(0.5).epsilon(1e-12));
  CHECK(mc.r_u == Catch::Approx(0.5).epsilon(1e-12));
  // M-hat at theta = 1/2, b = 0, eps = 1/4:
  //   [[ 0.5 (4 - 1), -1/2 ], [ -1/2, 1/2 ]] with lambda_min = 1 - sqrt(1/2)
  CHECK(mc.k == Catch::Approx(0.5 * (1.0 - std::sqrt(0.5))).epsilon(1e-12));

  EissCoefficients co = gradient_eiss_coeffs(cert, si.cc, dwell, 0.0, false);
  CHECK(co.a0 == Catch::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(co.b0 == Catch::Approx(4.0).epsilon(1e-12));
  CHECK(co.c0 == 0.0);
  // d0 = sqrt2 ||r|| / (k min{1, mu^2}) = 1 / k = 2 / (1 - sqrt(1/2))
  CHECK(co.d0 == Catch::Approx(2.0 / (1.0 - std::sqrt(0.5))).epsilon(1e-12));
}

TEST_CASE("switched EISS coefficients recover the single-mode limit") {
  ScalarInstance si = scalar_instance();
  DwellTimeParams slow{1e6, 1};
  GradientCertificate cert = gradient_certificate(si.plant, si.map, si.cc, {0.25}, slow);
  const double lratio = std::log(cert.a_bar / cert.a_under);
  EissCoefficients sw =
      gradient_eiss_coeffs(cert, si.cc, slow, lratio * (1.0 + 1e-9), true);
  CHECK(sw.b0 == Catch::Approx(2.0 * si.cc.mu * si.cc.mu / si.cc.ell).epsilon(1e-6));
  CHECK(sw.c0 == Catch::Approx(0.0).margin(1e-6));

  // empty window when tau_d is below the dwell bound
  DwellTimeParams fast{1e-9, 1};
  GradientCertificate c2 = gradient_certificate(si.plant, si.map, si.cc, {0.25}, fast);
  SwitchedPlant two = si.plant;
  two.modes.push_back(si.plant.modes[0]);
  CHECK_THROWS_AS(gradient_eiss_coeffs(c2, si.cc, fast, 1.0, true), EmptyVarrhoWindow);
}

TEST_CASE("lemma_a2_check golden instance") {
  QuadFormParams p;
  p.alpha = p.gamma = 1.0;
  p.beta = p.eta = p.delta = p.phi = p.nu = 1.0;
  p.b = 0.0;
  p.theta = 0.5;
  p.epsilon = 0.1;
  QuadFormReport rep = lemma_a2_check(p);
  CHECK(rep.minor1 == Catch::Approx(4.5).epsilon(1e-12));
  CHECK(rep.minor2 == Catch::Approx(4.5 * 0.5 - 0.25).epsilon(1e-12));
  CHECK(rep.pd);
  CHECK(rep.eps_star == Catch::Approx(0.5).epsilon(1e-12));

  // b >= gamma / nu makes the lower-right entry nonpositive: never pd
  QuadFormParams bad = p;
  bad.b = 1.0;
  CHECK_FALSE(lemma_a2_check(bad).pd);
  bad.b = 2.0;
  CHECK_FALSE(lemma_a2_check(bad).pd);
}

TEST_CASE("lemma_a2 sufficiency direction on a grid") {
  QuadFormParams base;
  base.alpha = 2.0;
  base.beta = 0.7;
  base.eta = 1.3;
  base.delta = 0.9;
  base.phi = 1.1;
  base.nu = 0.8;
  base.gamma = 1.5;
  const double eps_star = lemma_a2_check(base).eps_star;

  // below the threshold some grid point certifies pd
  QuadFormParams below = base;
  below.epsilon = 0.5 * eps_star;
  bool found = false;
  for (int it = 1; it < 100 && !found; ++it) {
    for (int ib = 0; ib < 100 && !found; ++ib) {
      QuadFormParams probe = below;
      probe.theta = it / 100.0;
      probe.b = (ib / 100.0) * (base.gamma / base.nu);
      found = lemma_a2_check(probe).pd;
    }
  }
  CHECK(found);

  // at twice the threshold the lemma's optimizer (theta = eta/(eta+delta),
  // b = 0) fails
  QuadFormParams above = base;
  above.epsilon = 2.0 * eps_star;
  above.theta = base.eta / (base.eta + base.delta);
  above.b = 0.0;
  CHECK_FALSE(lemma_a2_check(above).pd);
}

TEST_CASE("nesterov_constants golden values") {
  // synthetic symmetric loop: all norms 1, P = Q = 1, kappa = rho = 1,
  // delta = 1, Delta = 2, ell_y = mu = ell = 1
  SwitchedPlant plant;
  plant.modes = {LtiMode{Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, 1.0),
                         Matrix::Constant(1, 1, 1.0)}};
  plant.C = Matrix::Identity(1, 1);
  plant.D = Matrix::Zero(1, 1);
  SteadyStateMap map = steady_state_maps(plant.modes[0], plant.C, plant.D);
  CostConstants cc;
  cc.ell_y = 1.0;
  cc.ell = 1.0;
  cc.mu = 1.0;
  NesterovParams params{1.0, 1.0, 1.0, 2.0, true};
  std::vector<std::optional<Matrix>> pov{Matrix::Constant(1, 1, 1.0)};
  std::vector<std::optional<Matrix>> qov{Matrix::Constant(1, 1, 1.0)};
  NesterovCertificate cert = nesterov_certificate(plant, map, cc, params, -1.0, pov, qov);

  const double eta = 4.0 * std::sqrt(2.0);
  const double delta_coeff = 2.0 * std::exp(2.0);
  const double theta = eta / (eta + delta_coeff);
  REQUIRE(cert.modes.size() == 1);
  CHECK(cert.modes[0].eta == Catch::Approx(eta).epsilon(1e-12));
  CHECK(cert.modes[0].delta_coeff == Catch::Approx(delta_coeff).epsilon(1e-12));
  CHECK(cert.modes[0].theta == Catch::Approx(theta).epsilon(1e-12));
  CHECK(cert.modes[0].a_bar ==
        Catch::Approx(std::max(2.0 * (1.0 - theta), theta * std::exp(2.0))).epsilon(1e-12));
  CHECK(cert.modes[0].a_under == Catch::Approx((1.0 - theta) / 4.0).epsilon(1e-12));
  CHECK(cert.b == Catch::Approx(1.0 / 16.0).epsilon(1e-12));
  CHECK(cert.gamma == Catch::Approx(1.0 / 8.0).epsilon(1e-12));
  // delta kappa mu^2 = 1 <= 2 rho: the ln branch is undefined, c = Delta - delta
  CHECK_FALSE(cert.c_ln_branch_defined);
  CHECK(cert.c == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(cert.modes[0].eps_bar ==
        Catch::Approx(std::exp(-1.0) / (1.0 + 32.0 * std::sqrt(2.0))).epsilon(1e-12));
  CHECK(cert.tau_under ==
        Catch::Approx(16.0 * std::log(cert.a_bar / cert.a_under)).epsilon(1e-12));
  CHECK(cert.restart_ok);

  // restart feasibility degenerates as Delta -> delta
  NesterovParams tight{1.0, 1.0, 1.0, 1.0 + 1e-6, false};
  NesterovCertificate c2 = nesterov_certificate(plant, map, cc, tight, -1.0, pov, qov);
  CHECK_FALSE(c2.restart_ok);
  NesterovParams tight_r0 = tight;
  tight_r0.r0 = true;
  CHECK_THROWS_AS(nesterov_certificate(plant, map, cc, tight_r0, -1.0, pov, qov),
                  RestartConditionViolated);

  // eps_bar decreases monotonically in Delta
  double prev = kUnbounded;
  for (double Delta : {2.0, 4.0, 8.0}) {
    NesterovParams pr{1.0, 1.0, 1.0, Delta, false};
    NesterovCertificate cd = nesterov_certificate(plant, map, cc, pr, -1.0, pov, qov);
    CHECK(cd.modes[0].eps_bar < prev);
    prev = cd.modes[0].eps_bar;
  }
}

TEST_CASE("nesterov_practical_epsilon golden values") {
  SwitchedPlant plant;
  plant.modes = {LtiMode{Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, 1.0),
                         Matrix::Constant(1, 1, 1.0)}};
  plant.C = Matrix::Identity(1, 1);
  plant.D = Matrix::Zero(1, 1);
  SteadyStateMap map = steady_state_maps(plant.modes[0], plant.C, plant.D);
  StabilityCertificate stab =
      mode_certificate(plant.modes[0], Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0));
  CostConstants cc;
  cc.ell_y = 1.0;
  cc.ell = 1.0;
  cc.ell0 = 1.0;
  NesterovParams params{1.0, 1.0, 1.0, 2.0, false};
  const double eps = nesterov_practical_epsilon(stab, plant.modes[0], plant.C, map, cc, params);
  CHECK(eps == Catch::Approx(1.0 / 48.0).epsilon(1e-12));

  // flat regions (ell0 -> 0) kill the guarantee
  CostConstants flat = cc;
  flat.ell0 = 0.0;
  CHECK(nesterov_practical_epsilon(stab, plant.modes[0], plant.C, map, flat, params) == 0.0);

  // linear in lambda_min(Q) at fixed P
  StabilityCertificate scaled = stab;
  scaled.Q *= 2.0;
  scaled.lambda_min_Q *= 2.0;
  CHECK(nesterov_practical_epsilon(scaled, plant.modes[0], plant.C, map, cc, params) ==
        Catch::Approx(2.0 * eps).epsilon(1e-12));
}

TEST_CASE("lyapunov monitor value and bracketing") {
  ScalarInstance si = scalar_instance();
  DwellTimeParams dwell{1.0, 1};
  GradientCertificate cert = gradient_certificate(si.plant, si.map, si.cc, {0.25}, dwell);
  LyapunovMonitor mon = make_gradient_monitor(si.plant, si.cost, cert, 0.0);

  // synthesize single-sample arcs at chosen states
  auto arc_at = [&](double x, double u) {
    HybridArc arc;
    arc.n = 1;
    arc.m = 1;
    arc.p = 1;
    arc.times.push_back({0.0, 0});
    Vector s(4);
    s << x, u, 1.0, 1.0;  // x, u, tau, sigma
    arc.states.push_back(s);
    return arc;
  };
  auto w0 = DisturbanceSignal::constant(Vector::Constant(1, 0.3));
  const Vector w = w0.value(0.0);
  const Vector ustar = optimal_input(*si.cost, si.map, w);
  const Vector xstar = equilibrium_state(si.plant.modes[0], ustar, w);

  // V vanishes at the target and is positive elsewhere, with the
  // a_under |z|^2 <= V <= a_bar |z|^2 bracket in shifted coordinates
  CHECK(lyapunov_value(mon, arc_at(xstar(0), ustar(0)), 0, w0) == Catch::Approx(0.0).margin(1e-12));
  Rng rng(404);
  for (int k = 0; k < 1000; ++k) {
    const double u = ustar(0) + rng.uniform(-5.0, 5.0);
    const double x = rng.uniform(-5.0, 5.0);
    const double v = lyapunov_value(mon, arc_at(x, u), 0, w0);
    const double xt = x - equilibrium_state(si.plant.modes[0], Vector::Constant(1, u), w)(0);
    const double z2 = xt * xt + (u - ustar(0)) * (u - ustar(0));
    if (z2 > 1e-12) CHECK(v > 0.0);
    CHECK(v >= cert.a_under * z2 - 1e-9);
    CHECK(v <= cert.a_bar * z2 + 1e-9);
  }

  // theta = 1 reduces V to the pure quadratic form in the shifted state
  GradientCertificate cert1 =
      gradient_certificate(si.plant, si.map, si.cc, {0.25}, dwell, 1.0 - 1e-12);
  LyapunovMonitor mon1 = make_gradient_monitor(si.plant, si.cost, cert1, 0.0);
  const double x = 2.0, u = -1.0;
  const double xt = x - equilibrium_state(si.plant.modes[0], Vector::Constant(1, u), w)(0);
  CHECK(lyapunov_value(mon1, arc_at(x, u), 0, w0) ==
        Catch::Approx(si.stab.P(0, 0) * xt * xt).epsilon(1e-9));
}

TEST_CASE("eiss_envelope_check") {
  EissCoefficients co{2.0, 1.0, 0.0, 0.5, 0.0};
  // identically at the target with no drift: holds with max_violation <= 0
  std::vector<std::pair<HybridTime, double>> zero;
  for (int i = 0; i < 10; ++i) zero.push_back({{0.1 * i, 0}, 0.0});
  auto rep = eiss_envelope_check(zero, co, 0.0, 0.0);
  CHECK(rep.holds);
  CHECK(rep.max_violation <= 0.0);

  // a decaying series inside the envelope
  std::vector<std::pair<HybridTime, double>> decay;
  for (int i = 0; i < 50; ++i) decay.push_back({{0.1 * i, 0}, std::exp(-0.6 * 0.1 * i)});
  CHECK(eiss_envelope_check(decay, co, 1.0, 0.0).holds);

  // doubling b0 tightens the envelope past the series
  EissCoefficients tight = co;
  tight.b0 = 4.0;
  auto bad = eiss_envelope_check(decay, tight, 1.0, 0.0);
  CHECK_FALSE(bad.holds);
  CHECK(bad.max_violation > 0.0);
  CHECK(bad.first_violation.t > 0.0);
}

TEST_CASE("lyapunov decrease along a simulated gradient arc") {
  ScalarInstance si = scalar_instance();
  Scenario sc;
  sc.plant = si.plant;
  sc.cost = si.cost;
  sc.controller = GradientConfig{Vector::Constant(1, 2.0)};
  sc.signal.events = {{0.0, 1}};
  sc.signal.horizon = 3.0;
  sc.epsilon = {0.02};
  sc.disturbance = DisturbanceSignal::constant(Vector::Constant(1, 0.3));
  sc.integrator = {2e-3, 3.0, 0.02};
  HybridArc arc = simulate(sc);

  DwellTimeParams dwell{1.0, 1};
  GradientCertificate cert = gradient_certificate(si.plant, si.map, si.cc, sc.epsilon, dwell);
  LyapunovMonitor mon = make_gradient_monitor(si.plant, si.cost, cert, 0.0);
  const double b0 = 2.0 * si.cc.mu * si.cc.mu / si.cc.ell;
  auto rep = lyapunov_decrease_check(arc, mon, sc.disturbance, DecreaseCheck::flow_rate, b0,
                                     0.05 + sc.integrator.step);
  CHECK(rep.holds);
  CHECK(rep.checked > 50);
}

TEST_CASE("coefficient sanity over generated instances") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    Rng rng(seed * 31);
    SwitchedPlant plant = random_switched_plant(rng, 4, 2, 2, 2, 2);
    auto cost = std::make_shared<QuadraticCost>(rng.spd(2, 0.5, 1.5), rng.spd(2, 0.4, 1.0),
                                                rng.vector(2));
    SteadyStateMap map = steady_state_maps(plant.modes[0], plant.C, plant.D);
    CostConstants cc = cost_constants(*cost, map);
    GradientCertificate cert = gradient_certificate(plant, map, cc, {}, DwellTimeParams{1.0, 1});
    CHECK(cert.a_under <= cert.a_bar);
    for (const auto& mc : cert.modes) {
      CHECK(mc.coeffs.a_under <= mc.coeffs.a_bar);
      CHECK(mc.eps_bar > 0.0);
    }
    // the varrho window opens exactly when tau_d clears the dwell bound
    DwellTimeParams above{cert.tau_d_min * 1.5 + 0.1, 1};
    auto [lo, hi] = varrho_window(cert.a_bar, cert.a_under, cc, above.tau_d);
    CHECK(lo < hi);
    DwellTimeParams below{cert.tau_d_min * 0.5, 1};
    if (cert.tau_d_min > 0.0) {
      auto [lo2, hi2] = varrho_window(cert.a_bar, cert.a_under, cc, below.tau_d);
      CHECK(lo2 >= hi2);
    }
  }
}

TEST_CASE("arcs passing the decrease checks also pass the derived envelope") {
  // Lemma A.1 chain on the switched weight W = e^{varrho tau} V: flow rate
  // b0 and jump contraction c0 give the envelope
  // sqrt(abar e^{varrho N0} / aunder) e^{-(b0 t + c0 j)/2} on the error.
  Scenario sc = swflow::experiments::gradient_bench(4, 2);
  SteadyStateMap map = steady_state_maps(sc.plant.modes[0], sc.plant.C, sc.plant.D);
  CostConstants cc = cost_constants(dynamic_cast<const QuadraticCost&>(*sc.cost), map);
  GradientCertificate cert = gradient_certificate(sc.plant, map, cc, sc.epsilon, sc.dwell);
  const double varrho = 0.5 * (cert.varrho_lo + cert.varrho_hi);
  EissCoefficients co = gradient_eiss_coeffs(cert, cc, sc.dwell, varrho, true);
  co.d0 = 0.0;  // constant w
  HybridArc arc = simulate(sc);
  REQUIRE(arc.plant_switch_count() >= 1);

  LyapunovMonitor mon = make_gradient_monitor(sc.plant, sc.cost, cert, varrho);
  auto flows = lyapunov_decrease_check(arc, mon, sc.disturbance, DecreaseCheck::flow_rate,
                                       co.b0, 0.05 + sc.integrator.step,
                                       JumpKind::plant_switch, 0.0, true);
  auto jumps = lyapunov_decrease_check(arc, mon, sc.disturbance,
                                       DecreaseCheck::jump_contraction, co.c0, 0.05,
                                       JumpKind::plant_switch, 0.0, true);
  REQUIRE(flows.holds);
  REQUIRE(jumps.holds);
  // switches after V reaches the numerical floor are skipped by design
  REQUIRE(jumps.checked >= 1);
  REQUIRE(jumps.checked <= arc.plant_switch_count());

  auto errs = tracking_error(arc, *sc.cost, sc.plant, sc.disturbance);
  CHECK(eiss_envelope_check(errs, co, errs.front().second, 0.0).holds);
}

TEST_CASE("momentum V brackets the shifted set distance along an arc") {
  Scenario sc = swflow::experiments::nesterov_bench(3);
  const auto& cfg = std::get<NesterovConfig>(sc.controller);
  SteadyStateMap map = steady_state_maps(sc.plant.modes[0], sc.plant.C, sc.plant.D);
  CostConstants cc = cost_constants(dynamic_cast<const QuadraticCost&>(*sc.cost), map);
  NesterovCertificate cert = nesterov_certificate(sc.plant, map, cc, cfg.params);
  HybridArc arc = simulate(sc);
  LyapunovMonitor mon = make_nesterov_monitor(sc.plant, sc.cost, cert, cfg.params, 0.0);
  for (std::size_t i = 0; i < arc.size(); ++i) {
    const Vector w = sc.disturbance.value(arc.times[i].t);
    const Vector ustar = optimal_input(*sc.cost, map, w);
    const Vector xt = arc.x(i) - equilibrium_state(sc.plant.modes[0], arc.u1(i), w);
    const double d2 = xt.squaredNorm() + (arc.u1(i) - ustar).squaredNorm() +
                      (arc.u2(i) - ustar).squaredNorm();
    if (d2 < 1e-16) continue;
    const double v = lyapunov_value(mon, arc, i, sc.disturbance, false);
    CHECK(v >= cert.a_under * d2 * (1.0 - 1e-9));
    CHECK(v <= cert.a_bar * d2 * (1.0 + 1e-9));
  }
}

TEST_CASE("momentum resets never increase V with r0 = 0") {
  ScalarInstance si = scalar_instance();
  Scenario sc;
  sc.plant = si.plant;
  sc.cost = si.cost;
  NesterovParams params{1.0, 2.0, 0.5, 2.0, false};
  sc.controller = NesterovConfig{params, Vector::Constant(1, 2.0), Vector::Constant(1, 2.0), -1.0};
  sc.signal.events = {{0.0, 1}};
  sc.signal.horizon = 12.0;
  sc.epsilon = {0.02};
  sc.disturbance = DisturbanceSignal::constant(Vector::Constant(1, 0.2));
  sc.integrator = {2e-3, 12.0, 0.05};
  HybridArc arc = simulate(sc);
  REQUIRE(arc.controller_reset_count() >= 5);

  NesterovCertificate cert = nesterov_certificate(si.plant, si.map, si.cc, params);
  LyapunovMonitor mon = make_nesterov_monitor(si.plant, si.cost, cert, params, 0.0);
  auto rep = lyapunov_decrease_check(arc, mon, sc.disturbance, DecreaseCheck::jump_contraction,
                                     0.0, 1e-9);
  CHECK(rep.holds);
  CHECK(rep.checked == arc.controller_reset_count());
}
