#pragma once

#include <iostream>
#include <string>

#include "swflow/experiments.hpp"
#include "swflow/scenario_io.hpp"

namespace swflow {
namespace cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCertificateFailure = 1;
inline constexpr int kExitInputError = 2;

struct CostData {
  CostConstants cc;
  SteadyStateMap map;
};

inline CostData scenario_cost_data(const Scenario& sc) {
  CostData out;
  out.map = steady_state_maps(sc.plant.modes[0], sc.plant.C, sc.plant.D);
  if (const auto* quad = dynamic_cast<const QuadraticCost*>(sc.cost.get())) {
    out.cc = cost_constants(*quad, out.map);
  } else if (const auto* quartic = dynamic_cast<const QuarticCost*>(sc.cost.get())) {
    out.cc = quartic_constants(*quartic, out.map, sc.quartic_ball_radius,
                               sc.quartic_ball_radius);
  }
  return out;
}

// Prints the certificate report for a scenario: per-mode epsilon bound with
// PASS/FAIL against the configured epsilon, the dwell bound against the
// configured tau_d, restart feasibility, the varrho window, and the E-ISS
// coefficients. Returns the exit code.
inline int cmd_check(const std::string& path, std::ostream& out, bool quiet = false) {
  Scenario sc;
  try {
    sc = load_scenario(path);
  } catch (const ParseError& e) {
    out << "parse error: " << e.what() << "\n";
    return kExitInputError;
  }

  bool all_pass = true;
  experiments::Summary kv;
  try {
    const CostData data = scenario_cost_data(sc);
    const bool switched = sc.plant.num_modes() > 1 && sc.signal.events.size() > 1;
    kv.add("ell", data.cc.ell);
    kv.add("mu", data.cc.mu);

    if (!sc.is_nesterov()) {
      GradientCertificate cert =
          gradient_certificate(sc.plant, data.map, data.cc, sc.epsilon, sc.dwell,
                               sc.certificates.theta_override);
      for (std::size_t s = 0; s < cert.modes.size(); ++s) {
        const double eps = sc.epsilon[s];
        const bool pass = eps < cert.modes[s].eps_bar;
        all_pass = all_pass && pass;
        if (!quiet)
          out << "mode " << (s + 1) << ": eps_bar = " << format_double(cert.modes[s].eps_bar)
              << ", eps = " << format_double(eps) << " [" << (pass ? "PASS" : "FAIL") << "]\n";
        kv.add("mode" + std::to_string(s + 1) + ".eps_bar", cert.modes[s].eps_bar);
        kv.add("mode" + std::to_string(s + 1) + ".theta", cert.modes[s].coeffs.theta);
        kv.add("mode" + std::to_string(s + 1) + ".a_bar", cert.modes[s].coeffs.a_bar);
        kv.add("mode" + std::to_string(s + 1) + ".a_under", cert.modes[s].coeffs.a_under);
      }
      if (switched) {
        const bool dwell_ok = sc.dwell.tau_d > cert.tau_d_min;
        all_pass = all_pass && dwell_ok;
        if (!quiet)
          out << "dwell bound: tau_d_min = " << format_double(cert.tau_d_min)
              << ", tau_d = " << format_double(sc.dwell.tau_d) << " ["
              << (dwell_ok ? "PASS" : "FAIL") << "]\n";
        const bool window_ok = cert.varrho_lo < cert.varrho_hi;
        all_pass = all_pass && window_ok;
        if (!quiet)
          out << "varrho window: (" << format_double(cert.varrho_lo) << ", "
              << format_double(cert.varrho_hi) << ") [" << (window_ok ? "PASS" : "FAIL")
              << "]\n";
        kv.add("tau_d_min", cert.tau_d_min);
        kv.add("varrho_lo", cert.varrho_lo);
        kv.add("varrho_hi", cert.varrho_hi);
        if (window_ok) {
          const double varrho = sc.certificates.varrho > 0.0
                                    ? sc.certificates.varrho
                                    : 0.5 * (cert.varrho_lo + cert.varrho_hi);
          EissCoefficients co = gradient_eiss_coeffs(cert, data.cc, sc.dwell, varrho, true);
          if (!quiet)
            out << "E-ISS: a0 = " << format_double(co.a0) << ", b0 = " << format_double(co.b0)
                << ", c0 = " << format_double(co.c0) << ", d0 = " << format_double(co.d0)
                << " (varrho = " << format_double(varrho) << ")\n";
          kv.add("a0", co.a0);
          kv.add("b0", co.b0);
          kv.add("c0", co.c0);
          kv.add("d0", co.d0);
        }
      } else {
        if (!quiet) out << "dwell bound: not applicable (single mode)\n";
        EissCoefficients co = gradient_eiss_coeffs(cert, data.cc, sc.dwell, 0.0, false);
        if (!quiet)
          out << "E-ISS: a0 = " << format_double(co.a0) << ", b0 = " << format_double(co.b0)
              << ", c0 = 0, d0 = " << format_double(co.d0) << "\n";
        kv.add("a0", co.a0);
        kv.add("b0", co.b0);
        kv.add("d0", co.d0);
      }
    } else if (data.cc.mu == 0.0) {
      // convex-only cost: the practical time-scale bound applies
      const auto& cfg = std::get<NesterovConfig>(sc.controller);
      if (cfg.params.r0) {
        out << "FAIL: r0 = 1 requires a strongly convex cost\n";
        return kExitCertificateFailure;
      }
      for (std::size_t s = 0; s < sc.plant.modes.size(); ++s) {
        const LtiMode& mode = sc.plant.modes[s];
        StabilityCertificate stab = mode_certificate(mode);
        const double eps_bar = nesterov_practical_epsilon(stab, mode, sc.plant.C, data.map,
                                                          data.cc, cfg.params);
        const double eps = sc.epsilon[s];
        const bool pass = eps <= eps_bar;
        all_pass = all_pass && pass;
        if (!quiet)
          out << "mode " << (s + 1)
              << " (practical bound): eps_bar = " << format_double(eps_bar)
              << ", eps = " << format_double(eps) << " [" << (pass ? "PASS" : "FAIL") << "]\n";
        kv.add("mode" + std::to_string(s + 1) + ".eps_bar", eps_bar);
      }
      if (!quiet)
        out << "E-ISS coefficients: not applicable (practical convergence only)\n";
    } else {
      const auto& cfg = std::get<NesterovConfig>(sc.controller);
      NesterovCertificate cert =
          nesterov_certificate(sc.plant, data.map, data.cc, cfg.params,
                               sc.certificates.theta_override);
      for (std::size_t s = 0; s < cert.modes.size(); ++s) {
        const double eps = sc.epsilon[s];
        const bool pass = eps < cert.modes[s].eps_bar;
        all_pass = all_pass && pass;
        if (!quiet)
          out << "mode " << (s + 1) << ": eps_bar = " << format_double(cert.modes[s].eps_bar)
              << ", eps = " << format_double(eps) << " [" << (pass ? "PASS" : "FAIL") << "]\n";
        kv.add("mode" + std::to_string(s + 1) + ".eps_bar", cert.modes[s].eps_bar);
      }
      if (cfg.params.r0) {
        all_pass = all_pass && cert.restart_ok;
        if (!quiet)
          out << "restart condition Delta^2 - delta^2 > 2 rho / (kappa mu): ["
              << (cert.restart_ok ? "PASS" : "FAIL") << "]\n";
      }
      if (!cert.c_ln_branch_defined && !quiet)
        out << "note: delta kappa mu^2 <= 2 rho, using c = Delta - delta\n";
      if (switched) {
        const bool dwell_ok = sc.dwell.tau_d > cert.tau_under;
        all_pass = all_pass && dwell_ok;
        if (!quiet)
          out << "dwell bound: tau_under = " << format_double(cert.tau_under)
              << ", tau_d = " << format_double(sc.dwell.tau_d) << " ["
              << (dwell_ok ? "PASS" : "FAIL") << "]\n";
      } else if (!quiet) {
        out << "dwell bound: not applicable (single mode)\n";
      }
      EissCoefficients co = nesterov_eiss_coeffs(cert);
      if (!quiet)
        out << "E-ISS: a0 = " << format_double(co.a0) << ", b0 = " << format_double(co.b0)
            << ", c0 = " << format_double(co.c0) << ", d0 = " << format_double(co.d0) << "\n";
      kv.add("a0", co.a0);
      kv.add("b0", co.b0);
      kv.add("c0", co.c0);
      kv.add("b", cert.b);
      kv.add("c", cert.c);
      kv.add("gamma", cert.gamma);
      kv.add("tau_under", cert.tau_under);
      kv.add("restart_ok", cert.restart_ok);
    }
  } catch (const RestartConditionViolated& e) {
    out << "FAIL: " << e.what() << "\n";
    return kExitCertificateFailure;
  } catch (const EmptyVarrhoWindow& e) {
    out << "FAIL: " << e.what() << "\n";
    return kExitCertificateFailure;
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  if (!quiet) out << kv.str();
  out << (all_pass ? "CHECK PASS" : "CHECK FAIL") << "\n";
  return all_pass ? kExitOk : kExitCertificateFailure;
}

// Simulates a scenario and writes the arc CSV. A non-finite state is a
// reported outcome (divergence column), not a failure.
inline int cmd_simulate(const std::string& path, const std::string& out_csv, std::ostream& out,
                        bool quiet = false) {
  Scenario sc;
  try {
    sc = load_scenario(path);
  } catch (const ParseError& e) {
    out << "parse error: " << e.what() << "\n";
    return kExitInputError;
  }
  try {
    HybridArc arc = simulate(sc);
    ArcSeries series;
    auto errs = tracking_error(arc, *sc.cost, sc.plant, sc.disturbance);
    const CostData data = scenario_cost_data(sc);
    for (const auto& [ht, e] : errs) series.err_track.push_back(e);
    for (const auto& [ht, g] : suboptimality(arc, *sc.cost, data.map, sc.disturbance))
      series.f_gap.push_back(g);

    // Lyapunov and envelope columns when the certificate machinery applies;
    // convex-only costs get V from the practical monitor and no envelope
    try {
      const bool switched = sc.plant.num_modes() > 1 && sc.signal.events.size() > 1;
      if (data.cc.mu == 0.0) {
        if (sc.is_nesterov()) {
          const auto& cfg = std::get<NesterovConfig>(sc.controller);
          LyapunovMonitor mon = make_practical_monitor(sc.plant, sc.cost, data.map, data.cc,
                                                       cfg.params,
                                                       std::max(sc.certificates.varrho, 0.0));
          for (std::size_t i = 0; i < arc.size(); ++i)
            series.V.push_back(lyapunov_value(mon, arc, i, sc.disturbance, false));
        }
      } else {
        EissCoefficients co;
        LyapunovMonitor mon;
        if (!sc.is_nesterov()) {
          GradientCertificate cert =
              gradient_certificate(sc.plant, data.map, data.cc, sc.epsilon, sc.dwell,
                                   sc.certificates.theta_override);
          const double varrho =
              sc.certificates.varrho > 0.0 || !switched
                  ? std::max(sc.certificates.varrho, 0.0)
                  : 0.5 * (cert.varrho_lo + cert.varrho_hi);
          co = gradient_eiss_coeffs(cert, data.cc, sc.dwell, varrho, switched);
          mon = make_gradient_monitor(sc.plant, sc.cost, cert, varrho);
        } else {
          const auto& cfg = std::get<NesterovConfig>(sc.controller);
          NesterovCertificate cert =
              nesterov_certificate(sc.plant, data.map, data.cc, cfg.params,
                                   sc.certificates.theta_override);
          co = nesterov_eiss_coeffs(cert);
          mon = make_nesterov_monitor(sc.plant, sc.cost, cert, cfg.params,
                                      std::max(sc.certificates.varrho, 0.0));
        }
        const double sup_wdot = sc.disturbance.sup_derivative_norm();
        const double z0 = errs.empty() ? 0.0 : errs.front().second;
        for (std::size_t i = 0; i < arc.size(); ++i) {
          series.V.push_back(lyapunov_value(mon, arc, i, sc.disturbance, switched));
          series.envelope.push_back(
              co.a0 * (std::exp(-0.5 * (co.b0 * arc.times[i].t +
                                        co.c0 * static_cast<double>(arc.times[i].j))) *
                           z0 +
                       co.d0 * sup_wdot));
        }
      }
    } catch (const Error&) {
      // leave V and envelope columns as nan
    }

    write_arc_csv_file(out_csv, arc, sc.plant, sc.disturbance, series);
    if (!quiet) {
      out << "samples = " << arc.size() << "\n";
      out << "plant_switches = " << arc.plant_switch_count() << "\n";
      out << "controller_resets = " << arc.controller_reset_count() << "\n";
      out << "final_tracking_error = "
          << format_double(series.err_track.empty() ? 0.0 : series.err_track.back()) << "\n";
      out << "diverged = " << (arc.diverged ? "true" : "false") << "\n";
      if (arc.diverged)
        out << "divergence_time = " << format_double(arc.divergence_time) << "\n";
    }
    return kExitOk;
  } catch (const StiffnessBudgetExceeded& e) {
    out << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return kExitCertificateFailure;
  }
}

inline int cmd_experiment(const std::string& name, const std::string& out_dir,
                          std::uint64_t seed, std::ostream& out, bool quiet = false) {
  try {
    const int code = experiments::run_experiment(name, out_dir, seed);
    if (!quiet) {
      std::ifstream summary(out_dir + "/summary.txt");
      out << summary.rdbuf();
    }
    out << "experiment " << name << (code == 0 ? " PASS" : " FAIL") << "\n";
    return code == 0 ? kExitOk : kExitCertificateFailure;
  } catch (const UnknownExperiment& e) {
    out << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return kExitCertificateFailure;
  }
}

}  // namespace cli
}  // namespace swflow
