#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "swflow/certificates.hpp"
#include "swflow/generate.hpp"
#include "swflow/sim.hpp"

namespace swflow {

using Json = nlohmann::json;

// 17 significant digits: doubles round-trip losslessly through the text form.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline ParseError positioned(const std::string& path, const std::string& what) {
  return ParseError(path + ": " + what);
}

inline ParseError syntax_error(const std::string& text, const nlohmann::json::parse_error& e) {
  // nlohmann reports a byte offset; convert it to line/column
  int line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::ostringstream os;
  os << "syntax error at line " << line << ", column " << col;
  return ParseError(os.str(), line, col);
}

inline const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw positioned(path + "." + key, "missing field");
  return j.at(key);
}

inline double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw positioned(path, "expected a number");
  return j.get<double>();
}

inline int as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw positioned(path, "expected an integer");
  return j.get<int>();
}

inline bool as_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw positioned(path, "expected a boolean");
  return j.get<bool>();
}

inline Vector as_vector(const Json& j, const std::string& path) {
  if (!j.is_array()) throw positioned(path, "expected an array of numbers");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = as_number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

inline Matrix as_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw positioned(path, "expected a nested array (rows)");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) throw positioned(path + "[0]", "expected an array row");
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols)
      throw positioned(rp, "row length differs from row 0");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          as_number(j[r][c], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

inline Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json vector_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

}  // namespace detail

inline Scenario scenario_from_json(const Json& root) {
  using detail::as_bool;
  using detail::as_int;
  using detail::as_matrix;
  using detail::as_number;
  using detail::as_vector;
  using detail::positioned;
  using detail::require;

  Scenario sc;

  // plant: inline matrices or seeded generator
  const Json& plant = require(root, "plant", "scenario");
  if (plant.contains("generator")) {
    const Json& gen = plant.at("generator");
    Rng rng(static_cast<std::uint64_t>(as_int(require(gen, "seed", "plant.generator"),
                                               "plant.generator.seed")));
    sc.plant = random_switched_plant(
        rng, as_int(require(gen, "n", "plant.generator"), "plant.generator.n"),
        as_int(require(gen, "m", "plant.generator"), "plant.generator.m"),
        as_int(require(gen, "p", "plant.generator"), "plant.generator.p"),
        as_int(require(gen, "q", "plant.generator"), "plant.generator.q"),
        as_int(require(gen, "S", "plant.generator"), "plant.generator.S"));
  } else {
    const Json& modes = require(plant, "modes", "plant");
    if (!modes.is_array() || modes.empty())
      throw positioned("plant.modes", "expected a non-empty array");
    for (std::size_t s = 0; s < modes.size(); ++s) {
      const std::string mp = "plant.modes[" + std::to_string(s) + "]";
      LtiMode mode;
      mode.A = as_matrix(require(modes[s], "A", mp), mp + ".A");
      mode.B = as_matrix(require(modes[s], "B", mp), mp + ".B");
      mode.E = as_matrix(require(modes[s], "E", mp), mp + ".E");
      sc.plant.modes.push_back(std::move(mode));
    }
    sc.plant.C = as_matrix(require(plant, "C", "plant"), "plant.C");
    sc.plant.D = as_matrix(require(plant, "D", "plant"), "plant.D");
    try {
      sc.plant.validate();
    } catch (const DimensionMismatch& e) {
      throw positioned("plant", e.what());
    }
  }

  // cost
  const Json& cost = require(root, "cost", "scenario");
  const std::string kind = require(cost, "kind", "cost").get<std::string>();
  if (kind == "quadratic") {
    try {
      sc.cost = std::make_shared<QuadraticCost>(as_matrix(require(cost, "R", "cost"), "cost.R"),
                                                as_matrix(require(cost, "Qy", "cost"), "cost.Qy"),
                                                as_vector(require(cost, "y_ref", "cost"),
                                                          "cost.y_ref"));
    } catch (const std::invalid_argument& e) {
      throw positioned("cost", e.what());
    }
  } else if (kind == "quartic") {
    sc.cost = std::make_shared<QuarticCost>(as_number(require(cost, "y_ref", "cost"),
                                                      "cost.y_ref"));
    if (cost.contains("ball_radius"))
      sc.quartic_ball_radius = as_number(cost.at("ball_radius"), "cost.ball_radius");
  } else {
    throw positioned("cost.kind", "expected \"quadratic\" or \"quartic\"");
  }

  // controller
  const Json& ctrl = require(root, "controller", "scenario");
  const std::string ckind = require(ctrl, "kind", "controller").get<std::string>();
  if (ckind == "gradient") {
    GradientConfig cfg;
    if (ctrl.contains("u0")) cfg.u0 = as_vector(ctrl.at("u0"), "controller.u0");
    sc.controller = cfg;
  } else if (ckind == "nesterov") {
    NesterovConfig cfg;
    cfg.params.kappa = as_number(require(ctrl, "kappa", "controller"), "controller.kappa");
    cfg.params.rho = as_number(require(ctrl, "rho", "controller"), "controller.rho");
    cfg.params.delta = as_number(require(ctrl, "delta", "controller"), "controller.delta");
    cfg.params.Delta = as_number(require(ctrl, "Delta", "controller"), "controller.Delta");
    cfg.params.r0 = as_bool(require(ctrl, "r0", "controller"), "controller.r0");
    if (ctrl.contains("unbounded_timer"))
      cfg.params.unbounded_timer = as_bool(ctrl.at("unbounded_timer"),
                                           "controller.unbounded_timer");
    if (ctrl.contains("u1_0")) cfg.u1_0 = as_vector(ctrl.at("u1_0"), "controller.u1_0");
    if (ctrl.contains("u2_0")) cfg.u2_0 = as_vector(ctrl.at("u2_0"), "controller.u2_0");
    if (ctrl.contains("u3_0")) cfg.u3_0 = as_number(ctrl.at("u3_0"), "controller.u3_0");
    try {
      cfg.params.validate();
    } catch (const std::invalid_argument& e) {
      throw positioned("controller", e.what());
    }
    sc.controller = cfg;
  } else {
    throw positioned("controller.kind", "expected \"gradient\" or \"nesterov\"");
  }

  // switching
  const Json& sw = require(root, "switching", "scenario");
  sc.dwell.tau_d = as_number(require(sw, "tau_d", "switching"), "switching.tau_d");
  sc.dwell.N0 = as_int(require(sw, "N0", "switching"), "switching.N0");
  if (sc.dwell.tau_d <= 0.0 || sc.dwell.N0 < 1)
    throw positioned("switching", "need tau_d > 0 and N0 >= 1");
  const Json& integ = require(root, "integrator", "scenario");
  sc.integrator.step = as_number(require(integ, "step", "integrator"), "integrator.step");
  sc.integrator.horizon = as_number(require(integ, "horizon", "integrator"),
                                    "integrator.horizon");
  if (integ.contains("record_interval"))
    sc.integrator.record_interval = as_number(integ.at("record_interval"),
                                              "integrator.record_interval");
  if (sw.contains("events")) {
    const Json& events = sw.at("events");
    if (!events.is_array() || events.empty())
      throw positioned("switching.events", "expected a non-empty array of [t, mode] pairs");
    for (std::size_t i = 0; i < events.size(); ++i) {
      const std::string ep = "switching.events[" + std::to_string(i) + "]";
      if (!events[i].is_array() || events[i].size() != 2)
        throw positioned(ep, "expected [t, mode]");
      sc.signal.events.emplace_back(as_number(events[i][0], ep + "[0]"),
                                    as_int(events[i][1], ep + "[1]"));
    }
    sc.signal.horizon = sc.integrator.horizon;
    if (sw.contains("tau0")) sc.signal.tau0 = as_number(sw.at("tau0"), "switching.tau0");
    try {
      sc.signal.validate();
    } catch (const std::invalid_argument& e) {
      throw positioned("switching.events", e.what());
    }
  } else if (sw.contains("generator")) {
    const Json& gen = sw.at("generator");
    const double rate = as_number(require(gen, "rate", "switching.generator"),
                                  "switching.generator.rate");
    const double jump_prob = gen.contains("jump_prob")
                                 ? as_number(gen.at("jump_prob"), "switching.generator.jump_prob")
                                 : 0.5;
    const double tau0 =
        gen.contains("tau0") ? as_number(gen.at("tau0"), "switching.generator.tau0") : -1.0;
    try {
      sc.signal = generate_signal(
          sc.dwell, sc.plant.num_modes(), sc.integrator.horizon,
          static_cast<std::uint64_t>(as_int(require(gen, "seed", "switching.generator"),
                                            "switching.generator.seed")),
          rate, jump_prob, tau0);
    } catch (const InvalidRate& e) {
      throw positioned("switching.generator.rate", e.what());
    }
  } else {
    throw positioned("switching", "need either \"events\" or \"generator\"");
  }

  for (const auto& [t, mode] : sc.signal.events)
    if (mode < 1 || mode > sc.plant.num_modes())
      throw positioned("switching.events", "mode index out of range");

  // epsilon: scalar (shared) or one per mode
  const Json& eps = require(root, "epsilon", "scenario");
  if (eps.is_number()) {
    sc.epsilon.assign(static_cast<std::size_t>(sc.plant.num_modes()), eps.get<double>());
  } else {
    Vector v = as_vector(eps, "epsilon");
    if (v.size() != sc.plant.num_modes())
      throw positioned("epsilon", "need one value per mode");
    sc.epsilon.assign(v.data(), v.data() + v.size());
  }
  for (double e : sc.epsilon)
    if (!(e > 0.0)) throw positioned("epsilon", "values must be positive");

  // disturbance
  const Json& dist = require(root, "disturbance", "scenario");
  const std::string dkind = require(dist, "kind", "disturbance").get<std::string>();
  if (dkind == "constant") {
    sc.disturbance = DisturbanceSignal::constant(
        as_vector(require(dist, "value", "disturbance"), "disturbance.value"));
  } else if (dkind == "sinusoid") {
    const double phase =
        dist.contains("phase") ? as_number(dist.at("phase"), "disturbance.phase") : 0.0;
    const double freeze = dist.contains("freeze_time")
                              ? as_number(dist.at("freeze_time"), "disturbance.freeze_time")
                              : -1.0;
    sc.disturbance = DisturbanceSignal::sinusoid(
        as_vector(require(dist, "offset", "disturbance"), "disturbance.offset"),
        as_vector(require(dist, "amplitude", "disturbance"), "disturbance.amplitude"),
        as_number(require(dist, "omega", "disturbance"), "disturbance.omega"), phase, freeze);
  } else if (dkind == "piecewise_linear") {
    const Json& jt = require(dist, "times", "disturbance");
    const Json& jv = require(dist, "values", "disturbance");
    std::vector<double> times;
    for (std::size_t i = 0; i < jt.size(); ++i)
      times.push_back(as_number(jt[i], "disturbance.times[" + std::to_string(i) + "]"));
    std::vector<Vector> values;
    for (std::size_t i = 0; i < jv.size(); ++i)
      values.push_back(as_vector(jv[i], "disturbance.values[" + std::to_string(i) + "]"));
    try {
      sc.disturbance = DisturbanceSignal::piecewise_linear(
          times, values,
          as_number(require(dist, "smoothing", "disturbance"), "disturbance.smoothing"));
    } catch (const std::invalid_argument& e) {
      throw positioned("disturbance", e.what());
    }
  } else {
    throw positioned("disturbance.kind",
                     "expected \"constant\", \"sinusoid\", or \"piecewise_linear\"");
  }
  if (sc.disturbance.dim() != sc.plant.q())
    throw positioned("disturbance", "dimension differs from the plant's q");

  if (root.contains("x0")) sc.x0 = as_vector(root.at("x0"), "x0");

  if (root.contains("certificates")) {
    const Json& cert = root.at("certificates");
    if (cert.contains("varrho"))
      sc.certificates.varrho = as_number(cert.at("varrho"), "certificates.varrho");
    if (cert.contains("theta"))
      sc.certificates.theta_override = as_number(cert.at("theta"), "certificates.theta");
  }
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw detail::syntax_error(text, e);
  }
  return scenario_from_json(root);
}

inline Json scenario_to_json(const Scenario& sc) {
  using detail::matrix_json;
  using detail::vector_json;
  Json root;
  Json modes = Json::array();
  for (const auto& mode : sc.plant.modes) {
    Json jm;
    jm["A"] = matrix_json(mode.A);
    jm["B"] = matrix_json(mode.B);
    jm["E"] = matrix_json(mode.E);
    modes.push_back(std::move(jm));
  }
  root["plant"] = {{"modes", modes}, {"C", matrix_json(sc.plant.C)}, {"D", matrix_json(sc.plant.D)}};

  if (const auto* quad = dynamic_cast<const QuadraticCost*>(sc.cost.get())) {
    root["cost"] = {{"kind", "quadratic"},
                    {"R", matrix_json(quad->R())},
                    {"Qy", matrix_json(quad->Qy())},
                    {"y_ref", vector_json(quad->y_ref())}};
  } else if (const auto* quartic = dynamic_cast<const QuarticCost*>(sc.cost.get())) {
    root["cost"] = {{"kind", "quartic"},
                    {"y_ref", quartic->y_ref()},
                    {"ball_radius", sc.quartic_ball_radius}};
  }

  if (const auto* g = std::get_if<GradientConfig>(&sc.controller)) {
    root["controller"] = {{"kind", "gradient"}};
    if (g->u0.size() > 0) root["controller"]["u0"] = vector_json(g->u0);
  } else if (const auto* nc = std::get_if<NesterovConfig>(&sc.controller)) {
    root["controller"] = {{"kind", "nesterov"},       {"kappa", nc->params.kappa},
                          {"rho", nc->params.rho},    {"delta", nc->params.delta},
                          {"Delta", nc->params.Delta}, {"r0", nc->params.r0},
                          {"unbounded_timer", nc->params.unbounded_timer}};
    if (nc->u1_0.size() > 0) root["controller"]["u1_0"] = vector_json(nc->u1_0);
    if (nc->u2_0.size() > 0) root["controller"]["u2_0"] = vector_json(nc->u2_0);
    if (nc->u3_0 > 0.0) root["controller"]["u3_0"] = nc->u3_0;
  }

  Json events = Json::array();
  for (const auto& [t, mode] : sc.signal.events) events.push_back(Json::array({t, mode}));
  root["switching"] = {{"tau_d", sc.dwell.tau_d}, {"N0", sc.dwell.N0}, {"events", events}};
  if (sc.signal.tau0 >= 0.0) root["switching"]["tau0"] = sc.signal.tau0;

  root["epsilon"] = vector_json(
      Eigen::Map<const Vector>(sc.epsilon.data(), static_cast<Eigen::Index>(sc.epsilon.size())));

  switch (sc.disturbance.kind()) {
    case DisturbanceSignal::Kind::constant:
      root["disturbance"] = {{"kind", "constant"},
                             {"value", vector_json(sc.disturbance.value(0.0))}};
      break;
    case DisturbanceSignal::Kind::sinusoid:
      root["disturbance"] = {{"kind", "sinusoid"},
                             {"offset", vector_json(sc.disturbance.offset())},
                             {"amplitude", vector_json(sc.disturbance.amplitude())},
                             {"omega", sc.disturbance.omega()},
                             {"phase", sc.disturbance.phase()}};
      if (sc.disturbance.freeze_time() >= 0.0)
        root["disturbance"]["freeze_time"] = sc.disturbance.freeze_time();
      break;
    case DisturbanceSignal::Kind::piecewise_linear: {
      Json jt = Json::array(), jv = Json::array();
      for (double t : sc.disturbance.knot_times()) jt.push_back(t);
      for (const Vector& v : sc.disturbance.knot_values()) jv.push_back(vector_json(v));
      root["disturbance"] = {{"kind", "piecewise_linear"},
                             {"times", jt},
                             {"values", jv},
                             {"smoothing", sc.disturbance.smoothing()}};
      break;
    }
  }

  root["integrator"] = {{"step", sc.integrator.step},
                        {"horizon", sc.integrator.horizon},
                        {"record_interval", sc.integrator.record_interval}};
  if (sc.x0.size() > 0) root["x0"] = vector_json(sc.x0);
  root["certificates"] = {{"varrho", sc.certificates.varrho},
                          {"theta", sc.certificates.theta_override}};
  return root;
}

// Per-sample series written next to the state columns. Missing entries are
// emitted as nan.
struct ArcSeries {
  std::vector<double> err_track;
  std::vector<double> f_gap;
  std::vector<double> V;
  std::vector<double> envelope;
};

// One record per arc sample; jump instants contribute two records at equal t
// with j and j+1. Comma separated, LF line endings, 17 significant digits.
inline void write_arc_csv(std::ostream& out, const HybridArc& arc, const SwitchedPlant& plant,
                          const DisturbanceSignal& disturbance, const ArcSeries& series) {
  const int n = arc.n, m = arc.m, p = arc.p;
  out << "t,j,sigma,tau";
  for (int i = 0; i < n; ++i) out << ",x_" << i;
  if (arc.nesterov) {
    for (int i = 0; i < m; ++i) out << ",u1_" << i;
    for (int i = 0; i < m; ++i) out << ",u2_" << i;
    out << ",u3";
  } else {
    for (int i = 0; i < m; ++i) out << ",u_" << i;
  }
  for (int i = 0; i < p; ++i) out << ",y_" << i;
  out << ",err_track,f_gap,V,envelope,diverged\n";

  auto at = [](const std::vector<double>& v, std::size_t i) {
    return i < v.size() ? v[i] : std::numeric_limits<double>::quiet_NaN();
  };
  for (std::size_t i = 0; i < arc.size(); ++i) {
    out << format_double(arc.times[i].t) << ',' << arc.times[i].j << ',' << arc.sigma(i) << ','
        << format_double(arc.tau(i));
    const Vector x = arc.x(i);
    for (int k = 0; k < n; ++k) out << ',' << format_double(x(k));
    if (arc.nesterov) {
      const Vector u1 = arc.u1(i), u2 = arc.u2(i);
      for (int k = 0; k < m; ++k) out << ',' << format_double(u1(k));
      for (int k = 0; k < m; ++k) out << ',' << format_double(u2(k));
      out << ',' << format_double(arc.u3(i));
    } else {
      const Vector u = arc.u1(i);
      for (int k = 0; k < m; ++k) out << ',' << format_double(u(k));
    }
    const Vector y = plant.C * x + plant.D * disturbance.value(arc.times[i].t);
    for (int k = 0; k < p; ++k) out << ',' << format_double(y(k));
    out << ',' << format_double(at(series.err_track, i)) << ','
        << format_double(at(series.f_gap, i)) << ',' << format_double(at(series.V, i)) << ','
        << format_double(at(series.envelope, i)) << ',' << (arc.diverged ? 1 : 0) << '\n';
  }
}

inline void write_arc_csv_file(const std::string& path, const HybridArc& arc,
                               const SwitchedPlant& plant, const DisturbanceSignal& disturbance,
                               const ArcSeries& series) {
  std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
  if (!out) throw Error("cannot open output file: " + path);
  write_arc_csv(out, arc, plant, disturbance, series);
}

}  // namespace swflow
