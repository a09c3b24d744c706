#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "swflow/cli.hpp"
#include "swflow/experiments.hpp"

using namespace swflow;
using namespace swflow::experiments;

namespace {

std::string write_temp_scenario(const Json& j, const std::string& name) {
  const std::string path = "/tmp/swflow_test_" + name + ".json";
  std::ofstream(path) << j.dump(1);
  return path;
}

}  // namespace

TEST_CASE("build_ctm constructs the listed mode matrices") {
  SwitchedPlant plant = build_ctm(true);
  const double d1 = 0.79, d2 = 0.67, s1 = 1.33, s2 = 0.71, r12 = 0.79, r21 = 0.47;
  CHECK(plant.modes[0].A(0, 0) == Catch::Approx(-d1 + r21 * s1));
  CHECK(plant.modes[0].A(0, 1) == 0.0);
  CHECK(plant.modes[0].A(1, 0) == Catch::Approx(-s1 + r12 * d1));
  CHECK(plant.modes[0].A(1, 1) == Catch::Approx(-(1 - r21) * d2));
  CHECK(plant.modes[1].A(0, 0) == Catch::Approx(-(1 - r12) * d1));
  CHECK(plant.modes[1].A(0, 1) == Catch::Approx(-s2 + r21 * d2));
  CHECK(plant.modes[1].A(1, 0) == 0.0);
  CHECK(plant.modes[1].A(1, 1) == Catch::Approx(-d2 + r12 * s2));
  CHECK((plant.modes[0].B - Matrix::Ones(2, 1)).cwiseAbs().maxCoeff() == 0.0);

  // both modes stable; the 2x2 matrices are triangular, so eigenvalues are
  // the diagonal entries
  CHECK(is_hurwitz(plant.modes[0]));
  CHECK(is_hurwitz(plant.modes[1]));
  auto ev1 = mode_eigenvalues(plant.modes[0]);
  CHECK(ev1[0].real() == Catch::Approx(-(1 - r21) * d2));
  CHECK(ev1[1].real() == Catch::Approx(-d1 + r21 * s1));
  auto ev2 = mode_eigenvalues(plant.modes[1]);
  CHECK(ev2[0].real() == Catch::Approx(-(1 - r12) * d1));
  CHECK(ev2[1].real() == Catch::Approx(-d2 + r12 * s2));
  for (const auto& ev : ev1) CHECK(ev.imag() == 0.0);

  // the controlled wiring shares equilibria across modes
  CHECK(check_common_maps(plant, 1e-8).common);
  // the raw wiring has no input authority
  SwitchedPlant raw = build_ctm(false);
  CHECK(raw.modes[0].B.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_random_instance has the benchmark dimensions and passes its own check") {
  Scenario sc = build_random_instance(1);
  CHECK(sc.plant.n() == 10);
  CHECK(sc.plant.m() == 5);
  CHECK(sc.plant.p() == 5);
  CHECK(sc.plant.q() == 6);
  CHECK(sc.plant.num_modes() == 2);
  CHECK(check_common_maps(sc.plant, 1e-6).common);

  // certificate self-consistency through the check command
  const std::string path = write_temp_scenario(scenario_to_json(sc), "random_instance");
  std::ostringstream out;
  CHECK(cli::cmd_check(path, out, false) == cli::kExitOk);
  CHECK(out.str().find("CHECK PASS") != std::string::npos);

  // two seeds give different plants, both feasible
  Scenario sc2 = build_random_instance(2);
  CHECK(sc.plant.modes[0].A != sc2.plant.modes[0].A);
  const std::string path2 = write_temp_scenario(scenario_to_json(sc2), "random_instance2");
  std::ostringstream out2;
  CHECK(cli::cmd_check(path2, out2, true) == cli::kExitOk);
}

TEST_CASE("cmd_check verdicts track the epsilon bound") {
  Scenario sc = gradient_bench(5, 1);
  // eps = eps_bar / 2 passes
  std::ostringstream ok;
  CHECK(cli::cmd_check(write_temp_scenario(scenario_to_json(sc), "check_ok"), ok) ==
        cli::kExitOk);
  CHECK(ok.str().find("not applicable") != std::string::npos);  // single mode

  // doubling epsilon past the bound fails and the FAIL line names the mode
  Scenario bad = sc;
  for (double& e : bad.epsilon) e *= 4.0;
  bad.integrator.step = bad.epsilon[0] / 10.0;
  std::ostringstream fail;
  CHECK(cli::cmd_check(write_temp_scenario(scenario_to_json(bad), "check_bad"), fail) ==
        cli::kExitCertificateFailure);
  CHECK(fail.str().find("mode 1") != std::string::npos);
  CHECK(fail.str().find("FAIL") != std::string::npos);

  // malformed input exits with the input-error code
  std::ofstream("/tmp/swflow_test_garbage.json") << "{ not json";
  std::ostringstream garbage;
  CHECK(cli::cmd_check("/tmp/swflow_test_garbage.json", garbage) == cli::kExitInputError);
}

TEST_CASE("cmd_simulate writes the arc and reports divergence as a legitimate outcome") {
  Scenario sc = gradient_bench(6, 1);
  const std::string path = write_temp_scenario(scenario_to_json(sc), "simulate");
  std::ostringstream out;
  CHECK(cli::cmd_simulate(path, "/tmp/swflow_test_arc.csv", out) == cli::kExitOk);
  CHECK(out.str().find("final_tracking_error") != std::string::npos);
  std::ifstream csv("/tmp/swflow_test_arc.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header.rfind("t,j,sigma,tau,x_0", 0) == 0);
  CHECK(header.find("err_track,f_gap,V,envelope,diverged") != std::string::npos);

  // byte-identical on rerun
  std::ostringstream out2;
  CHECK(cli::cmd_simulate(path, "/tmp/swflow_test_arc2.csv", out2) == cli::kExitOk);
  std::stringstream a, b;
  a << std::ifstream("/tmp/swflow_test_arc.csv").rdbuf();
  b << std::ifstream("/tmp/swflow_test_arc2.csv").rdbuf();
  CHECK(a.str() == b.str());

  // the unbounded-timer arm diverges but still exits 0 with the flag set
  Scenario div;
  div.plant.modes = {LtiMode{Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, 1.0),
                             Matrix::Constant(1, 1, 1.0)}};
  div.plant.C = Matrix::Identity(1, 1);
  div.plant.D = Matrix::Zero(1, 1);
  div.cost = std::make_shared<QuadraticCost>(Matrix::Constant(1, 1, 0.5),
                                             Matrix::Constant(1, 1, 1.5), Vector::Zero(1));
  NesterovParams runaway{4.0, 1.0, 0.5, 2.0, false, true};
  div.controller = NesterovConfig{runaway, Vector::Constant(1, 1.0), Vector::Constant(1, 1.0),
                                  0.5};
  div.signal.events = {{0.0, 1}};
  div.signal.horizon = 1500.0;
  div.epsilon = {0.3};
  div.disturbance = DisturbanceSignal::constant(Vector::Zero(1));
  div.integrator = {0.03, 1500.0, 1.0};
  const std::string dpath = write_temp_scenario(scenario_to_json(div), "diverging");
  std::ostringstream dout;
  CHECK(cli::cmd_simulate(dpath, "/tmp/swflow_test_div.csv", dout) == cli::kExitOk);
  CHECK(dout.str().find("diverged = true") != std::string::npos);
  std::ifstream dcsv("/tmp/swflow_test_div.csv");
  std::string line, last;
  std::getline(dcsv, line);  // header
  while (std::getline(dcsv, line)) last = line;
  CHECK(last.substr(last.size() - 2) == ",1");  // divergence column set
}

TEST_CASE("experiment registry") {
  CHECK(experiment_names().size() == 9);
  CHECK_THROWS_AS(run_experiment("no-such-preset", "", 1), UnknownExperiment);
}

TEST_CASE("every preset completes in budget and writes schema-conformant CSVs") {
  namespace fs = std::filesystem;
  const std::string root = "/tmp/swflow_test_presets";
  fs::remove_all(root);
  for (const auto& name : experiment_names()) {
    const auto start = std::chrono::steady_clock::now();
    const int code = run_experiment(name, root + "/" + name, 1);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    INFO(name);
    CHECK(code == 0);
    CHECK(secs <= 60.0);
    CHECK(fs::exists(root + "/" + name + "/summary.txt"));
    bool found_csv = false;
    for (const auto& entry : fs::directory_iterator(root + "/" + name)) {
      if (entry.path().extension() != ".csv") continue;
      found_csv = true;
      std::ifstream csv(entry.path());
      std::string header;
      std::getline(csv, header);
      CHECK(header.rfind("t,j,sigma,tau,", 0) == 0);
      CHECK(header.find("err_track,f_gap,V,envelope,diverged") != std::string::npos);
      CHECK(header.find('\r') == std::string::npos);
    }
    CHECK(found_csv);
  }
}

TEST_CASE("derived momentum parameters satisfy their design conditions") {
  for (double mu : {0.8, 1.5, 2.5}) {
    NesterovParams p = derive_nesterov_params(mu);
    // restart feasibility
    CHECK(p.Delta * p.Delta - p.delta * p.delta > 2.0 * p.rho / (p.kappa * mu));
    // ln branch of the c constant stays undefined (c = Delta - delta)
    CHECK(p.delta * p.kappa * mu * mu <= 2.0 * p.rho);
    // reset contraction margin for V1
    const double ratio = (p.kappa * mu * p.delta * p.delta + 2.0 * p.rho) /
                         (p.kappa * mu * p.Delta * p.Delta);
    CHECK(ratio <= std::exp(p.delta - p.Delta));
  }
}
