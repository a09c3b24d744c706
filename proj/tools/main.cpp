// Command-line front end: certificate checks, closed-loop simulation, and
// the named experiment presets.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "swflow/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"swflow: online optimization of switched linear plants"};
  app.require_subcommand(1);
  app.fallthrough();

  bool quiet = false;
  std::string format = "csv";
  app.add_flag("--quiet", quiet, "suppress detail lines, print only the verdict");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv"}));

  std::string default_out_dir = ".";
  if (const char* env = std::getenv("SWFLOW_OUT_DIR")) default_out_dir = env;

  auto* check = app.add_subcommand("check", "compute and verify the stability certificates");
  std::string check_path;
  check->add_option("scenario", check_path, "scenario file")->required();

  auto* sim = app.add_subcommand("simulate", "integrate the closed loop and write a CSV arc");
  std::string sim_path, sim_out;
  sim->add_option("scenario", sim_path, "scenario file")->required();
  sim->add_option("--out", sim_out, "output CSV path");

  auto* exp = app.add_subcommand("experiment", "run a named experiment preset");
  std::string exp_name, exp_dir;
  std::uint64_t exp_seed = 1;
  exp->add_option("name", exp_name, "preset name")->required();
  exp->add_option("--out-dir", exp_dir, "output directory");
  exp->add_option("--seed", exp_seed, "seed for the preset's instances");

  auto* list = app.add_subcommand("list", "list the experiment presets");

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) return swflow::cli::cmd_check(check_path, std::cout, quiet);
  if (sim->parsed()) {
    if (sim_out.empty()) sim_out = default_out_dir + "/arc.csv";
    return swflow::cli::cmd_simulate(sim_path, sim_out, std::cout, quiet);
  }
  if (exp->parsed()) {
    if (exp_dir.empty()) exp_dir = default_out_dir + "/" + exp_name;
    return swflow::cli::cmd_experiment(exp_name, exp_dir, exp_seed, std::cout, quiet);
  }
  if (list->parsed()) {
    for (const auto& name : swflow::experiments::experiment_names()) std::cout << name << "\n";
    return 0;
  }
  return 0;
}
