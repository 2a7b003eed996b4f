#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace spinwehrl::cli;

int main(int argc, char** argv) {
  CLI::App app{"Wehrl and von Neumann entropy rates of open spin systems"};
  app.require_subcommand(1);

  CommandOptions opts;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config, "scenario config (JSON)")->required();
    sub->add_option("--grid", opts.grid, "quadrature grid override, NxM");
  };

  auto* run = app.add_subcommand("run", "run a scenario and write its CSV");
  add_common(run);
  run->add_option("--out", opts.out_dir, "output directory");
  run->add_option("--tol", opts.tol, "integrator tolerance override");
  run->add_flag("--trajectory", opts.trajectory, "also write the density matrix at every output time");

  auto* compare = app.add_subcommand("compare", "max deviation between rate methods along a trajectory");
  add_common(compare);
  compare->add_option("--tol", opts.tol, "allowed relative deviation");

  auto* sweep = app.add_subcommand("sweep", "run once per value of a scalar config field");
  add_common(sweep);
  sweep->add_option("--out", opts.out_dir, "output directory");
  sweep->add_option("--tol", opts.tol, "integrator tolerance override");
  sweep->add_option("--param", opts.param, "dotted path of the field, e.g. params.temperature")->required();
  sweep->add_option("--values", opts.values, "comma separated values")->delimiter(',')->required();

  auto* validate = app.add_subcommand("validate", "check a config without running it");
  add_common(validate);
  validate->add_option("--tol", opts.tol, "integrator tolerance override");

  auto* list = app.add_subcommand("list-scenarios", "print the available scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return cmd_run(opts, std::cout, std::cerr);
  if (*compare) return cmd_compare(opts, std::cout, std::cerr);
  if (*sweep) return cmd_sweep(opts, std::cout, std::cerr);
  if (*validate) return cmd_validate(opts, std::cout, std::cerr);
  if (*list) return cmd_list_scenarios(std::cout);
  return kExitConfig;
}
