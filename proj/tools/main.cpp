#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace mlergm::cli;
  CLI::App app{"Multilayer signed network dissolution models: ingest, fit, simulate, gof, diagnose"};
  app.require_subcommand(1);
  CommandOptions options;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", options.config, "YAML run configuration");
    sub->add_option("--seed", options.seed, "Overrides mcmc.seed and gof.seed");
    sub->add_option("--out", options.out, "Output directory");
  };
  auto* ingest = app.add_subcommand("ingest", "Sponsorship CSVs to a layer stack");
  add_common(ingest);
  auto* fit = app.add_subcommand("fit", "Posterior sampling");
  add_common(fit);
  fit->add_option("--chains", options.chains, "Number of chains");
  auto* simulate = app.add_subcommand("simulate", "Forward simulation from the prior or a chain");
  add_common(simulate);
  simulate->add_option("--chain", options.chain, "Chain CSV (posterior draws)");
  simulate->add_option("--n-sims", options.n_sims, "Number of simulated stacks");
  simulate->add_option("--burn-in", options.burn_in, "Drop stored iterations <= this");
  auto* gof = app.add_subcommand("gof", "Prior and posterior predictive checks");
  add_common(gof);
  gof->add_option("--chain", options.chain, "Chain CSV; manifest.json must sit beside it");
  gof->add_option("--n-sims", options.n_sims, "Simulations per ensemble");
  gof->add_option("--burn-in", options.burn_in, "Drop stored iterations <= this");
  auto* diagnose = app.add_subcommand("diagnose", "ESS, acceptance and trace tables");
  add_common(diagnose);
  diagnose->add_option("--chain", options.chain, "Chain CSV");
  diagnose->add_option("--burn-in", options.burn_in, "Drop stored iterations <= this for ESS");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << usage_error_json(e.what()) << '\n';
    return e.get_exit_code();
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "ingest") cmd_ingest(options, std::cout);
    if (command == "fit") cmd_fit(options, std::cout);
    if (command == "simulate") cmd_simulate(options, std::cout);
    if (command == "gof") cmd_gof(options, std::cout);
    if (command == "diagnose") cmd_diagnose(options, std::cout);
  } catch (const std::exception& e) {
    std::cerr << error_json(command, e) << '\n';
    return 1;
  }
  return 0;
}
