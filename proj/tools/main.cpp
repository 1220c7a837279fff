// ctpi command line tool: complex-time correlation functions, rates,
// spectra and equilibrium observables from a JSON run configuration.
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctpi/runner.hpp"
#include "ctpi/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"complex-time tensor network correlation functions"};
  app.set_version_flag("--version", std::string(ctpi::kVersion));
  app.require_subcommand(1);

  ctpi::cli::RunOptions opts;
  app.add_option("-c,--config", opts.config_path, "JSON run configuration")
      ->required();
  app.add_option("-o,--output", opts.output_dir,
                 "output directory (overrides the config)");
  app.add_option("-j,--threads", opts.threads,
                 "worker threads, 0 = hardware concurrency");
  app.add_option("--seed", opts.seed, "seed for randomized checks");

  app.add_subcommand("correlate", "equilibrium correlation function G_AB(t)");
  app.add_subcommand("rate", "flux correlation functions and plateau rate");
  app.add_subcommand("sscf", "symmetrized spectral function");
  app.add_subcommand("chi", "susceptibility chi' and chi''");
  app.add_subcommand("equilibrium", "reduced thermal density matrix");
  app.add_subcommand("oracle-check",
                     "validate the network against dense references");
  app.add_subcommand("bench-bonddim",
                     "bond growth across orderings and cutoffs");
  CLI::App* sweep = app.add_subcommand("sweep", "convergence sweep on one axis");
  sweep->add_option("--axis", opts.sweep_axis,
                    "n_steps, cutoff or max_bond")
      ->required();
  sweep->add_option("--values", opts.sweep_values, "axis values, in run order")
      ->required()
      ->expected(-1);

  CLI11_PARSE(app, argc, argv);
  return ctpi::cli::run_command(app.get_subcommands().front()->get_name(), opts);
}
