// Command-line front end: run, equilibria, stability, convergence.

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "epifv/cli.hpp"
#include "epifv/model.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume solver for nonlocal reaction-diffusion epidemic systems"};
  app.require_subcommand(1);

  // run
  std::string run_config;
  std::string run_out_dir;
  std::uint64_t run_seed = 0;
  auto* run_cmd = app.add_subcommand("run", "Run a simulation from a config file");
  run_cmd->add_option("config", run_config, "Path to the config file")->required();
  auto* run_out_opt = run_cmd->add_option("--out-dir", run_out_dir, "Override the output directory");
  auto* run_seed_opt = run_cmd->add_option("--seed", run_seed, "Override the initial-data seed");

  // shared model parameters for equilibria/stability
  epifv::ModelParams params;
  params.variant = epifv::Variant::SARS;
  params.A = 3.0;
  params.mu = 0.3;
  params.alpha_incidence = 3.8;
  params.r = 0.5;
  params.gamma = 0.8;

  auto add_param_opts = [&params](CLI::App* cmd, std::vector<double>* alphas) {
    cmd->add_option("--A", params.A, "Recruitment rate");
    cmd->add_option("--mu", params.mu, "Mortality rate");
    cmd->add_option("--gamma", params.gamma, "Recovery rate");
    cmd->add_option("--r", params.r, "Treatment capacity");
    if (alphas)
      cmd->add_option("--alpha", *alphas, "Incidence rate (repeat to sweep)");
  };

  std::vector<double> alphas;
  auto* eq_cmd = app.add_subcommand("equilibria", "SARS equilibrium points and verdicts");
  add_param_opts(eq_cmd, &alphas);

  std::string stab_point = "E2";
  double d1 = 0.0, d2 = 0.0, d3 = 0.0;
  double stab_alpha = 3.8;
  auto* stab_cmd = app.add_subcommand("stability", "Linear stability and Turing scan");
  add_param_opts(stab_cmd, nullptr);
  stab_cmd->add_option("--alpha", stab_alpha, "Incidence rate");
  stab_cmd->add_option("--point", stab_point, "E1, E2 or explicit 'u,v,w'");
  stab_cmd->add_option("--d1", d1, "Diffusivity of species 1");
  stab_cmd->add_option("--d2", d2, "Diffusivity of species 2");
  stab_cmd->add_option("--d3", d3, "Diffusivity of species 3");

  std::string conv_config;
  std::string conv_out_dir;
  int conv_levels = 0;
  auto* conv_cmd = app.add_subcommand("convergence", "Grid refinement study");
  conv_cmd->add_option("config", conv_config, "Path to the config file")->required();
  auto* conv_levels_opt =
      conv_cmd->add_option("--levels", conv_levels, "Number of levels (doubling grids)");
  auto* conv_out_opt =
      conv_cmd->add_option("--out-dir", conv_out_dir, "Override the output directory");

  CLI11_PARSE(app, argc, argv);

  if (run_cmd->parsed()) {
    return epifv::cli::cmd_run(
        run_config,
        run_out_opt->count() ? std::optional<std::string>(run_out_dir) : std::nullopt,
        run_seed_opt->count() ? std::optional<std::uint64_t>(run_seed) : std::nullopt, std::cout,
        std::cerr);
  }
  if (eq_cmd->parsed()) {
    return epifv::cli::cmd_equilibria(params, alphas, std::cout);
  }
  if (stab_cmd->parsed()) {
    params.alpha_incidence = stab_alpha;
    return epifv::cli::cmd_stability(params, stab_point, d1, d2, d3, std::cout, std::cerr);
  }
  if (conv_cmd->parsed()) {
    return epifv::cli::cmd_convergence(
        conv_config, conv_levels_opt->count() ? std::optional<int>(conv_levels) : std::nullopt,
        conv_out_opt->count() ? std::optional<std::string>(conv_out_dir) : std::nullopt,
        std::cout, std::cerr);
  }
  return 0;
}
