// regime_eq: equilibrium investment under regime switching.
//
//   regime_eq solve    [--config F] [--out DIR]
//   regime_eq strategy [--config F] [--out DIR] [--solution CSV] [--times t1,t2,...]
//   regime_eq figures  [--config F] [--out DIR] [--figure K]
//   regime_eq verify   [--config F] [--out DIR] [--seed N] [--paths N] [--dt X]
//
// Exit codes: 0 success, 2 config error, 3 solver failure, 4 verification failure.
// REGIME_EQ_THREADS sets the number of Monte Carlo worker threads.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/commands.hpp"

using namespace regime_eq::cli;

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium investment with regime-dependent CRRA utilities"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<double> dt;
  std::optional<int> figure;
  std::string solution_path;
  std::vector<double> times;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--out", out_dir, "output directory (overrides output_dir)");
  };

  auto* solve_cmd = app.add_subcommand("solve", "solve the g-system, write g_solution.csv and solve_summary.txt");
  add_common(solve_cmd);

  auto* strategy_cmd = app.add_subcommand("strategy", "equilibrium and Merton fractions on a time grid");
  add_common(strategy_cmd);
  strategy_cmd->add_option("--solution", solution_path, "reuse a g_solution.csv instead of solving")
      ->check(CLI::ExistingFile);
  strategy_cmd->add_option("--times", times, "comma-separated evaluation times")->delimiter(',');

  auto* figures_cmd = app.add_subcommand("figures", "curve data for figures 1-5 (all by default)");
  add_common(figures_cmd);
  figures_cmd->add_option("--figure", figure, "figure id")->check(CLI::Range(1, 5));

  auto* verify_cmd = app.add_subcommand("verify", "Monte Carlo checks of the solved equilibrium");
  add_common(verify_cmd);
  verify_cmd->add_option("--seed", seed, "random seed");
  verify_cmd->add_option("--paths", paths, "number of simulated paths");
  verify_cmd->add_option("--dt", dt, "Euler step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  return guarded(
      [&] {
        RunConfig config;
        if (!config_path.empty()) config = load_config(config_path);
        if (!out_dir.empty()) config.output_dir = out_dir;
        if (seed) config.sim.seed = *seed;
        if (paths) {
          if (*paths < 1) throw ConfigError("--paths must be at least 1");
          config.sim.n_paths = *paths;
        }
        if (dt) {
          const double span = config.model.horizon - config.sim.t0;
          if (!(*dt > 0.0) || (span > 0.0 && *dt > span)) throw ConfigError("--dt must satisfy 0 < dt <= T - t0");
          config.sim.dt = *dt;
        }

        if (*solve_cmd) return cmd_solve(config, std::cout);
        if (*strategy_cmd) {
          std::optional<std::filesystem::path> solution;
          if (!solution_path.empty()) solution = solution_path;
          std::optional<std::vector<double>> grid;
          if (!times.empty()) grid = times;
          return cmd_strategy(config, solution, grid, std::cout);
        }
        if (*figures_cmd) return cmd_figures(config, figure, std::cout);
        return cmd_verify(config, std::cout);
      },
      std::cerr);
}
