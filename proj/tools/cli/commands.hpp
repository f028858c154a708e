#pragma once

// The four CLI commands. Each cmd_* writes its files under config.output_dir and
// returns a process exit code; the other functions are the pieces they are built
// from, exposed for tests.

#include <array>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <ostream>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace regime_eq::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kSolverFailure = 3, kVerificationFailure = 4 };

std::shared_ptr<const GSolution> solve(const RunConfig& config);
std::shared_ptr<const GSolution> load_solution(const std::filesystem::path& csv_path,
                                               const RunConfig& config);

/// n equally spaced points on [a, b], both ends included and b hit exactly.
std::vector<double> uniform_grid(double a, double b, std::size_t n);

// ---- strategy tables

struct StrategyRow {
  double t = 0.0;
  std::array<double, 2> pi_star{};        // per current regime
  std::array<double, 2> merton_alpha1{};  // (mu_i - r_i) / (alpha1 sigma_i^2)
  std::array<double, 2> merton_alpha2{};
};

std::vector<StrategyRow> strategy_table(const GSolution& sol, std::span<const double> times);
void write_strategy_table(std::ostream& os, std::span<const StrategyRow> rows);
void write_solve_summary(std::ostream& os, const GSolution& sol);

// ---- figure data

struct Curve {
  int figure = 1;
  std::string file;
  Regime regime = Regime::bull;
  std::string swept;  // parameter varied across the figure's curves ("t" for figure 1)
  double value = 0.0;
  Model model;
  std::vector<double> t;
  std::vector<double> pi_star;
  std::vector<double> merton_alpha1;
  std::vector<double> merton_alpha2;
};

/// Curves of figure 1 (time), 2 (lambda1 sweep), 3 (lambda2 sweep), 4 (lambda1 = lambda2
/// sweep) or 5 (beta sweep at alpha = 2, then alpha sweep at beta = 3).
std::vector<Curve> figure_curves(const RunConfig& config, int figure_id);
void write_curve(std::ostream& os, const Curve& curve);
void write_manifest(std::ostream& os, std::span<const Curve> curves);

// ---- verification

struct EstimateRow {
  std::string quantity;
  int regime_i = 1;
  std::optional<int> regime_j;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n_effective = 0;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyResult {
  std::vector<EstimateRow> estimates;
  std::vector<Check> checks;
  std::vector<std::string> diagnostics;
  bool pass() const;
};

VerifyResult run_verify(const RunConfig& config, std::shared_ptr<const GSolution> sol);
void write_estimates(std::ostream& os, const VerifyResult& result, const SimConfig& sim);
void write_report(std::ostream& os, const VerifyResult& result, const RunConfig& config);

// ---- commands

int cmd_solve(const RunConfig& config, std::ostream& log);
int cmd_strategy(const RunConfig& config, const std::optional<std::filesystem::path>& solution,
                 const std::optional<std::vector<double>>& times, std::ostream& log);
int cmd_figures(const RunConfig& config, std::optional<int> figure_id, std::ostream& log);
int cmd_verify(const RunConfig& config, std::ostream& log);

/// Runs a command, mapping library exceptions onto exit codes and messages on `err`.
int guarded(const std::function<int()>& command, std::ostream& err);

}  // namespace regime_eq::cli
