#pragma once

// Run configuration read from a flat `key = value` file. Lines starting with '#'
// are comments; every key is optional and defaults to the reference experiment.
//
//   mu1 mu2 r1 r2 sigma1 sigma2   market coefficients per regime (1 = bull, 2 = bear)
//   alpha1 alpha2                 risk aversion of u^1 and u^2
//   lambda1 lambda2               rates of leaving regime 1 and regime 2
//   T t_start tolerance           horizon, left end of the solve, solver tolerance
//   n_paths dt seed t0 x0         Monte Carlo settings
//   perturbation_h                comma-separated widths for the equilibrium test
//   strategy_points               grid size of `strategy` tables
//   figure_points                 grid size of `figures` curves
//   output_dir                    where CSV files go

#include <cstdint>
#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "regime_eq/regime_eq.hpp"

namespace regime_eq::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Model model = reference_model();
  double t_start = 0.0;
  double tolerance = 1e-10;
  SimConfig sim{};
  std::vector<double> perturbation_h{0.5, 0.25, 0.1};
  std::size_t strategy_points = 101;
  std::size_t figure_points = 501;
  std::filesystem::path output_dir = "out";

  SolveOptions solve_options() const {
    SolveOptions o;
    o.tolerance = tolerance;
    o.t_start = t_start;
    return o;
  }
};

/// Parses and validates a configuration; throws ConfigError with the line number.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// The configuration in file form, one key per line, every key present.
std::string render_config(const RunConfig& config);

}  // namespace regime_eq::cli
