#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "oracles.hpp"

using namespace regime_eq;
using namespace regime_eq::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("regime_eq_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

RunConfig small_verify_config(const fs::path& out) {
  RunConfig c = parse("n_paths = 3000\ndt = 0.05\nperturbation_h = 0.5, 0.25\n");
  c.output_dir = out;
  return c;
}

}  // namespace

TEST(Config, DefaultsAreReferenceExperiment) {
  const RunConfig c = parse("");
  const Model ref = reference_model();
  for (Regime i : kRegimes) {
    EXPECT_EQ(c.model.market.drift(i), ref.market.drift(i));
    EXPECT_EQ(c.model.market.rate(i), ref.market.rate(i));
    EXPECT_EQ(c.model.market.volatility(i), ref.market.volatility(i));
    EXPECT_EQ(c.model.prefs.alpha(i), ref.prefs.alpha(i));
    EXPECT_EQ(c.model.chain.leave_rate(i), ref.chain.leave_rate(i));
  }
  EXPECT_EQ(c.model.horizon, 10.0);
  EXPECT_EQ(c.sim.n_paths, 100000u);
  EXPECT_EQ(c.sim.dt, 1e-3);
  EXPECT_EQ(c.sim.seed, 12345u);
  EXPECT_EQ(c.tolerance, 1e-10);
}

TEST(Config, ParsesKeysAndComments) {
  const RunConfig c = parse("# experiment\n  alpha2 = 4   # bear utility\nlambda1=0.5\n\nseed = 99\noutput_dir = results/a\n");
  EXPECT_EQ(c.model.prefs.alpha(Regime::bear), 4.0);
  EXPECT_EQ(c.model.chain.lambda1(), 0.5);
  EXPECT_EQ(c.sim.seed, 99u);
  EXPECT_EQ(c.output_dir, fs::path("results/a"));
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse("colour = red\n"), ConfigError);
  EXPECT_THROW(parse("mu1 0.1\n"), ConfigError);
  EXPECT_THROW(parse("mu1 = abc\n"), ConfigError);
  EXPECT_THROW(parse("sigma1 = 0\n"), ConfigError);
  EXPECT_THROW(parse("alpha1 = 1\n"), ConfigError);
  EXPECT_THROW(parse("lambda2 = -1\n"), ConfigError);
  EXPECT_THROW(parse("n_paths = 0\n"), ConfigError);
  EXPECT_THROW(parse("dt = 11\n"), ConfigError);
  EXPECT_THROW(parse("x0 = 0\n"), ConfigError);
  EXPECT_THROW(parse("t0 = 12\n"), ConfigError);
  EXPECT_THROW(parse("seed = -3\n"), ConfigError);
}

TEST(Config, RenderRoundTrips) {
  const RunConfig a = parse("mu2 = 0.3\nalpha1 = 1.5\nperturbation_h = 0.3, 0.2\nfigure_points = 11\n");
  const RunConfig b = parse(render_config(a));
  EXPECT_EQ(render_config(a), render_config(b));
  EXPECT_EQ(b.perturbation_h, (std::vector<double>{0.3, 0.2}));
}

TEST(Solve, WritesTrajectoryAndSummary) {
  RunConfig c = parse("");
  c.output_dir = scratch("solve");
  std::ostringstream log;
  EXPECT_EQ(guarded([&] { return cmd_solve(c, log); }, std::cerr), kOk);
  std::ifstream in(c.output_dir / "g_solution.csv");
  std::string header, line, last;
  std::getline(in, header);
  EXPECT_EQ(header, "t,g11,g21,g12,g22,dg11,dg21,dg12,dg22");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    last = line;
    ++rows;
  }
  EXPECT_GE(rows, 1001u);
  EXPECT_EQ(last.substr(0, 11), "10,1,1,1,1,");
  const std::string summary = slurp(c.output_dir / "solve_summary.txt");
  EXPECT_NE(summary.find("ratio_certificate = holds"), std::string::npos);
  EXPECT_NE(summary.find("min_g = "), std::string::npos);
}

TEST(Solve, FrozenChainMatchesClosedForm) {
  RunConfig c = parse("lambda1 = 0\nlambda2 = 0\nalpha1 = 3\nalpha2 = 3\n");
  c.output_dir = scratch("solve_frozen");
  std::ostringstream log;
  ASSERT_EQ(cmd_solve(c, log), kOk);
  std::ifstream in(c.output_dir / "g_solution.csv");
  const GSolution sol = csv::read_g_solution(in, c.model, c.tolerance);
  oracle::Params p;
  p.alpha = {3.0, 3.0};
  p.lambda = {0.0, 0.0};
  for (std::size_t k = 0; k < sol.grid().size(); ++k)
    for (Regime i : kRegimes)
      EXPECT_NEAR(sol.values()[k][slot(i, Regime::bull)] / oracle::frozen_g(p, sol.grid()[k], idx(i)), 1.0, 1e-9);
}

TEST(Strategy, RoundTripThroughCsvIsExact) {
  RunConfig c = parse("strategy_points = 57\n");
  c.output_dir = scratch("strategy_roundtrip");
  std::ostringstream log;
  ASSERT_EQ(cmd_solve(c, log), kOk);
  const auto loaded = load_solution(c.output_dir / "g_solution.csv", c);
  const auto direct = solve(c);
  std::vector<double> times = uniform_grid(0.0, 10.0, 57);
  times.push_back(3.14159);
  times.push_back(9.87654321);
  const auto a = strategy_table(*loaded, times), b = strategy_table(*direct, times);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].pi_star, b[k].pi_star);
    EXPECT_EQ(a[k].merton_alpha1, b[k].merton_alpha1);
  }
  ASSERT_EQ(cmd_strategy(c, c.output_dir / "g_solution.csv", std::nullopt, log), kOk);
  const std::string from_file = slurp(c.output_dir / "strategy.csv");
  ASSERT_EQ(cmd_strategy(c, std::nullopt, std::nullopt, log), kOk);
  EXPECT_EQ(slurp(c.output_dir / "strategy.csv"), from_file);
}

TEST(Strategy, TableRows) {
  RunConfig c = parse("");
  const auto sol = solve(c);
  const std::vector<double> times{0.0, 10.0};
  const auto rows = strategy_table(*sol, times);
  EXPECT_NEAR(rows[1].pi_star[0], 0.8, 1e-15);
  EXPECT_NEAR(rows[1].pi_star[1], 0.24 / (3.0 * 0.36), 1e-15);
  EXPECT_NEAR(rows[0].merton_alpha1[0], 0.8, 1e-15);
  std::ostringstream os;
  write_strategy_table(os, rows);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "t,pi_star_regime1,pi_star_regime2,merton_alpha1_regime1,merton_alpha1_regime2,"
            "merton_alpha2_regime1,merton_alpha2_regime2");
}

TEST(Strategy, EqualRiskAversionGivesConstantColumn) {
  RunConfig c = parse("alpha1 = 2\nalpha2 = 2\nstrategy_points = 21\n");
  const auto sol = solve(c);
  const auto rows = strategy_table(*sol, uniform_grid(0.0, 10.0, 21));
  for (const auto& r : rows)
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(r.pi_star[i], r.merton_alpha1[i], 1e-12);
}

TEST(Strategy, OutOfRangeTimesAreUsageErrors) {
  RunConfig c = parse("t_start = 2\nt0 = 2\n");
  c.output_dir = scratch("strategy_range");
  std::ostringstream log, err;
  const std::vector<double> times{1.0};
  EXPECT_EQ(guarded([&] { return cmd_strategy(c, std::nullopt, times, log); }, err), kConfigError);
  EXPECT_NE(err.str().find("out of range"), std::string::npos);
}

TEST(Figures, TimeCurveReachesMerton) {
  RunConfig c = parse("figure_points = 101\n");
  const auto curves = figure_curves(c, 1);
  ASSERT_EQ(curves.size(), 2u);
  EXPECT_NEAR(curves[0].pi_star.back(), 0.8, 1e-15);
  EXPECT_EQ(curves[0].file, "figure1_regime1.csv");
}

TEST(Figures, AllCurvesRespectSandwich) {
  RunConfig c = parse("figure_points = 51\n");
  for (int id = 1; id <= 5; ++id) {
    for (const auto& curve : figure_curves(c, id)) {
      for (std::size_t k = 0; k + 1 < curve.t.size(); ++k) {
        const double lo = std::min(curve.merton_alpha1[k], curve.merton_alpha2[k]);
        const double hi = std::max(curve.merton_alpha1[k], curve.merton_alpha2[k]);
        EXPECT_LT(lo, curve.pi_star[k]) << curve.file;
        EXPECT_LT(curve.pi_star[k], hi) << curve.file;
      }
    }
  }
}

TEST(Figures, LambdaSweepOrderedByRatio) {
  RunConfig c = parse("figure_points = 11\n");
  const auto fig2 = figure_curves(c, 2);  // lambda1 rising: lambda2/lambda1 falling
  for (std::size_t k = 2; k < fig2.size(); ++k) EXPECT_LT(fig2[k].pi_star.front(), fig2[k - 2].pi_star.front());
  const auto fig3 = figure_curves(c, 3);  // lambda2 rising: ratio rising
  for (std::size_t k = 2; k < fig3.size(); ++k) EXPECT_GT(fig3[k].pi_star.front(), fig3[k - 2].pi_star.front());
}

TEST(Figures, WritesFilesAndManifest) {
  RunConfig c = parse("figure_points = 11\n");
  c.output_dir = scratch("figures");
  std::ostringstream log;
  ASSERT_EQ(cmd_figures(c, 4, log), kOk);
  const std::string manifest = slurp(c.output_dir / "figure4_manifest.csv");
  EXPECT_NE(manifest.find("figure4_lambda_5_regime2.csv,4,2,lambda,5,5,5,2,3,10,"), std::string::npos);
  EXPECT_TRUE(fs::exists(c.output_dir / "figure4_lambda_0.5_regime1.csv"));
  std::ostringstream err;
  EXPECT_EQ(guarded([&] { return cmd_figures(c, 9, log); }, err), kConfigError);
}

TEST(Verify, SmallRunWritesFilesAndIsIdempotent) {
  const fs::path out = scratch("verify");
  RunConfig c = small_verify_config(out);
  std::ostringstream log;
  const int code = cmd_verify(c, log);
  EXPECT_TRUE(code == kOk || code == kVerificationFailure);
  const std::string csv1 = slurp(out / "verify_estimates.csv"), report1 = slurp(out / "verify_report.txt");
  EXPECT_EQ(csv1.substr(0, csv1.find('\n')), "quantity,regime_i,regime_j,estimate,std_error,n_effective,n_paths,dt,seed");
  EXPECT_NE(csv1.find("conditional_utility,1,2,"), std::string::npos);
  EXPECT_NE(csv1.find("slope_double_merton_h0.25,2,,"), std::string::npos);
  EXPECT_NE(report1.find("overall "), std::string::npos);

  ::setenv("REGIME_EQ_THREADS", "4", 1);
  cmd_verify(c, log);
  ::unsetenv("REGIME_EQ_THREADS");
  EXPECT_EQ(slurp(out / "verify_estimates.csv"), csv1);
  EXPECT_EQ(slurp(out / "verify_report.txt"), report1);
}

TEST(Verify, ObjectiveChecksPassOnSmallRun) {
  RunConfig c = small_verify_config(scratch("verify_checks"));
  const auto result = run_verify(c, solve(c));
  std::size_t objective_checks = 0;
  for (const auto& check : result.checks) {
    if (check.name.rfind("objective", 0) == 0) {
      ++objective_checks;
      EXPECT_TRUE(check.pass) << check.detail;
    }
  }
  EXPECT_EQ(objective_checks, 2u);
}

TEST(Verify, HorizonStartIsExact) {
  RunConfig c = parse("t0 = 10\nn_paths = 5\nx0 = 2.5\n");
  c.output_dir = scratch("verify_horizon");
  const auto result = run_verify(c, solve(c));
  EXPECT_TRUE(result.pass());
  for (const auto& e : result.estimates)
    if (e.quantity == "objective") EXPECT_EQ(e.estimate, 2.5);
}

TEST(Verify, UnreachableRegimeIsConfigError) {
  RunConfig c = parse("lambda1 = 0\nlambda2 = 0\nn_paths = 10\ndt = 0.5\n");
  c.output_dir = scratch("verify_frozen");
  std::ostringstream log, err;
  EXPECT_EQ(guarded([&] { return cmd_verify(c, log); }, err), kConfigError);
  EXPECT_NE(err.str().find("unreachable"), std::string::npos);
}
