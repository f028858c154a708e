#include "cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace regime_eq::cli {
namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream os(dir / name, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + (dir / name).string());
  return os;
}

void write_config_copy(const RunConfig& config) {
  auto os = open_output(config.output_dir, "run_config.txt");
  os << render_config(config);
}

std::string num(double v) { return csv::format(v); }

Model with_chain(Model m, double l1, double l2) {
  m.chain = RegimeChain(l1, l2);
  return m;
}

Model with_prefs(Model m, double a1, double a2) {
  m.prefs = Preferences(a1, a2);
  return m;
}

}  // namespace

std::shared_ptr<const GSolution> solve(const RunConfig& config) {
  return std::make_shared<const GSolution>(solve_g(config.model, config.solve_options()));
}

std::shared_ptr<const GSolution> load_solution(const fs::path& csv_path, const RunConfig& config) {
  std::ifstream in(csv_path);
  if (!in) throw ConfigError("cannot open solution file " + csv_path.string());
  auto sol = std::make_shared<const GSolution>(csv::read_g_solution(in, config.model, config.tolerance));
  if (sol->horizon() != config.model.horizon)
    throw ConfigError("solution file ends at t = " + num(sol->horizon()) + " but T = " +
                      num(config.model.horizon));
  return sol;
}

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
  if (n < 2) throw InvalidArgument("a grid needs at least two points");
  std::vector<double> out(n);
  const double span = b - a;
  for (std::size_t k = 0; k + 1 < n; ++k)
    out[k] = a + span * static_cast<double>(k) / static_cast<double>(n - 1);
  out.back() = b;
  return out;
}

// ---- strategy tables

std::vector<StrategyRow> strategy_table(const GSolution& sol, std::span<const double> times) {
  const Model& m = sol.model();
  std::vector<StrategyRow> rows;
  rows.reserve(times.size());
  for (double t : times) {
    StrategyRow row;
    row.t = t;
    for (Regime i : kRegimes) {
      row.pi_star[idx(i)] = equilibrium_fraction(t, i, sol);
      row.merton_alpha1[idx(i)] = merton_fraction(i, m.prefs.alpha(Regime::bull), m.market);
      row.merton_alpha2[idx(i)] = merton_fraction(i, m.prefs.alpha(Regime::bear), m.market);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_strategy_table(std::ostream& os, std::span<const StrategyRow> rows) {
  os << "t,pi_star_regime1,pi_star_regime2,merton_alpha1_regime1,merton_alpha1_regime2,"
        "merton_alpha2_regime1,merton_alpha2_regime2\n";
  csv::RowWriter w(os);
  for (const auto& r : rows) {
    w << r.t << r.pi_star[0] << r.pi_star[1] << r.merton_alpha1[0] << r.merton_alpha1[1]
      << r.merton_alpha2[0] << r.merton_alpha2[1];
    w.end();
  }
}

void write_solve_summary(std::ostream& os, const GSolution& sol) {
  const Model& m = sol.model();
  const auto& st = sol.stats();
  const auto& cert = sol.certificate();
  os << "interval = [" << num(sol.start()) << ", " << num(m.horizon) << "]\n";
  os << "tolerance = " << num(sol.tolerance()) << '\n';
  os << "grid_points = " << sol.grid().size() << '\n';
  os << "accepted_steps = " << st.accepted_steps << '\n';
  os << "rejected_steps = " << st.rejected_steps << '\n';
  os << "positivity_rejections = " << st.positivity_rejections << '\n';
  os << "rhs_evaluations = " << st.rhs_evaluations << '\n';
  os << "min_g = " << num(sol.min_g()) << '\n';
  if (std::isfinite(st.min_a))
    os << "a_weight_range = [" << num(st.min_a) << ", " << num(st.max_a) << "]\n";
  const GState g0 = sol.at(sol.start());
  os << "g_at_start = " << num(g0[slot(Regime::bull, Regime::bull)]) << ", "
     << num(g0[slot(Regime::bear, Regime::bull)]) << ", " << num(g0[slot(Regime::bull, Regime::bear)])
     << ", " << num(g0[slot(Regime::bear, Regime::bear)]) << "  # g11, g21, g12, g22\n";
  for (Regime j : kRegimes) {
    const auto k = idx(j);
    os << "ratio_bound_j" << label(j) << " = [" << num(cert.lower[k]) << ", " << num(cert.upper[k])
       << "] observed [" << num(cert.observed_min[k]) << ", " << num(cert.observed_max[k]) << "]\n";
  }
  os << "ratio_certificate = " << (cert.holds ? "holds" : "violated") << '\n';
}

// ---- figure data

std::vector<Curve> figure_curves(const RunConfig& config, int figure_id) {
  struct Case {
    std::string swept;
    double value;
    Model model;
  };
  const Model base = config.model;
  std::vector<Case> cases;
  switch (figure_id) {
    case 1:
      cases.push_back({"t", 0.0, base});
      break;
    case 2:
      for (double l1 : {0.5, 1.0, 2.0}) cases.push_back({"lambda1", l1, with_chain(base, l1, 1.0)});
      break;
    case 3:
      for (double l2 : {0.5, 1.0, 2.0}) cases.push_back({"lambda2", l2, with_chain(base, 1.0, l2)});
      break;
    case 4:
      for (double l : {0.5, 1.0, 2.0, 5.0}) cases.push_back({"lambda", l, with_chain(base, l, l)});
      break;
    case 5: {
      const Model unit = with_chain(base, 1.0, 1.0);
      for (double b : {2.5, 3.0, 3.5, 4.0}) cases.push_back({"alpha2", b, with_prefs(unit, 2.0, b)});
      for (double a : {1.5, 2.0, 2.5}) cases.push_back({"alpha1", a, with_prefs(unit, a, 3.0)});
      break;
    }
    default:
      throw ConfigError("unknown figure id " + std::to_string(figure_id) + " (expected 1-5)");
  }

  std::vector<Curve> out;
  for (const auto& c : cases) {
    const GSolution sol = solve_g(c.model, config.solve_options());
    const auto times = uniform_grid(config.t_start, c.model.horizon, config.figure_points);
    const auto rows = strategy_table(sol, times);
    for (Regime i : kRegimes) {
      Curve curve;
      curve.figure = figure_id;
      curve.regime = i;
      curve.swept = c.swept;
      curve.value = c.value;
      curve.model = c.model;
      curve.file = "figure" + std::to_string(figure_id) +
                   (figure_id == 1 ? "" : "_" + c.swept + "_" + num(c.value)) + "_regime" +
                   std::to_string(label(i)) + ".csv";
      for (const auto& r : rows) {
        curve.t.push_back(r.t);
        curve.pi_star.push_back(r.pi_star[idx(i)]);
        curve.merton_alpha1.push_back(r.merton_alpha1[idx(i)]);
        curve.merton_alpha2.push_back(r.merton_alpha2[idx(i)]);
      }
      out.push_back(std::move(curve));
    }
  }
  return out;
}

void write_curve(std::ostream& os, const Curve& c) {
  os << "t,pi_star,merton_alpha1,merton_alpha2\n";
  csv::RowWriter w(os);
  for (std::size_t k = 0; k < c.t.size(); ++k) {
    w << c.t[k] << c.pi_star[k] << c.merton_alpha1[k] << c.merton_alpha2[k];
    w.end();
  }
}

void write_manifest(std::ostream& os, std::span<const Curve> curves) {
  os << "file,figure,regime,swept,value,lambda1,lambda2,alpha1,alpha2,T,pi_star_start,pi_star_end\n";
  csv::RowWriter w(os);
  for (const auto& c : curves) {
    const Model& m = c.model;
    w << c.file << c.figure << static_cast<int>(label(c.regime)) << c.swept << c.value
      << m.chain.lambda1() << m.chain.lambda2() << m.prefs.alpha(Regime::bull)
      << m.prefs.alpha(Regime::bear) << m.horizon << c.pi_star.front() << c.pi_star.back();
    w.end();
  }
}

// ---- verification

bool VerifyResult::pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return !checks.empty();
}

VerifyResult run_verify(const RunConfig& config, std::shared_ptr<const GSolution> sol) {
  const Model& model = sol->model();
  const Preferences& prefs = model.prefs;
  const double horizon = model.horizon;
  const double t0 = config.sim.t0, x0 = config.sim.x0;
  const bool degenerate = t0 == horizon;
  const TerminalMoments moments(*sol);

  const double a_min = prefs.alpha_min();
  const std::vector<std::pair<std::string, StrategySpec>> alternatives{
      {"zero_investment", StrategySpec::zero_investment()},
      {"double_merton", StrategySpec::constant_fraction({2.0 * merton_fraction(Regime::bull, a_min, model.market),
                                                         2.0 * merton_fraction(Regime::bear, a_min, model.market)})},
  };

  VerifyResult result;
  auto z_of = [](double est, double ref, double se) { return se > 0.0 ? (est - ref) / se : 0.0; };
  // Allows for rounding when the estimator has no spread (t0 = T).
  auto within = [](double est, double ref, double se, double k) {
    return std::fabs(est - ref) <= k * se + 1e-12 * std::fabs(ref);
  };

  for (Regime i : kRegimes) {
    SimConfig sim = config.sim;
    sim.i0 = i;
    const int il = label(i);
    std::array<double, 2> prob{};
    for (Regime j : kRegimes) {
      prob[idx(j)] = transition_probability(t0, i, j, model.chain, horizon);
      if (prob[idx(j)] == 0.0 && !degenerate)
        throw UnreachableRegime("terminal regime " + std::to_string(label(j)) +
                                " is unreachable from regime " + std::to_string(il) +
                                "; conditional estimates are undefined");
    }

    std::vector<StrategySpec> arms{StrategySpec::equilibrium(sol)};
    std::vector<std::pair<std::string, double>> arm_labels;
    if (!degenerate) {
      for (const auto& [name, alt] : alternatives) {
        auto extra = perturbation_arms(sol, alt, config.perturbation_h, t0);
        for (std::size_t k = 1; k < extra.size(); ++k) {
          arms.push_back(std::move(extra[k]));
          arm_labels.emplace_back(name, config.perturbation_h[k - 1]);
        }
      }
    }
    const TerminalSample sample = simulate_terminal(model, arms, sim);
    const auto n = static_cast<double>(sample.terminal.size());

    for (Regime j : kRegimes) {
      const int jl = label(j);
      const double p = prob[idx(j)];
      if (p == 0.0) continue;
      const std::string cell = " i=" + std::to_string(il) + " j=" + std::to_string(jl);

      const UtilityEstimate est = summarize_utility(sample, 0, prefs, j);
      const double f = value_function(t0, x0, i, j, *sol);
      const double z = z_of(est.mean, f, est.standard_error);
      result.estimates.push_back({"conditional_utility", il, jl, est.mean, est.standard_error, est.n_effective});
      result.checks.push_back({"conditional_utility" + cell, within(est.mean, f, est.standard_error, 3.0),
                               "estimate=" + num(est.mean) + " se=" + num(est.standard_error) +
                                   " reference=" + num(f) + " z=" + num(z) + " limit=|z|<=3"});

      const double exact = moments.conditional_utility(t0, x0, i, j);
      result.diagnostics.push_back("terminal_conditioned_reference" + cell + " value=" + num(exact) +
                                   " estimate_z=" + num(z_of(est.mean, exact, est.standard_error)) +
                                   " relative_gap_to_f=" + num(exact / f - 1.0));

      const UtilityEstimate unc = summarize_utility(sample, 0, prefs, j, Conditioning::none);
      result.estimates.push_back({"unconditional_utility", il, jl, unc.mean, unc.standard_error, unc.n_effective});
      result.diagnostics.push_back("unconditional_utility" + cell + " estimate=" + num(unc.mean) +
                                   " se=" + num(unc.standard_error) + " z_vs_f=" +
                                   num(z_of(unc.mean, f, unc.standard_error)));

      const double p_hat = static_cast<double>(est.n_effective) / n;
      const double p_se = std::sqrt(p * (1.0 - p) / n);
      result.estimates.push_back({"terminal_frequency", il, jl, p_hat, std::sqrt(p_hat * (1.0 - p_hat) / n),
                                  est.n_effective});
      result.diagnostics.push_back("terminal_frequency" + cell + " estimate=" + num(p_hat) + " p=" + num(p) +
                                   " z=" + num(z_of(p_hat, p, p_se)));
    }

    McEstimate obj = summarize_objective(sample, 0, prefs);
    if (degenerate) {
      obj.objective = x0;
      obj.objective_se = 0.0;
    }
    const double j_ref = objective(t0, x0, i, *sol);
    const double zj = z_of(obj.objective, j_ref, obj.objective_se);
    result.estimates.push_back({"objective", il, std::nullopt, obj.objective, obj.objective_se, obj.n_paths});
    result.checks.push_back({"objective i=" + std::to_string(il),
                             within(obj.objective, j_ref, obj.objective_se, 3.0),
                             "estimate=" + num(obj.objective) + " se=" + num(obj.objective_se) +
                                 " reference=" + num(j_ref) + " z=" + num(zj) + " limit=|z|<=3"});
    if (!degenerate) {
      result.diagnostics.push_back("terminal_conditioned_objective i=" + std::to_string(il) + " value=" +
                                   num(moments.conditional_objective(t0, x0, i)));
    }

    for (std::size_t k = 0; k < arm_labels.size(); ++k) {
      const auto& [name, h] = arm_labels[k];
      const PerturbationSlope s = perturbation_slope(sample, 0, k + 1, h, prefs);
      const std::string q = "slope_" + name + "_h" + num(h);
      result.estimates.push_back({q, il, std::nullopt, s.slope, s.slope_se, sample.terminal.size()});
      result.checks.push_back({"perturbation_slope " + name + " i=" + std::to_string(il) + " h=" + num(h),
                               s.slope <= 2.0 * s.slope_se,
                               "slope=" + num(s.slope) + " se=" + num(s.slope_se) + " limit=slope<=2se"});
    }
  }
  return result;
}

void write_estimates(std::ostream& os, const VerifyResult& result, const SimConfig& sim) {
  os << "quantity,regime_i,regime_j,estimate,std_error,n_effective,n_paths,dt,seed\n";
  csv::RowWriter w(os);
  for (const auto& e : result.estimates) {
    w << e.quantity << e.regime_i << (e.regime_j ? std::to_string(*e.regime_j) : std::string())
      << e.estimate << e.std_error << e.n_effective << sim.n_paths << sim.dt
      << std::to_string(sim.seed);
    w.end();
  }
}

void write_report(std::ostream& os, const VerifyResult& result, const RunConfig& config) {
  const auto& sim = config.sim;
  os << "n_paths=" << sim.n_paths << " dt=" << num(sim.dt) << " seed=" << sim.seed
     << " t0=" << num(sim.t0) << " x0=" << num(sim.x0) << '\n';
  for (const auto& c : result.checks) os << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.detail << '\n';
  for (const auto& d : result.diagnostics) os << "INFO " << d << '\n';
  os << "overall " << (result.pass() ? "PASS" : "FAIL") << '\n';
}

// ---- commands

int cmd_solve(const RunConfig& config, std::ostream& log) {
  const auto sol = solve(config);
  write_config_copy(config);
  {
    auto os = open_output(config.output_dir, "g_solution.csv");
    csv::write_g_solution(os, *sol);
  }
  {
    auto os = open_output(config.output_dir, "solve_summary.txt");
    write_solve_summary(os, *sol);
  }
  log << "solved on " << sol->grid().size() << " points, min g " << num(sol->min_g()) << ", ratio certificate "
      << (sol->certificate().holds ? "holds" : "violated") << '\n';
  return kOk;
}

int cmd_strategy(const RunConfig& config, const std::optional<fs::path>& solution,
                 const std::optional<std::vector<double>>& times, std::ostream& log) {
  const auto sol = solution ? load_solution(*solution, config) : solve(config);
  const auto grid = times ? *times : uniform_grid(sol->start(), sol->horizon(), config.strategy_points);
  const auto rows = strategy_table(*sol, grid);
  write_config_copy(config);
  auto os = open_output(config.output_dir, "strategy.csv");
  write_strategy_table(os, rows);
  log << "wrote " << rows.size() << " strategy rows\n";
  return kOk;
}

int cmd_figures(const RunConfig& config, std::optional<int> figure_id, std::ostream& log) {
  std::vector<int> ids;
  if (figure_id) {
    ids.push_back(*figure_id);
  } else {
    ids = {1, 2, 3, 4, 5};
  }
  write_config_copy(config);
  for (int id : ids) {
    const auto curves = figure_curves(config, id);
    for (const auto& c : curves) {
      auto os = open_output(config.output_dir, c.file);
      write_curve(os, c);
    }
    auto os = open_output(config.output_dir, "figure" + std::to_string(id) + "_manifest.csv");
    write_manifest(os, curves);
    log << "figure " << id << ": " << curves.size() << " curves\n";
  }
  return kOk;
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
  const auto sol = solve(config);
  const VerifyResult result = run_verify(config, sol);
  write_config_copy(config);
  {
    auto os = open_output(config.output_dir, "verify_estimates.csv");
    write_estimates(os, result, config.sim);
  }
  {
    auto os = open_output(config.output_dir, "verify_report.txt");
    write_report(os, result, config);
  }
  for (const auto& c : result.checks) log << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.detail << '\n';
  log << "overall " << (result.pass() ? "PASS" : "FAIL") << '\n';
  return result.pass() ? kOk : kVerificationFailure;
}

int guarded(const std::function<int()>& command, std::ostream& err) {
  try {
    return command();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const UnreachableRegime& e) {
    err << "unreachable regime: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kConfigError;
  } catch (const RangeError& e) {
    err << "out of range: " << e.what() << '\n';
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    err << "file error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const SimulationError& e) {
    err << "simulation failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
}

}  // namespace regime_eq::cli
