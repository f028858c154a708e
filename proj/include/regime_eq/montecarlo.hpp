#pragma once

// Monte Carlo simulation of the regime-modulated wealth SDE
//
//   dX = r_e X dt + (mu_e - r_e) pi dt + sigma_e pi dW,   pi = x * fraction(t, e),
//
// stepped in log space on a fixed grid that is split at regime jumps and at
// strategy breakpoints. Each path draws from its own counter-based streams, so
// estimates are bit-identical for any number of worker threads.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "regime_eq/errors.hpp"
#include "regime_eq/model.hpp"
#include "regime_eq/odes.hpp"
#include "regime_eq/random.hpp"
#include "regime_eq/regime.hpp"
#include "regime_eq/strategy.hpp"

namespace regime_eq {

struct SimConfig {
  std::size_t n_paths = 100000;
  double dt = 1e-3;
  std::uint64_t seed = 12345;
  double t0 = 0.0;
  double x0 = 1.0;
  Regime i0 = Regime::bull;
  unsigned workers = 0;  // 0: REGIME_EQ_THREADS if set, else hardware concurrency
};

/// Sample mean of u^j(X_T) over one terminal-regime cell.
struct UtilityEstimate {
  Regime j = Regime::bull;
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t n_effective = 0;
  bool low_sample = false;  // fewer than 30 paths in the cell
};

struct McEstimate {
  std::array<UtilityEstimate, 2> components{};
  double objective = 0.0;
  double objective_se = 0.0;
  std::size_t n_paths = 0;
};

enum class Conditioning { terminal_regime, none };

/// Brownian increments over a partition of [t0, T] that contains every regime jump.
struct BrownianIncrements {
  struct Segment {
    double t = 0.0;   // left end
    double h = 0.0;   // length
    double dw = 0.0;  // W(t + h) - W(t)
    Regime regime = Regime::bull;
  };
  std::vector<Segment> segments;
};

inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("REGIME_EQ_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

/// Base grid t_k = t0 + k dt, k < K, with t_K = T.
struct TimeGrid {
  double t0 = 0.0;
  double horizon = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;

  TimeGrid(double start, double end, double step) : t0(start), horizon(end), dt(step) {
    if (!(step > 0.0) || !(step <= end - start + 1e-12 * std::max(1.0, std::fabs(end))))
      throw InvalidArgument("time step must satisfy 0 < dt <= T - t0");
    steps = static_cast<std::size_t>(std::ceil((end - start) / step - 1e-9));
    steps = std::max<std::size_t>(steps, 1);
  }

  double node(std::size_t k) const noexcept {
    return k >= steps ? horizon : t0 + static_cast<double>(k) * dt;
  }
};

/// Log-wealth drift and volatility for fraction f in regime i.
struct StepCoefficients {
  double drift = 0.0;
  double vol = 0.0;
};

inline StepCoefficients step_coefficients(const StrategySpec& strategy, const MarketParams& m,
                                          double t, Regime i) {
  const double f = strategy.fraction(t, i);
  const double sigma = m.volatility(i);
  return {m.rate(i) + m.excess_return(i) * f - 0.5 * sigma * sigma * f * f, sigma * f};
}

/// Coefficients cached on the base grid nodes for both regimes.
class CoefficientTable {
 public:
  CoefficientTable(const StrategySpec& strategy, const MarketParams& market, const TimeGrid& grid)
      : strategy_(&strategy), market_(&market), table_(2 * grid.steps) {
    for (std::size_t k = 0; k < grid.steps; ++k) {
      const double t = grid.node(k);
      for (Regime i : kRegimes) table_[2 * k + idx(i)] = step_coefficients(strategy, market, t, i);
    }
  }

  StepCoefficients at(std::ptrdiff_t node, double t, Regime i) const {
    if (node >= 0) return table_[2 * static_cast<std::size_t>(node) + idx(i)];
    return step_coefficients(*strategy_, *market_, t, i);
  }

 private:
  const StrategySpec* strategy_;
  const MarketParams* market_;
  std::vector<StepCoefficients> table_;
};

/// Walks the base grid of one path, splitting steps at jumps and breakpoints with a
/// Brownian bridge. visit(t_left, h, dw, regime, node) with node = -1 off the grid.
template <class Visit>
void walk_path(const RegimePath& path, const TimeGrid& grid, std::span<const double> breakpoints,
               RandomStream& brownian, RandomStream& bridge, Visit&& visit) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const auto& jumps = path.jump_times;
  std::size_t jp = 0, bp = 0;
  Regime regime = path.initial_state;
  double next_event = kInf;
  auto consume = [&](double upto) {
    while (jp < jumps.size() && jumps[jp] <= upto) regime = path.states[jp++];
    while (bp < breakpoints.size() && breakpoints[bp] <= upto) ++bp;
    next_event = std::min(jp < jumps.size() ? jumps[jp] : kInf,
                          bp < breakpoints.size() ? breakpoints[bp] : kInf);
  };
  consume(grid.t0);
  const double sqrt_dt = std::sqrt(grid.dt);
  const double merge_tol = 1e-13 * std::max(1.0, std::fabs(grid.horizon));
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const double a = grid.node(k), b = grid.node(k + 1);
    const bool regular = k + 1 < grid.steps;
    double rest = (regular ? sqrt_dt : std::sqrt(b - a)) * brownian.normal();
    const auto node = static_cast<std::ptrdiff_t>(k);
    if (!(next_event < b - merge_tol)) {
      visit(a, regular ? grid.dt : b - a, rest, regime, node);
      if (next_event <= b) consume(b);
      continue;
    }
    double left = a;
    bool on_node = true;
    while (next_event < b - merge_tol) {
      const double e = next_event;
      const double span = b - left, first = e - left;
      const double dw = first / span * rest + std::sqrt(first * (b - e) / span) * bridge.normal();
      visit(left, first, dw, regime, on_node ? node : -1);
      rest -= dw;
      left = e;
      on_node = false;
      consume(e);
    }
    visit(left, b - left, rest, regime, -1);
    consume(b);
  }
}

/// Pairwise (cascade) summation in index order.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline void check_config(const SimConfig& config, const Model& model) {
  if (config.n_paths < 1) throw InvalidArgument("n_paths must be at least 1");
  if (!(config.x0 > 0.0)) throw InvalidArgument("initial wealth must be positive");
  if (!(config.t0 <= model.horizon)) throw InvalidArgument("t0 must not exceed T");
}

inline std::vector<double> merged_breakpoints(std::span<const StrategySpec> arms) {
  std::vector<double> out;
  for (const auto& s : arms) {
    const auto b = s.breakpoints();
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// Log of terminal wealth for one path, drawing Brownian noise from stream `path_index`.
inline double simulate_log_wealth(const RegimePath& path, const StrategySpec& strategy,
                                  const SimConfig& config, const MarketParams& market,
                                  std::uint64_t path_index = 0) {
  const detail::TimeGrid grid(path.start_time, path.end_time, config.dt);
  const auto breaks = strategy.breakpoints();
  RandomStream brownian(config.seed, path_index, StreamId::brownian);
  RandomStream bridge(config.seed, path_index, StreamId::bridge);
  double log_x = std::log(config.x0);
  std::size_t step = 0;
  detail::walk_path(path, grid, breaks, brownian, bridge,
                    [&](double t, double h, double dw, Regime i, std::ptrdiff_t) {
                      const auto c = detail::step_coefficients(strategy, market, t, i);
                      log_x += c.drift * h + c.vol * dw;
                      if (!std::isfinite(log_x)) throw SimulationError("non-finite wealth", step);
                      ++step;
                    });
  return log_x;
}

/// Terminal wealth X_T of one path under a homogeneous strategy.
inline double simulate_wealth(const RegimePath& path, const StrategySpec& strategy,
                              const SimConfig& config, const MarketParams& market,
                              std::uint64_t path_index = 0) {
  return std::exp(simulate_log_wealth(path, strategy, config, market, path_index));
}

/// The exact partition and increments simulate_wealth would use for this path.
inline BrownianIncrements sample_brownian_increments(const RegimePath& path, double dt,
                                                     std::span<const double> breakpoints,
                                                     std::uint64_t seed,
                                                     std::uint64_t path_index = 0) {
  const detail::TimeGrid grid(path.start_time, path.end_time, dt);
  RandomStream brownian(seed, path_index, StreamId::brownian);
  RandomStream bridge(seed, path_index, StreamId::bridge);
  BrownianIncrements out;
  detail::walk_path(path, grid, breakpoints, brownian, bridge,
                    [&](double t, double h, double dw, Regime i, std::ptrdiff_t) {
                      out.segments.push_back({t, h, dw, i});
                    });
  return out;
}

/// Merges consecutive segments so the partition becomes {t0 + k dt} plus the jump times.
/// `dt` should be a multiple of the step the increments were sampled with.
inline BrownianIncrements coarsen(const BrownianIncrements& fine, const RegimePath& path, double dt) {
  const detail::TimeGrid grid(path.start_time, path.end_time, dt);
  std::vector<double> cuts;
  for (std::size_t k = 1; k < grid.steps; ++k) cuts.push_back(grid.node(k));
  cuts.insert(cuts.end(), path.jump_times.begin(), path.jump_times.end());
  std::sort(cuts.begin(), cuts.end());
  BrownianIncrements out;
  std::size_t c = 0;
  for (const auto& seg : fine.segments) {
    const double tol = 1e-9 * std::max(seg.h, 1e-12);
    while (c < cuts.size() && cuts[c] < seg.t - tol) ++c;
    const bool starts_new =
        out.segments.empty() || (c < cuts.size() && std::fabs(cuts[c] - seg.t) <= tol) ||
        out.segments.back().regime != seg.regime;
    if (starts_new) {
      out.segments.push_back(seg);
    } else {
      out.segments.back().h += seg.h;
      out.segments.back().dw += seg.dw;
    }
  }
  return out;
}

/// Log-Euler on explicit increments; matches simulate_log_wealth bit for bit when the
/// increments come from sample_brownian_increments with the same seed and path.
inline double simulate_log_wealth(const BrownianIncrements& increments,
                                  const StrategySpec& strategy, const MarketParams& market,
                                  double x0) {
  double log_x = std::log(x0);
  std::size_t step = 0;
  for (const auto& s : increments.segments) {
    const auto c = detail::step_coefficients(strategy, market, s.t, s.regime);
    log_x += c.drift * s.h + c.vol * s.dw;
    if (!std::isfinite(log_x)) throw SimulationError("non-finite wealth", step);
    ++step;
  }
  return log_x;
}

/// Terminal wealth under the equilibrium strategy from the exponential solution of its
/// linear SDE: drift integral by 3-point Gauss-Legendre per segment, stochastic integral
/// with the segment-averaged integrand. Discretisation-free apart from the quadrature.
inline double exact_wealth_equilibrium(const RegimePath& path, const GSolution& sol,
                                       const SimConfig& config,
                                       const BrownianIncrements& increments) {
  (void)path;
  const Model& m = sol.model();
  static constexpr std::array<double, 3> kNodes{-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr std::array<double, 3> kWeights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  double log_x = std::log(config.x0);
  for (const auto& s : increments.segments) {
    const Regime i = s.regime;
    const double th = m.market.sharpe(i), th2 = th * th;
    double drift = 0.0, a_int = 0.0;
    for (std::size_t q = 0; q < 3; ++q) {
      const double u = s.t + 0.5 * s.h * (1.0 + kNodes[q]);
      const double a = a_weight(i, sol.at(std::min(u, m.horizon)),
                                transition_row(u, i, m.chain, m.horizon), m.prefs);
      drift += kWeights[q] * (th2 * a + m.market.rate(i) - 0.5 * th2 * a * a);
      a_int += kWeights[q] * a;
    }
    drift *= 0.5 * s.h;
    a_int *= 0.5;  // average of A over the segment
    log_x += drift + th * a_int * s.dw;
  }
  return std::exp(log_x);
}

/// Terminal regimes and log-wealth of n_paths joint paths, one column per strategy arm.
/// All arms see the same regime path and Brownian increments (common random numbers).
struct TerminalSample {
  std::vector<Regime> terminal;
  std::vector<std::vector<double>> log_wealth;  // [arm][path]
};

inline TerminalSample simulate_terminal(const Model& model, std::span<const StrategySpec> arms,
                                        const SimConfig& config) {
  detail::check_config(config, model);
  if (arms.empty()) throw InvalidArgument("simulate_terminal needs at least one strategy");
  const std::size_t n = config.n_paths;
  TerminalSample out;
  out.terminal.assign(n, config.i0);
  out.log_wealth.assign(arms.size(), std::vector<double>(n, std::log(config.x0)));
  if (config.t0 == model.horizon) return out;

  const detail::TimeGrid grid(config.t0, model.horizon, config.dt);
  const auto breaks = detail::merged_breakpoints(arms);
  std::vector<detail::CoefficientTable> tables;
  tables.reserve(arms.size());
  for (const auto& s : arms) tables.emplace_back(s, model.market, grid);

  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_chunk = chunks;
  std::exception_ptr error;

  auto work = [&] {
    std::vector<double> log_x(arms.size());
    while (true) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        for (std::size_t p = c * kChunk; p < std::min(n, (c + 1) * kChunk); ++p) {
          RandomStream regime_stream(config.seed, p, StreamId::regime);
          RandomStream brownian(config.seed, p, StreamId::brownian);
          RandomStream bridge(config.seed, p, StreamId::bridge);
          const RegimePath path =
              sample_regime_path(config.i0, config.t0, model.horizon, model.chain, regime_stream);
          std::fill(log_x.begin(), log_x.end(), std::log(config.x0));
          std::size_t step = 0;
          detail::walk_path(path, grid, breaks, brownian, bridge,
                            [&](double t, double h, double dw, Regime i, std::ptrdiff_t node) {
                              for (std::size_t a = 0; a < tables.size(); ++a) {
                                const auto coef = tables[a].at(node, t, i);
                                log_x[a] += coef.drift * h + coef.vol * dw;
                              }
                              ++step;
                            });
          for (std::size_t a = 0; a < arms.size(); ++a) {
            if (!std::isfinite(log_x[a]))
              throw SimulationError("non-finite wealth on path " + std::to_string(p), step);
            out.log_wealth[a][p] = log_x[a];
          }
          out.terminal[p] = path.terminal_state();
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (c < error_chunk) {
          error_chunk = c;
          error = std::current_exception();
        }
      }
    }
  };

  const unsigned workers =
      std::min<unsigned>(resolve_workers(config.workers), static_cast<unsigned>(chunks));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

namespace detail {

inline double utility_from_log(double log_x, double alpha) {
  return std::exp((1.0 - alpha) * log_x) / (1.0 - alpha);
}

// Mean and standard error of values, summed pairwise in path order.
inline std::pair<double, double> mean_and_se(std::span<const double> values) {
  const auto n = static_cast<double>(values.size());
  if (values.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity()};
  const double mean = pairwise_sum(values) / n;
  if (values.size() < 2) return {mean, std::numeric_limits<double>::infinity()};
  std::vector<double> sq(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) sq[k] = (values[k] - mean) * (values[k] - mean);
  const double var = pairwise_sum(sq) / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

}  // namespace detail

/// Per-terminal-regime utility estimate for one arm of a sample.
inline UtilityEstimate summarize_utility(const TerminalSample& sample, std::size_t arm,
                                         const Preferences& prefs, Regime j,
                                         Conditioning conditioning = Conditioning::terminal_regime) {
  const double alpha = prefs.alpha(j);
  std::vector<double> u;
  u.reserve(sample.terminal.size());
  for (std::size_t p = 0; p < sample.terminal.size(); ++p) {
    if (conditioning == Conditioning::terminal_regime && sample.terminal[p] != j) continue;
    u.push_back(detail::utility_from_log(sample.log_wealth[arm][p], alpha));
  }
  const auto [mean, se] = detail::mean_and_se(u);
  return {j, mean, se, u.size(), u.size() < 30};
}

/// J-hat = sum_j p-hat(j) (u^j)^{-1}(mean_j) with a delta-method standard error.
inline McEstimate summarize_objective(const TerminalSample& sample, std::size_t arm,
                                      const Preferences& prefs) {
  McEstimate est;
  est.n_paths = sample.terminal.size();
  const auto n = static_cast<double>(est.n_paths);
  std::array<double, 2> p_hat{}, ce{};
  double var = 0.0;
  for (Regime j : kRegimes) {
    auto& c = est.components[idx(j)];
    c = summarize_utility(sample, arm, prefs, j);
    p_hat[idx(j)] = static_cast<double>(c.n_effective) / n;
    if (c.n_effective == 0) continue;
    ce[idx(j)] = inverse_utility(c.mean, j, prefs);
    est.objective += p_hat[idx(j)] * ce[idx(j)];
    if (c.n_effective > 1) {
      const double slope = inverse_utility_slope(c.mean, j, prefs);
      var += p_hat[idx(j)] * p_hat[idx(j)] * slope * slope * c.standard_error * c.standard_error;
    }
  }
  // Multinomial noise of the cell frequencies.
  const double ce_bar = p_hat[0] * ce[0] + p_hat[1] * ce[1];
  for (std::size_t k = 0; k < 2; ++k) var += p_hat[k] * (ce[k] - ce_bar) * (ce[k] - ce_bar) / n;
  est.objective_se = std::sqrt(var);
  return est;
}

/// E[u^j(X_T) | X_t0 = x0, eps_t0 = i0, eps_T = j], estimated by filtering on eps_T.
/// With Conditioning::none the filter is dropped (plain E[u^j(X_T) | X_t0, eps_t0]).
inline UtilityEstimate estimate_conditional_utility(const Model& model,
                                                    const StrategySpec& strategy,
                                                    const SimConfig& config, Regime j,
                                                    Conditioning conditioning =
                                                        Conditioning::terminal_regime) {
  if (conditioning == Conditioning::terminal_regime &&
      transition_probability(config.t0, config.i0, j, model.chain, model.horizon) == 0.0)
    throw UnreachableRegime("terminal regime " + std::to_string(label(j)) +
                            " is unreachable from regime " + std::to_string(label(config.i0)));
  const StrategySpec arms[] = {strategy};
  const auto sample = simulate_terminal(model, arms, config);
  return summarize_utility(sample, 0, model.prefs, j, conditioning);
}

/// Certainty-equivalent objective estimate. Terminal regimes that no path reaches carry
/// zero weight. At t0 = T this is x0 exactly.
inline McEstimate estimate_objective(const Model& model, const StrategySpec& strategy,
                                     const SimConfig& config) {
  const StrategySpec arms[] = {strategy};
  const auto sample = simulate_terminal(model, arms, config);
  McEstimate est = summarize_objective(sample, 0, model.prefs);
  if (config.t0 == model.horizon) {
    est.objective = config.x0;
    est.objective_se = 0.0;
  }
  return est;
}

struct PerturbationSlope {
  double h = 0.0;
  double delta = 0.0;     // J-hat(pi_h) - J-hat(pi-hat)
  double slope = 0.0;     // delta / h
  double slope_se = 0.0;  // paired delta-method standard error of the slope
  McEstimate perturbed;
  McEstimate equilibrium;
};

/// Slope (J-hat(arm) - J-hat(base)) / h for an arm of a shared sample, with the
/// paired delta-method standard error.
inline PerturbationSlope perturbation_slope(const TerminalSample& sample, std::size_t base_arm,
                                            std::size_t arm, double h, const Preferences& prefs) {
  if (!(h > 0.0)) throw InvalidArgument("perturbation width must be positive");
  PerturbationSlope r;
  r.h = h;
  r.equilibrium = summarize_objective(sample, base_arm, prefs);
  r.perturbed = summarize_objective(sample, arm, prefs);
  r.delta = r.perturbed.objective - r.equilibrium.objective;
  r.slope = r.delta / h;

  const auto n = static_cast<double>(sample.terminal.size());
  double var = 0.0;
  std::array<double, 2> p_hat{}, gap{};
  for (Regime j : kRegimes) {
    const auto& ca = r.perturbed.components[idx(j)];
    const auto& cb = r.equilibrium.components[idx(j)];
    p_hat[idx(j)] = static_cast<double>(ca.n_effective) / n;
    if (ca.n_effective < 2) continue;
    const double alpha = prefs.alpha(j);
    const double sa = inverse_utility_slope(ca.mean, j, prefs);
    const double sb = inverse_utility_slope(cb.mean, j, prefs);
    gap[idx(j)] = inverse_utility(ca.mean, j, prefs) - inverse_utility(cb.mean, j, prefs);
    std::vector<double> paired;
    paired.reserve(ca.n_effective);
    for (std::size_t p = 0; p < sample.terminal.size(); ++p) {
      if (sample.terminal[p] != j) continue;
      paired.push_back(sa * detail::utility_from_log(sample.log_wealth[arm][p], alpha) -
                       sb * detail::utility_from_log(sample.log_wealth[base_arm][p], alpha));
    }
    const double se = detail::mean_and_se(paired).second;
    var += p_hat[idx(j)] * p_hat[idx(j)] * se * se;
  }
  const double gap_bar = p_hat[0] * gap[0] + p_hat[1] * gap[1];
  for (std::size_t q = 0; q < 2; ++q) var += p_hat[q] * (gap[q] - gap_bar) * (gap[q] - gap_bar) / n;
  r.slope_se = std::sqrt(var) / h;
  return r;
}

/// Strategy arms of a perturbation experiment: the equilibrium first, then one pi_h per
/// width, following `alternative` on [t0, t0 + h) and the equilibrium afterwards.
inline std::vector<StrategySpec> perturbation_arms(std::shared_ptr<const GSolution> sol,
                                                   const StrategySpec& alternative,
                                                   std::span<const double> h_values, double t0) {
  const double horizon = sol->model().horizon;
  for (double h : h_values) {
    if (!(h > 0.0 && h < horizon - t0))
      throw InvalidArgument("perturbation widths must lie in (0, T - t0)");
  }
  std::vector<StrategySpec> arms{StrategySpec::equilibrium(std::move(sol))};
  for (double h : h_values) arms.push_back(StrategySpec::switched(alternative, arms.front(), t0 + h));
  return arms;
}

/// Finite-h version of the equilibrium test. All arms share every random number.
inline std::vector<PerturbationSlope> perturbation_test(
    std::shared_ptr<const GSolution> sol, const StrategySpec& alternative,
    std::span<const double> h_values, const SimConfig& config) {
  const Model model = sol->model();
  const auto arms = perturbation_arms(std::move(sol), alternative, h_values, config.t0);
  const auto sample = simulate_terminal(model, arms, config);
  std::vector<PerturbationSlope> out;
  for (std::size_t k = 0; k < h_values.size(); ++k)
    out.push_back(perturbation_slope(sample, 0, k + 1, h_values[k], model.prefs));
  return out;
}

}  // namespace regime_eq
