#pragma once

// The four-dimensional g-system behind the equilibrium strategy.
//
// With f^{i,j}(t,x) = x^{1-a_j} g^{i,j}(t)^{a_j} / (1-a_j) the extended HJB
// equations reduce to
//
//   a_j/(1-a_j) g'^{i,j} = { a_j th_i^2 A_i^2 / 2 - th_i^2 A_i - r_i
//                            + l_i/(1-a_j) [1 - (g^{k,j}/g^{i,j})^{a_j}] } g^{i,j},   k != i
//
// with g^{i,j}(T) = 1, th_i = (mu_i - r_i)/sigma_i and A_i the p- and g-weighted
// aggregate of 1/a_j. The system is integrated backward from T in tau = T - t.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "regime_eq/errors.hpp"
#include "regime_eq/model.hpp"
#include "regime_eq/regime.hpp"

namespace regime_eq {

/// (g^{1,1}, g^{2,1}, g^{1,2}, g^{2,2}); the component order of every g vector and CSV.
using GState = std::array<double, 4>;

constexpr std::size_t slot(Regime i, Regime j) noexcept { return 2 * idx(j) + idx(i); }

/// A_i(t) = sum_j p_j w_j / sum_j a_j p_j w_j with w_j = (g^{i,j})^{a_j/(1-a_j)}.
inline double a_weight(Regime i, const GState& g, const std::array<double, 2>& probs,
                       const Preferences& prefs) {
  double numer = 0.0, denom = 0.0;
  for (Regime j : kRegimes) {
    const double gij = g[slot(i, j)];
    if (!(gij > 0.0)) throw DomainError("a_weight requires positive g");
    const double w = probs[idx(j)] * std::pow(gij, prefs.ce_exponent(j));
    numer += w;
    denom += prefs.alpha(j) * w;
  }
  return numer / denom;
}

/// Both A_1(t) and A_2(t) for the state g at time t.
inline std::array<double, 2> a_weights(double t, const GState& g, const Model& model) {
  return {a_weight(Regime::bull, g, transition_row(t, Regime::bull, model.chain, model.horizon),
                   model.prefs),
          a_weight(Regime::bear, g, transition_row(t, Regime::bear, model.chain, model.horizon),
                   model.prefs)};
}

/// dg/dt of the g-system at (t, g).
inline GState rhs(double t, const GState& g, const Model& model) {
  for (double v : g) {
    if (!(v > 0.0)) throw DomainError("g-system evaluated outside g > 0");
  }
  const auto a = a_weights(t, g, model);
  GState dg{};
  for (Regime j : kRegimes) {
    const double alpha = model.prefs.alpha(j);
    for (Regime i : kRegimes) {
      const double th2 = model.market.sharpe(i) * model.market.sharpe(i);
      const double ai = a[idx(i)];
      const double gij = g[slot(i, j)];
      const double ratio = g[slot(other(i), j)] / gij;
      const double bracket = 0.5 * alpha * th2 * ai * ai - th2 * ai - model.market.rate(i) +
                             model.chain.leave_rate(i) / (1.0 - alpha) *
                                 (1.0 - std::pow(ratio, alpha));
      dg[slot(i, j)] = (1.0 - alpha) / alpha * bracket * gij;
    }
  }
  return dg;
}

/// Piecewise cubic Hermite curve through (t_m, y_m, y'_m).
class HermiteTrajectory {
 public:
  HermiteTrajectory() = default;
  HermiteTrajectory(std::vector<double> grid, std::vector<GState> values,
                    std::vector<GState> derivs)
      : grid_(std::move(grid)), values_(std::move(values)), derivs_(std::move(derivs)) {
    if (grid_.size() < 2 || values_.size() != grid_.size() || derivs_.size() != grid_.size())
      throw InvalidArgument("trajectory needs at least two nodes with values and derivatives");
    for (std::size_t m = 1; m < grid_.size(); ++m) {
      if (!(grid_[m] > grid_[m - 1])) throw InvalidArgument("grid must be strictly increasing");
    }
  }

  std::span<const double> grid() const noexcept { return grid_; }
  std::span<const GState> values() const noexcept { return values_; }
  std::span<const GState> derivs() const noexcept { return derivs_; }
  double front() const noexcept { return grid_.front(); }
  double back() const noexcept { return grid_.back(); }

  GState value(double t) const {
    const auto [m, s] = locate(t);
    if (s == 0.0) return values_[m];
    const double h = grid_[m + 1] - grid_[m];
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    GState out{};
    for (std::size_t k = 0; k < 4; ++k) {
      out[k] = h00 * values_[m][k] + h10 * h * derivs_[m][k] + h01 * values_[m + 1][k] +
               h11 * h * derivs_[m + 1][k];
    }
    return out;
  }

  GState derivative(double t) const {
    const auto [m, s] = locate(t);
    if (s == 0.0) return derivs_[m];
    const double h = grid_[m + 1] - grid_[m];
    const double s2 = s * s;
    const double d00 = (6 * s2 - 6 * s) / h, d10 = 3 * s2 - 4 * s + 1;
    const double d01 = (-6 * s2 + 6 * s) / h, d11 = 3 * s2 - 2 * s;
    GState out{};
    for (std::size_t k = 0; k < 4; ++k) {
      out[k] = d00 * values_[m][k] + d10 * derivs_[m][k] + d01 * values_[m + 1][k] +
               d11 * derivs_[m + 1][k];
    }
    return out;
  }

 private:
  // Interval index and local coordinate in [0, 1); exact nodes give s == 0.
  std::pair<std::size_t, double> locate(double t) const {
    if (!(t >= grid_.front() && t <= grid_.back()))
      throw RangeError("time " + std::to_string(t) + " outside solved range [" +
                       std::to_string(grid_.front()) + ", " + std::to_string(grid_.back()) + "]");
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
    auto m = static_cast<std::size_t>(it - grid_.begin()) - 1;
    if (grid_[m] == t) return {m, 0.0};
    return {m, (t - grid_[m]) / (grid_[m + 1] - grid_[m])};
  }

  std::vector<double> grid_;
  std::vector<GState> values_;
  std::vector<GState> derivs_;
};

struct SolveOptions {
  double tolerance = 1e-10;  // absolute and relative
  double t_start = 0.0;
  std::size_t min_points = 1000;   // caps the step at (T - t_start) / min_points
  std::vector<double> forced_nodes;  // times that must appear on the grid
  int max_halvings = 60;
};

struct SolveStats {
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t positivity_rejections = 0;
  std::size_t rhs_evaluations = 0;
  double min_g = std::numeric_limits<double>::infinity();
  double min_a = std::numeric_limits<double>::infinity();  // extremes of A_i seen in rhs calls
  double max_a = -std::numeric_limits<double>::infinity();
};

/// Bounds on x_j = (g^{1,j}/g^{2,j})^{a_j} from frozen-coefficient Riccati comparison
/// equations, together with the range actually observed on the solved grid.
struct RatioCertificate {
  std::array<double, 2> drift_lower{};  // M1 per terminal regime j
  std::array<double, 2> drift_upper{};  // M2
  std::array<double, 2> lower{};
  std::array<double, 2> upper{};
  std::array<double, 2> observed_min{};
  std::array<double, 2> observed_max{};
  bool holds = false;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct Dopri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

inline GState axpy(const GState& y, double h, std::initializer_list<std::pair<double, const GState*>> terms) {
  GState out = y;
  for (const auto& [c, k] : terms) {
    for (std::size_t n = 0; n < 4; ++n) out[n] += h * c * (*k)[n];
  }
  return out;
}

inline bool all_positive(const GState& y) noexcept {
  return std::all_of(y.begin(), y.end(), [](double v) { return v > 0.0; });
}

/// Integrates dy/dt = field(t, y) backward from y(T) = terminal down to options.t_start.
/// Returns nodes in increasing t. `positive` enables the g > 0 guard rail.
template <class Field>
HermiteTrajectory integrate_backward(Field&& field, const GState& terminal, double horizon,
                                     const SolveOptions& options, bool positive,
                                     SolveStats& stats) {
  using D = Dopri5;
  if (!(options.t_start < horizon)) throw InvalidArgument("solve requires t_start < T");
  if (!(options.tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");

  const double span = horizon - options.t_start;
  const double h_max = span / static_cast<double>(std::max<std::size_t>(options.min_points, 1));

  // Forced stopping points in tau, ascending, ending at the full span.
  std::vector<double> stops;
  for (double t : options.forced_nodes) {
    if (t > options.t_start && t < horizon) stops.push_back(horizon - t);
  }
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  stops.push_back(span);

  // In tau the field flips sign.
  auto f = [&](double tau, const GState& y) {
    ++stats.rhs_evaluations;
    GState d = field(std::clamp(horizon - tau, options.t_start, horizon), y);
    for (double& v : d) v = -v;
    return d;
  };

  std::vector<double> taus{0.0};
  std::vector<GState> ys{terminal};
  std::vector<GState> ks{f(0.0, terminal)};

  double tau = 0.0;
  GState y = terminal;
  GState k1 = ks.back();
  double h = std::min(h_max, 1e-3 * span);
  int halvings = 0;
  std::size_t next_stop = 0;
  const double atol = options.tolerance, rtol = options.tolerance;

  while (next_stop < stops.size()) {
    const double target = stops[next_stop];
    bool lands = false;
    if (tau + h >= target - 1e-14 * span) {
      h = target - tau;
      lands = true;
    }
    if (h < 1e-15 * std::max(1.0, span))
      throw SolverError("step size underflow in g-system", horizon - tau);

    GState k2, k3, k4, k5, k6, k7, y_new;
    bool domain_ok = true;
    try {
      const GState y2 = axpy(y, h, {{D::a21, &k1}});
      if (positive && !all_positive(y2)) throw DomainError("stage");
      k2 = f(tau + D::c2 * h, y2);
      const GState y3 = axpy(y, h, {{D::a31, &k1}, {D::a32, &k2}});
      if (positive && !all_positive(y3)) throw DomainError("stage");
      k3 = f(tau + D::c3 * h, y3);
      const GState y4 = axpy(y, h, {{D::a41, &k1}, {D::a42, &k2}, {D::a43, &k3}});
      if (positive && !all_positive(y4)) throw DomainError("stage");
      k4 = f(tau + D::c4 * h, y4);
      const GState y5 =
          axpy(y, h, {{D::a51, &k1}, {D::a52, &k2}, {D::a53, &k3}, {D::a54, &k4}});
      if (positive && !all_positive(y5)) throw DomainError("stage");
      k5 = f(tau + D::c5 * h, y5);
      const GState y6 = axpy(
          y, h, {{D::a61, &k1}, {D::a62, &k2}, {D::a63, &k3}, {D::a64, &k4}, {D::a65, &k5}});
      if (positive && !all_positive(y6)) throw DomainError("stage");
      k6 = f(tau + h, y6);
      y_new = axpy(y, h, {{D::b1, &k1}, {D::b3, &k3}, {D::b4, &k4}, {D::b5, &k5}, {D::b6, &k6}});
      if (positive && !all_positive(y_new)) throw DomainError("result");
      k7 = f(tau + h, y_new);
    } catch (const DomainError&) {
      domain_ok = false;
    }

    if (!domain_ok) {
      ++stats.positivity_rejections;
      if (++halvings > options.max_halvings)
        throw SolverError("g left the region g > 0 after repeated step halving", horizon - tau);
      h *= 0.5;
      continue;
    }

    double err = 0.0;
    for (std::size_t n = 0; n < 4; ++n) {
      const double e = h * (D::e1 * k1[n] + D::e3 * k3[n] + D::e4 * k4[n] + D::e5 * k5[n] +
                            D::e6 * k6[n] + D::e7 * k7[n]);
      const double scale = atol + rtol * std::max(std::fabs(y[n]), std::fabs(y_new[n]));
      err = std::max(err, std::fabs(e) / scale);
    }

    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (err <= 1.0) {
      tau = lands ? target : tau + h;
      y = y_new;
      k1 = k7;
      taus.push_back(tau);
      ys.push_back(y);
      ks.push_back(k7);
      ++stats.accepted_steps;
      halvings = 0;
      if (lands) ++next_stop;
      h = std::min(h_max, h * factor);
    } else {
      ++stats.rejected_steps;
      h *= std::min(1.0, factor);
    }
  }

  // Back to increasing t with dy/dt = -dy/dtau.
  const std::size_t n = taus.size();
  std::vector<double> grid(n);
  std::vector<GState> values(n), derivs(n);
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t src = n - 1 - m;
    grid[m] = src == 0 ? horizon : (src == n - 1 ? options.t_start : horizon - taus[src]);
    values[m] = ys[src];
    for (std::size_t c = 0; c < 4; ++c) derivs[m][c] = -ks[src][c];
  }
  // Forced nodes are reported at exactly the requested time.
  for (double t : options.forced_nodes) {
    if (!(t > options.t_start && t < horizon)) continue;
    auto it = std::min_element(grid.begin(), grid.end(), [t](double a, double b) {
      return std::fabs(a - t) < std::fabs(b - t);
    });
    if (std::fabs(*it - t) <= 1e-12 * std::max(1.0, std::fabs(t))) *it = t;
  }
  return HermiteTrajectory(std::move(grid), std::move(values), std::move(derivs));
}

// Range of th^2 (a A^2 / 2 - A) over A in [lo, hi].
inline std::pair<double, double> hamiltonian_range(double th2, double alpha, double lo,
                                                   double hi) {
  auto b = [&](double a) { return th2 * (0.5 * alpha * a * a - a); };
  double mn = std::min(b(lo), b(hi)), mx = std::max(b(lo), b(hi));
  const double vertex = 1.0 / alpha;
  if (vertex > lo && vertex < hi) {
    mn = std::min(mn, b(vertex));
    mx = std::max(mx, b(vertex));
  }
  return {mn, mx};
}

// Envelope of dx/dtau = -l2 x^2 - c x + l1, x(0) = 1, over tau in [0, span] (classic RK4).
inline std::pair<double, double> riccati_envelope(double l1, double l2, double c, double span) {
  constexpr int kSteps = 20000;
  const double h = span / kSteps;
  auto f = [&](double x) { return -l2 * x * x - c * x + l1; };
  double x = 1.0, lo = 1.0, hi = 1.0;
  for (int s = 0; s < kSteps; ++s) {
    const double q1 = f(x), q2 = f(x + 0.5 * h * q1), q3 = f(x + 0.5 * h * q2),
                 q4 = f(x + h * q3);
    x += h / 6.0 * (q1 + 2 * q2 + 2 * q3 + q4);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return {lo, hi};
}

}  // namespace detail

/// Ratio-bound certificate for a solved trajectory. The drift term of the ratio
/// equation is bounded using A_i in [1/a_max, 1/a_min].
inline RatioCertificate ratio_certificate(const Model& model, const HermiteTrajectory& traj) {
  RatioCertificate cert;
  const auto& m = model.market;
  const double a_lo = 1.0 / model.prefs.alpha_max(), a_hi = 1.0 / model.prefs.alpha_min();
  const double l1 = model.chain.lambda1(), l2 = model.chain.lambda2();
  const double span = traj.back() - traj.front();
  cert.holds = true;
  for (Regime j : kRegimes) {
    const double alpha = model.prefs.alpha(j);
    const double th1 = m.sharpe(Regime::bull), th2 = m.sharpe(Regime::bear);
    const auto [b1_lo, b1_hi] = detail::hamiltonian_range(th1 * th1, alpha, a_lo, a_hi);
    const auto [b2_lo, b2_hi] = detail::hamiltonian_range(th2 * th2, alpha, a_lo, a_hi);
    const double shift =
        -m.rate(Regime::bull) + m.rate(Regime::bear) + (l1 - l2) / (1.0 - alpha);
    const double m_lo = b1_lo - b2_hi + shift, m_hi = b1_hi - b2_lo + shift;
    cert.drift_lower[idx(j)] = m_lo;
    cert.drift_upper[idx(j)] = m_hi;
    const double c_lo = std::min((1.0 - alpha) * m_lo, (1.0 - alpha) * m_hi);
    const double c_hi = std::max((1.0 - alpha) * m_lo, (1.0 - alpha) * m_hi);
    // Smaller c pushes x up, larger c pushes it down.
    const auto upper_env = detail::riccati_envelope(l1, l2, c_lo, span);
    const auto lower_env = detail::riccati_envelope(l1, l2, c_hi, span);
    cert.upper[idx(j)] = upper_env.second;
    cert.lower[idx(j)] = lower_env.first;

    double obs_lo = std::numeric_limits<double>::infinity(), obs_hi = -obs_lo;
    for (const GState& g : traj.values()) {
      const double x = std::pow(g[slot(Regime::bull, j)] / g[slot(Regime::bear, j)], alpha);
      obs_lo = std::min(obs_lo, x);
      obs_hi = std::max(obs_hi, x);
    }
    cert.observed_min[idx(j)] = obs_lo;
    cert.observed_max[idx(j)] = obs_hi;
    constexpr double kSlack = 1e-8;
    if (obs_lo < cert.lower[idx(j)] * (1.0 - kSlack) || obs_hi > cert.upper[idx(j)] * (1.0 + kSlack))
      cert.holds = false;
  }
  return cert;
}

/// Output of solve_g: the g trajectories on an accepted-step grid plus provenance.
class GSolution {
 public:
  GSolution(Model model, HermiteTrajectory traj, double tolerance, SolveStats stats)
      : model_(std::move(model)),
        traj_(std::move(traj)),
        tolerance_(tolerance),
        stats_(stats),
        certificate_(ratio_certificate(model_, traj_)) {
    if (traj_.back() != model_.horizon) throw InvalidArgument("trajectory must end at T");
    for (const GState& g : traj_.values()) {
      for (double v : g) {
        if (!(v > 0.0)) throw InvalidArgument("g trajectory must be positive");
      }
    }
  }

  const Model& model() const noexcept { return model_; }
  double horizon() const noexcept { return model_.horizon; }
  double start() const noexcept { return traj_.front(); }
  double tolerance() const noexcept { return tolerance_; }
  const SolveStats& stats() const noexcept { return stats_; }
  const RatioCertificate& certificate() const noexcept { return certificate_; }
  const HermiteTrajectory& trajectory() const noexcept { return traj_; }
  std::span<const double> grid() const noexcept { return traj_.grid(); }
  std::span<const GState> values() const noexcept { return traj_.values(); }
  std::span<const GState> derivs() const noexcept { return traj_.derivs(); }

  /// Dense g at time t (cubic Hermite; exact at nodes).
  GState at(double t) const {
    GState g = traj_.value(t);
    for (double v : g) {
      if (!(v > 0.0)) throw DomainError("interpolated g is not positive");
    }
    return g;
  }

  double min_g() const noexcept {
    double mn = std::numeric_limits<double>::infinity();
    for (const GState& g : traj_.values()) mn = std::min(mn, *std::min_element(g.begin(), g.end()));
    return mn;
  }

 private:
  Model model_;
  HermiteTrajectory traj_;
  double tolerance_;
  SolveStats stats_;
  RatioCertificate certificate_;
};

/// Solves the g-system on [options.t_start, T] with an adaptive Dormand-Prince 5(4) pair.
inline GSolution solve_g(const Model& model, const SolveOptions& options = {}) {
  SolveStats stats;
  auto field = [&](double t, const GState& g) {
    const GState d = rhs(t, g, model);
    const auto a = a_weights(t, g, model);
    stats.min_a = std::min({stats.min_a, a[0], a[1]});
    stats.max_a = std::max({stats.max_a, a[0], a[1]});
    return d;
  };
  auto traj = detail::integrate_backward(field, GState{1.0, 1.0, 1.0, 1.0}, model.horizon,
                                         options, true, stats);
  for (const GState& g : traj.values())
    stats.min_g = std::min(stats.min_g, *std::min_element(g.begin(), g.end()));
  return GSolution(model, std::move(traj), options.tolerance, stats);
}

inline GSolution solve_g(const Model& model, double t_start, double tolerance) {
  SolveOptions options;
  options.t_start = t_start;
  options.tolerance = tolerance;
  return solve_g(model, options);
}

inline GState interpolate_g(const GSolution& sol, double t) { return sol.at(t); }

/// Terminal-regime-resolved power moments under the equilibrium strategy:
///   E[ X_T^{1-a_j} 1{eps_T = j} | X_t = x, eps_t = i ] = x^{1-a_j} m^{i,j}(t).
/// The family solves a linear ODE driven by A_i(t) from a g solution, so it gives
/// an exact reference for Monte Carlo estimates that condition on eps_T = j.
class TerminalMoments {
 public:
  explicit TerminalMoments(const GSolution& sol, double tolerance = 1e-11) : model_(sol.model()) {
    SolveOptions options;
    options.t_start = sol.start();
    options.tolerance = tolerance;
    SolveStats stats;
    const Model& model = model_;
    auto field = [&](double t, const GState& m) {
      const auto a = a_weights(t, sol.at(t), model);
      GState d{};
      for (Regime j : kRegimes) {
        const double alpha = model.prefs.alpha(j);
        for (Regime i : kRegimes) {
          const double th2 = model.market.sharpe(i) * model.market.sharpe(i);
          const double ai = a[idx(i)];
          const double growth =
              (1.0 - alpha) * (model.market.rate(i) + th2 * ai - 0.5 * alpha * th2 * ai * ai);
          d[slot(i, j)] = -growth * m[slot(i, j)] -
                          model.chain.leave_rate(i) * (m[slot(other(i), j)] - m[slot(i, j)]);
        }
      }
      return d;
    };
    GState terminal{};
    for (Regime j : kRegimes) terminal[slot(j, j)] = 1.0;
    traj_ = detail::integrate_backward(field, terminal, model.horizon, options, false, stats);
  }

  /// m^{i,j}(t).
  double moment(double t, Regime i, Regime j) const { return traj_.value(t)[slot(i, j)]; }

  /// E[u^j(X_T) | X_t = x, eps_t = i, eps_T = j].
  double conditional_utility(double t, double x, Regime i, Regime j) const {
    const double p = transition_probability(t, i, j, model_.chain, model_.horizon);
    if (!(p > 0.0)) throw UnreachableRegime("terminal regime has zero probability");
    const double alpha = model_.prefs.alpha(j);
    return std::pow(x, 1.0 - alpha) / (1.0 - alpha) * moment(t, i, j) / p;
  }

  /// sum_j p(t,i,j) (u^j)^{-1}(E[u^j(X_T) | ..., eps_T = j]); the objective with exact conditioning.
  double conditional_objective(double t, double x, Regime i) const {
    double total = 0.0;
    for (Regime j : kRegimes) {
      const double p = transition_probability(t, i, j, model_.chain, model_.horizon);
      if (p == 0.0) continue;
      const double alpha = model_.prefs.alpha(j);
      total += p * x * std::pow(moment(t, i, j) / p, 1.0 / (1.0 - alpha));
    }
    return total;
  }

 private:
  Model model_;
  HermiteTrajectory traj_;
};

}  // namespace regime_eq
