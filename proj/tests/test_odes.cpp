#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "regime_eq/odes.hpp"

using namespace regime_eq;

namespace {

oracle::Params to_oracle(const Model& m) {
  oracle::Params p;
  for (Regime i : kRegimes) {
    p.mu[idx(i)] = m.market.drift(i);
    p.r[idx(i)] = m.market.rate(i);
    p.sigma[idx(i)] = m.market.volatility(i);
    p.alpha[idx(i)] = m.prefs.alpha(i);
    p.lambda[idx(i)] = m.chain.leave_rate(i);
  }
  p.T = m.horizon;
  return p;
}

Model frozen_equal_alpha(double a) {
  Model m = reference_model();
  m.prefs = Preferences(a, a);
  m.chain = RegimeChain(0.0, 0.0);
  return m;
}

const GSolution& reference_solution() {
  static const GSolution sol = solve_g(reference_model());
  return sol;
}

const oracle::Trajectory& oracle_solution() {
  static const oracle::Trajectory traj = oracle::solve_g(to_oracle(reference_model()), 0.0, 20000);
  return traj;
}

}  // namespace

TEST(AWeight, TerminalSingleTerm) {
  const Preferences prefs(2.0, 3.0);
  const GState ones{1, 1, 1, 1};
  EXPECT_DOUBLE_EQ(a_weight(Regime::bull, ones, {1.0, 0.0}, prefs), 0.5);
  EXPECT_DOUBLE_EQ(a_weight(Regime::bear, ones, {0.0, 1.0}, prefs), 1.0 / 3.0);
}

TEST(AWeight, EqualRiskAversion) {
  const Preferences prefs(2.5, 2.5);
  const GState g{0.3, 0.9, 1.7, 0.45};
  EXPECT_NEAR(a_weight(Regime::bull, g, {0.2, 0.8}, prefs), 0.4, 1e-15);
  EXPECT_NEAR(a_weight(Regime::bear, g, {0.6, 0.4}, prefs), 0.4, 1e-15);
}

TEST(AWeight, HandEvaluated) {
  EXPECT_NEAR(a_weight(Regime::bull, GState{1, 1, 1, 1}, {0.5, 0.5}, Preferences(2.0, 3.0)), 0.4, 1e-15);
}

TEST(Rhs, CouplingVanishesAtEqualG) {
  const Model m = reference_model();
  const GState d = rhs(m.horizon, GState{1, 1, 1, 1}, m);
  for (Regime i : kRegimes) {
    const double th2 = m.market.sharpe(i) * m.market.sharpe(i);
    const double a = 1.0 / m.prefs.alpha(i);
    for (Regime j : kRegimes) {
      const double aj = m.prefs.alpha(j);
      const double expected = (1.0 - aj) / aj * (0.5 * aj * th2 * a * a - th2 * a - m.market.rate(i));
      EXPECT_NEAR(d[slot(i, j)], expected, 1e-15);
    }
  }
}

TEST(Rhs, FrozenChainIsLinear) {
  const double a = 2.0;
  const Model m = frozen_equal_alpha(a);
  const GState g{0.9, 0.7, 0.8, 1.1};
  const GState d = rhs(4.0, g, m);
  for (Regime i : kRegimes) {
    const double th2 = m.market.sharpe(i) * m.market.sharpe(i);
    for (Regime j : kRegimes) {
      const double k = (1.0 - a) / a * (-th2 / (2.0 * a) - m.market.rate(i));
      EXPECT_NEAR(d[slot(i, j)], k * g[slot(i, j)], 1e-15);
    }
  }
}

TEST(Rhs, RejectsNonPositiveG) {
  const Model m = reference_model();
  EXPECT_THROW(rhs(1.0, GState{1, 0, 1, 1}, m), DomainError);
  EXPECT_THROW(rhs(1.0, GState{1, 1, -0.1, 1}, m), DomainError);
}

TEST(SolveG, TerminalConditionExact) {
  const auto& sol = reference_solution();
  EXPECT_EQ(sol.grid().back(), 10.0);
  for (double v : sol.values().back()) EXPECT_EQ(v, 1.0);
  for (double v : sol.at(10.0)) EXPECT_EQ(v, 1.0);
}

TEST(SolveG, ReferenceParametersPositiveWithCertificate) {
  const auto& sol = reference_solution();
  EXPECT_EQ(sol.grid().front(), 0.0);
  EXPECT_GE(sol.grid().size(), 1001u);
  EXPECT_GT(sol.min_g(), 0.0);
  EXPECT_TRUE(sol.certificate().holds);
  for (Regime j : kRegimes) {
    EXPECT_LE(sol.certificate().lower[idx(j)], sol.certificate().observed_min[idx(j)]);
    EXPECT_GE(sol.certificate().upper[idx(j)], sol.certificate().observed_max[idx(j)]);
  }
}

TEST(SolveG, WeightsStayInsideRiskAversionBounds) {
  const auto& st = reference_solution().stats();
  EXPECT_GE(st.min_a, 1.0 / 3.0 - 1e-15);
  EXPECT_LE(st.max_a, 0.5 + 1e-15);
}

TEST(SolveG, MatchesFixedStepOracle) {
  const auto& sol = reference_solution();
  const auto& ref = oracle_solution();
  for (std::size_t k = 0; k < ref.t.size(); k += 250) {
    const GState g = sol.at(ref.t[k]);
    for (Regime i : kRegimes)
      for (Regime j : kRegimes)
        EXPECT_NEAR(g[slot(i, j)], ref.g[k][idx(i)][idx(j)], 1e-9) << "t=" << ref.t[k];
  }
}

TEST(SolveG, ReferenceValuesAtZero) {
  const GState g = reference_solution().at(0.0);
  const auto& ref = oracle_solution().g.back();
  EXPECT_NEAR(g[slot(Regime::bull, Regime::bull)], ref[0][0], 1e-10);
  EXPECT_NEAR(g[slot(Regime::bear, Regime::bull)], ref[1][0], 1e-10);
  EXPECT_NEAR(g[slot(Regime::bull, Regime::bear)], ref[0][1], 1e-10);
  EXPECT_NEAR(g[slot(Regime::bear, Regime::bear)], ref[1][1], 1e-10);
}

TEST(SolveG, FrozenChainClosedForm) {
  for (double a : {0.5, 2.0, 4.0}) {
    const Model m = frozen_equal_alpha(a);
    const auto sol = solve_g(m);
    const auto p = to_oracle(m);
    for (std::size_t k = 0; k < sol.grid().size(); ++k) {
      const double t = sol.grid()[k];
      for (Regime i : kRegimes) {
        const double exact = oracle::frozen_g(p, t, idx(i));
        for (Regime j : kRegimes)
          EXPECT_NEAR(sol.values()[k][slot(i, j)] / exact - 1.0, 0.0, 1e-9) << "a=" << a << " t=" << t;
      }
    }
  }
}

TEST(SolveG, CentralDifferencesMatchRhs) {
  const auto& sol = reference_solution();
  const Model& m = sol.model();
  const double h = 1e-3;
  for (double t : {0.5, 3.0, 7.7, 9.5}) {
    const GState up = sol.at(t + h), down = sol.at(t - h);
    const GState d = rhs(t, sol.at(t), m);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR((up[k] - down[k]) / (2.0 * h), d[k], 1e-6) << t;
  }
}

TEST(SolveG, TolerancesAgree) {
  const Model m = reference_model();
  const auto coarse = solve_g(m, 0.0, 1e-8);
  const auto fine = solve_g(m, 0.0, 1e-12);
  for (std::size_t k = 0; k < coarse.grid().size(); ++k) {
    const GState a = coarse.values()[k], b = fine.at(coarse.grid()[k]);
    for (std::size_t q = 0; q < 4; ++q) EXPECT_NEAR(a[q], b[q], 1e-6);
  }
}

TEST(SolveG, SwappedLabelsPermuteTrajectories) {
  const Model m = reference_model();
  const Model s = m.swapped();
  const auto a = solve_g(m), b = solve_g(s);
  for (double t : {0.0, 2.0, 5.0, 9.0, 9.9}) {
    const GState ga = a.at(t), gb = b.at(t);
    for (Regime i : kRegimes)
      for (Regime j : kRegimes) EXPECT_NEAR(ga[slot(i, j)], gb[slot(other(i), other(j))], 1e-9) << t;
  }
}

TEST(SolveG, RejectsBadStart) {
  SolveOptions o;
  o.t_start = 10.0;
  EXPECT_THROW(solve_g(reference_model(), o), InvalidArgument);
}

TEST(SolveG, LongBackwardHorizon) {
  SolveOptions o;
  o.t_start = -40.0;
  const auto sol = solve_g(reference_model(), o);
  EXPECT_GT(sol.min_g(), 0.0);
  EXPECT_TRUE(sol.certificate().holds);
}

TEST(Interpolate, NodesExactAndRangeChecked) {
  const auto& sol = reference_solution();
  for (std::size_t k = 0; k < sol.grid().size(); k += 37) EXPECT_EQ(interpolate_g(sol, sol.grid()[k]), sol.values()[k]);
  EXPECT_EQ(interpolate_g(sol, 10.0), (GState{1, 1, 1, 1}));
  EXPECT_THROW(interpolate_g(sol, -0.1), RangeError);
  EXPECT_THROW(interpolate_g(sol, 10.1), RangeError);
}

TEST(Interpolate, MidpointAgreesWithForcedNode) {
  const auto& sol = reference_solution();
  for (std::size_t k : {10u, 400u, 990u}) {
    const double mid = 0.5 * (sol.grid()[k] + sol.grid()[k + 1]);
    SolveOptions o;
    o.forced_nodes = {mid};
    const auto forced = solve_g(sol.model(), o);
    const auto g_forced = forced.values()[std::size_t(std::find(forced.grid().begin(), forced.grid().end(), mid) -
                                                      forced.grid().begin())];
    const GState g_interp = sol.at(mid);
    for (std::size_t q = 0; q < 4; ++q) EXPECT_NEAR(g_interp[q], g_forced[q], 10.0 * sol.tolerance()) << mid;
  }
}

TEST(Convergence, FixedStepRk4ContractsSixteenfold) {
  const Model m = reference_model();
  const auto ref = solve_g(m, 0.0, 1e-12);
  const auto p = to_oracle(m);
  auto error = [&](int steps) {
    const auto traj = oracle::solve_g(p, 0.0, steps);
    double e = 0.0;
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
      const GState g = ref.at(traj.t[k]);
      for (Regime i : kRegimes)
        for (Regime j : kRegimes) e = std::max(e, std::fabs(traj.g[k][idx(i)][idx(j)] - g[slot(i, j)]));
    }
    return e;
  };
  const double ratio = error(80) / error(160);
  EXPECT_GT(ratio, 13.0);
  EXPECT_LT(ratio, 19.0);
}

TEST(TerminalMoments, EqualRiskAversionSumsToValueFunction) {
  Model m = reference_model();
  m.prefs = Preferences(2.5, 2.5);
  const auto sol = solve_g(m);
  const TerminalMoments moments(sol);
  for (double t : {0.0, 4.0, 9.0}) {
    for (Regime i : kRegimes) {
      const double total = moments.moment(t, i, Regime::bull) + moments.moment(t, i, Regime::bear);
      EXPECT_NEAR(total, std::pow(sol.at(t)[slot(i, Regime::bull)], 2.5), 1e-9) << t;
    }
  }
}

TEST(TerminalMoments, FrozenChainConditioningIsVacuous) {
  Model m = reference_model();
  m.chain = RegimeChain(0.0, 0.0);
  const auto sol = solve_g(m);
  const TerminalMoments moments(sol);
  for (Regime i : kRegimes) {
    const double a = m.prefs.alpha(i);
    const double f = std::pow(sol.at(0.0)[slot(i, i)], a) / (1.0 - a);
    EXPECT_NEAR(moments.conditional_utility(0.0, 1.0, i, i), f, 1e-9 * std::fabs(f));
    EXPECT_THROW(moments.conditional_utility(0.0, 1.0, i, other(i)), UnreachableRegime);
  }
}
