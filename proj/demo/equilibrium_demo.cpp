// Solves the reference model, prints the equilibrium fractions next to the Merton
// bounds, and checks one value function against a small simulation.

#include <cstdio>
#include <memory>

#include "regime_eq/regime_eq.hpp"

using namespace regime_eq;

int main() {
  const Model model = reference_model();
  const auto sol = std::make_shared<const GSolution>(solve_g(model));
  const Preferences& prefs = model.prefs;

  std::printf("%6s %10s %10s   %s\n", "t", "pi*(t,1)", "pi*(t,2)", "Merton bounds (alpha2, alpha1)");
  for (double t : {0.0, 2.0, 4.0, 6.0, 8.0, 9.0, 9.5, 9.9, 10.0}) {
    std::printf("%6.2f %10.6f %10.6f", t, equilibrium_fraction(t, Regime::bull, *sol),
                equilibrium_fraction(t, Regime::bear, *sol));
    for (Regime i : kRegimes) {
      std::printf("   [%.4f, %.4f]", merton_fraction(i, prefs.alpha_max(), model.market),
                  merton_fraction(i, prefs.alpha_min(), model.market));
    }
    std::printf("\n");
  }

  SimConfig sim;
  sim.n_paths = 4000;
  sim.dt = 1e-2;
  const McEstimate est = estimate_objective(model, StrategySpec::equilibrium(sol), sim);
  std::printf("\nJ(0, 1, bull): closed form %.6f, Monte Carlo %.6f +- %.6f (%zu paths)\n",
              objective(0.0, 1.0, Regime::bull, *sol), est.objective, est.objective_se, est.n_paths);
  return 0;
}
