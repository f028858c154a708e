#pragma once

// Closed-form evaluation on top of a solved g-system: CRRA utilities, Merton
// and equilibrium fractions, value functions f^{i,j} and the objective J.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <variant>
#include <vector>

#include "regime_eq/errors.hpp"
#include "regime_eq/model.hpp"
#include "regime_eq/odes.hpp"
#include "regime_eq/regime.hpp"

namespace regime_eq {

/// u^j(x) = x^{1-a_j} / (1-a_j).
inline double utility(double x, Regime j, const Preferences& prefs) {
  if (!(x > 0.0)) throw DomainError("utility requires positive wealth");
  const double a = prefs.alpha(j);
  return std::pow(x, 1.0 - a) / (1.0 - a);
}

/// (u^j)^{-1}(y) = ((1-a_j) y)^{1/(1-a_j)}; y must have the sign of 1/(1-a_j).
inline double inverse_utility(double y, Regime j, const Preferences& prefs) {
  const double a = prefs.alpha(j);
  const double scaled = (1.0 - a) * y;
  if (!std::isfinite(y)) throw DomainError("inverse_utility requires a finite argument");
  if (scaled == 0.0) {
    if (a > 1.0) throw RangeError("inverse_utility diverges at y = 0 for risk aversion above one");
    throw DomainError("inverse_utility: y = 0 maps to zero wealth");
  }
  if (scaled < 0.0) throw DomainError("inverse_utility argument outside the range of u^j");
  return std::pow(scaled, 1.0 / (1.0 - a));
}

/// d/dy (u^j)^{-1}(y) = ((u^j)^{-1}(y))^{a_j}.
inline double inverse_utility_slope(double y, Regime j, const Preferences& prefs) {
  return std::pow(inverse_utility(y, j, prefs), prefs.alpha(j));
}

/// (mu_i - r_i) / (alpha sigma_i^2).
inline double merton_fraction(Regime i, double alpha, const MarketParams& market) {
  if (!(alpha > 0.0) || alpha == 1.0) throw InvalidArgument("merton_fraction requires alpha > 0, != 1");
  return market.risk_premium_ratio(i) / alpha;
}

inline double a_weight_at(double t, Regime i, const GSolution& sol) {
  const Model& m = sol.model();
  return a_weight(i, sol.at(t), transition_row(t, i, m.chain, m.horizon), m.prefs);
}

/// Equilibrium proportion of wealth in the stock: (mu_i - r_i)/sigma_i^2 * A_i(t).
inline double equilibrium_fraction(double t, Regime i, const GSolution& sol) {
  return sol.model().market.risk_premium_ratio(i) * a_weight_at(t, i, sol);
}

/// Dollar amount held in the stock; linear in x.
inline double equilibrium_dollars(double t, double x, Regime i, const GSolution& sol) {
  return x * equilibrium_fraction(t, i, sol);
}

/// f^{i,j}(t,x) = x^{1-a_j} (g^{i,j}(t))^{a_j} / (1-a_j).
inline double value_function(double t, double x, Regime i, Regime j, const GSolution& sol) {
  if (!(x > 0.0)) throw DomainError("value_function requires positive wealth");
  const double a = sol.model().prefs.alpha(j);
  const double g = sol.at(t)[slot(i, j)];
  return std::pow(x, 1.0 - a) * std::pow(g, a) / (1.0 - a);
}

/// Certainty equivalent (u^j)^{-1}(f^{i,j}(t,x)) = x (g^{i,j})^{a_j/(1-a_j)}.
inline double certainty_equivalent(double t, double x, Regime i, Regime j, const GSolution& sol) {
  if (!(x > 0.0)) throw DomainError("certainty_equivalent requires positive wealth");
  return x * std::pow(sol.at(t)[slot(i, j)], sol.model().prefs.ce_exponent(j));
}

/// J(t,x,i) = x sum_j p(t,i,j) (g^{i,j}(t))^{a_j/(1-a_j)}.
///
/// Evaluated through the g powers directly: composing inverse_utility with
/// value_function loses precision when f is a tiny negative number.
inline double objective(double t, double x, Regime i, const GSolution& sol) {
  if (!(x > 0.0)) throw DomainError("objective requires positive wealth");
  const Model& m = sol.model();
  const GState g = sol.at(t);
  double total = 0.0;
  for (Regime j : kRegimes) {
    total += transition_probability(t, i, j, m.chain, m.horizon) *
             std::pow(g[slot(i, j)], m.prefs.ce_exponent(j));
  }
  return x * total;
}

struct ValuePoint {
  double t = 0.0;
  double x = 0.0;
  Regime i = Regime::bull;
  std::array<double, 2> f{};  // f^{i,1}, f^{i,2}
  double objective = 0.0;
};

inline ValuePoint value_point(double t, double x, Regime i, const GSolution& sol) {
  return {t, x, i, {value_function(t, x, i, Regime::bull, sol), value_function(t, x, i, Regime::bear, sol)},
          objective(t, x, i, sol)};
}

/// A wealth-homogeneous feedback strategy pi(t, x, i) = x * fraction(t, i).
class StrategySpec {
 public:
  struct Equilibrium {
    std::shared_ptr<const GSolution> solution;
  };
  struct ConstantFraction {
    std::array<double, 2> fraction{};
  };
  struct ZeroInvestment {};
  /// `first` on [t, switch_time), `then` afterwards; the pi_h of the equilibrium test.
  struct Switched {
    std::shared_ptr<const StrategySpec> first;
    std::shared_ptr<const StrategySpec> then;
    double switch_time = 0.0;
  };
  using Kind = std::variant<Equilibrium, ConstantFraction, ZeroInvestment, Switched>;

  static StrategySpec equilibrium(std::shared_ptr<const GSolution> sol) {
    if (!sol) throw InvalidArgument("equilibrium strategy needs a solution");
    const Model& m = sol->model();
    const double bound =
        std::max(std::fabs(m.market.risk_premium_ratio(Regime::bull)),
                 std::fabs(m.market.risk_premium_ratio(Regime::bear))) /
        m.prefs.alpha_min();
    return StrategySpec(Equilibrium{std::move(sol)}, bound);
  }

  static StrategySpec constant_fraction(std::array<double, 2> fraction) {
    for (double f : fraction) {
      if (!std::isfinite(f)) throw InvalidArgument("constant fraction must be finite");
    }
    return StrategySpec(ConstantFraction{fraction},
                        std::max(std::fabs(fraction[0]), std::fabs(fraction[1])));
  }

  static StrategySpec zero_investment() { return StrategySpec(ZeroInvestment{}, 0.0); }

  static StrategySpec switched(StrategySpec first, StrategySpec then, double switch_time) {
    const double bound = std::max(first.bound_c(), then.bound_c());
    return StrategySpec(Switched{std::make_shared<const StrategySpec>(std::move(first)),
                                 std::make_shared<const StrategySpec>(std::move(then)),
                                 switch_time},
                        bound);
  }

  const Kind& kind() const noexcept { return kind_; }

  /// Admissibility constant C with |pi(t,x,i)| <= C|x|.
  double bound_c() const noexcept { return bound_c_; }

  /// Proportion of wealth in the stock.
  double fraction(double t, Regime i) const {
    return std::visit(
        [&](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Equilibrium>) {
            return equilibrium_fraction(t, i, *k.solution);
          } else if constexpr (std::is_same_v<K, ConstantFraction>) {
            return k.fraction[idx(i)];
          } else if constexpr (std::is_same_v<K, ZeroInvestment>) {
            return 0.0;
          } else {
            return t < k.switch_time ? k.first->fraction(t, i) : k.then->fraction(t, i);
          }
        },
        kind_);
  }

  double dollars(double t, double x, Regime i) const { return x * fraction(t, i); }

  /// Times where the strategy changes definition; simulators split steps there.
  std::vector<double> breakpoints() const {
    std::vector<double> out;
    if (const auto* s = std::get_if<Switched>(&kind_)) {
      out = s->first->breakpoints();
      const auto rest = s->then->breakpoints();
      out.insert(out.end(), rest.begin(), rest.end());
      out.push_back(s->switch_time);
      std::sort(out.begin(), out.end());
    }
    return out;
  }

 private:
  StrategySpec(Kind kind, double bound) : kind_(std::move(kind)), bound_c_(bound) {
    if (!std::isfinite(bound_c_)) throw InvalidArgument("admissibility bound must be finite");
  }

  Kind kind_;
  double bound_c_;
};

}  // namespace regime_eq
