#pragma once

#include <array>
#include <cmath>
#include <string>

#include "regime_eq/errors.hpp"
#include "regime_eq/regime.hpp"

namespace regime_eq {

/// Per-regime bond rate r_i and stock drift/volatility (mu_i, sigma_i).
class MarketParams {
 public:
  MarketParams() = default;
  MarketParams(std::array<double, 2> r, std::array<double, 2> mu, std::array<double, 2> sigma)
      : r_(r), mu_(mu), sigma_(sigma) {
    for (std::size_t k = 0; k < 2; ++k) {
      if (!std::isfinite(r_[k]) || !std::isfinite(mu_[k]) || !std::isfinite(sigma_[k]))
        throw InvalidArgument("market coefficients must be finite");
      if (!(sigma_[k] > 0.0)) throw InvalidArgument("volatility must be positive");
    }
  }

  double rate(Regime i) const noexcept { return r_[idx(i)]; }
  double drift(Regime i) const noexcept { return mu_[idx(i)]; }
  double volatility(Regime i) const noexcept { return sigma_[idx(i)]; }
  double excess_return(Regime i) const noexcept { return mu_[idx(i)] - r_[idx(i)]; }

  /// Market price of risk theta_i = (mu_i - r_i) / sigma_i.
  double sharpe(Regime i) const noexcept { return excess_return(i) / volatility(i); }

  /// (mu_i - r_i) / sigma_i^2, the Merton fraction of a unit-risk-aversion investor.
  double risk_premium_ratio(Regime i) const noexcept {
    return excess_return(i) / (volatility(i) * volatility(i));
  }

  /// Bull/bear ordering: 0 < mu1-r1 < mu2-r2, 0 < sigma1 < sigma2 and a larger
  /// reward-to-variance ratio in the bull regime. Violations are not errors.
  bool bull_bear_ordered() const noexcept {
    const double e1 = excess_return(Regime::bull), e2 = excess_return(Regime::bear);
    return 0.0 < e1 && e1 < e2 && sigma_[0] < sigma_[1] &&
           risk_premium_ratio(Regime::bull) > risk_premium_ratio(Regime::bear);
  }

  MarketParams swapped() const {
    return {{r_[1], r_[0]}, {mu_[1], mu_[0]}, {sigma_[1], sigma_[0]}};
  }

 private:
  std::array<double, 2> r_{0.05, 0.01};
  std::array<double, 2> mu_{0.15, 0.25};
  std::array<double, 2> sigma_{0.25, 0.6};
};

/// CRRA exponents of the terminal-regime utilities u^1, u^2.
class Preferences {
 public:
  Preferences() = default;
  Preferences(double alpha1, double alpha2) : alpha_{alpha1, alpha2} {
    for (double a : alpha_) {
      if (!std::isfinite(a) || !(a > 0.0) || a == 1.0)
        throw InvalidArgument("risk aversion must lie in (0,1) or (1,inf)");
    }
  }

  double alpha(Regime j) const noexcept { return alpha_[idx(j)]; }
  double alpha_min() const noexcept { return std::fmin(alpha_[0], alpha_[1]); }
  double alpha_max() const noexcept { return std::fmax(alpha_[0], alpha_[1]); }

  /// alpha_j / (1 - alpha_j), the exponent turning g into a certainty-equivalent factor.
  double ce_exponent(Regime j) const noexcept { return alpha(j) / (1.0 - alpha(j)); }

  Preferences swapped() const { return {alpha_[1], alpha_[0]}; }

 private:
  std::array<double, 2> alpha_{2.0, 3.0};
};

/// Everything that determines the g-system: market, preferences, chain and horizon.
struct Model {
  MarketParams market;
  Preferences prefs;
  RegimeChain chain{1.0, 1.0};
  double horizon = 10.0;

  Model swapped() const { return {market.swapped(), prefs.swapped(), chain.swapped(), horizon}; }
};

/// Parameter set of the bull/bear numerical study (alpha = 2, beta = 3, l1 = l2 = 1, T = 10).
inline Model reference_model() {
  return {MarketParams({0.05, 0.01}, {0.15, 0.25}, {0.25, 0.6}), Preferences(2.0, 3.0),
          RegimeChain(1.0, 1.0), 10.0};
}

}  // namespace regime_eq
