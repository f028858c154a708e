#pragma once

// Two-state continuous-time Markov chain: regime 1 (bull) and regime 2 (bear).

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "regime_eq/errors.hpp"
#include "regime_eq/random.hpp"

namespace regime_eq {

enum class Regime : std::uint8_t { bull = 1, bear = 2 };

inline constexpr std::array<Regime, 2> kRegimes{Regime::bull, Regime::bear};

/// 0-based array index of a regime.
constexpr std::size_t idx(Regime r) noexcept { return r == Regime::bull ? 0 : 1; }

constexpr Regime other(Regime r) noexcept {
  return r == Regime::bull ? Regime::bear : Regime::bull;
}

constexpr int label(Regime r) noexcept { return static_cast<int>(r); }

inline Regime regime_from_label(int value) {
  if (value == 1) return Regime::bull;
  if (value == 2) return Regime::bear;
  throw InvalidArgument("regime label must be 1 or 2, got " + std::to_string(value));
}

/// Generator Q = [[-l1, l1], [l2, -l2]]; l_i is the intensity of leaving regime i.
class RegimeChain {
 public:
  RegimeChain() = default;
  RegimeChain(double lambda1, double lambda2) : lambda_{lambda1, lambda2} {
    for (double l : lambda_) {
      if (!std::isfinite(l) || l < 0.0)
        throw InvalidArgument("switching rates must be finite and non-negative");
    }
  }

  double lambda1() const noexcept { return lambda_[0]; }
  double lambda2() const noexcept { return lambda_[1]; }
  double leave_rate(Regime r) const noexcept { return lambda_[idx(r)]; }
  double total_rate() const noexcept { return lambda_[0] + lambda_[1]; }
  bool frozen() const noexcept { return lambda_[0] == 0.0 && lambda_[1] == 0.0; }

  /// Generator entry q_{ij}.
  double generator(Regime i, Regime j) const noexcept {
    return i == j ? -leave_rate(i) : leave_rate(i);
  }

  /// The chain with labels 1 and 2 exchanged.
  RegimeChain swapped() const { return {lambda_[1], lambda_[0]}; }

 private:
  std::array<double, 2> lambda_{0.0, 0.0};
};

/// P(eps_T = j | eps_t = i), closed form. Any t <= T is accepted.
inline double transition_probability(double t, Regime i, Regime j, const RegimeChain& chain,
                                     double horizon) {
  if (!(t <= horizon)) throw InvalidArgument("transition_probability requires t <= T");
  if (chain.frozen()) return i == j ? 1.0 : 0.0;
  const double total = chain.total_rate();
  const double decay = std::exp(-total * (horizon - t));
  // Probability of ending in j regardless of the start, in the long run.
  const double limit_j = chain.leave_rate(other(j)) / total;
  if (i == j) return limit_j + chain.leave_rate(i) / total * decay;
  return limit_j * (1.0 - decay);
}

/// Row (p(t,i,1), p(t,i,2)); the row sums to one exactly up to rounding.
inline std::array<double, 2> transition_row(double t, Regime i, const RegimeChain& chain,
                                            double horizon) {
  return {transition_probability(t, i, Regime::bull, chain, horizon),
          transition_probability(t, i, Regime::bear, chain, horizon)};
}

/// Solution of pi Q = 0 with pi_1 + pi_2 = 1.
inline std::pair<double, double> stationary_distribution(const RegimeChain& chain) {
  if (chain.frozen())
    throw NoStationaryDistribution("no unique stationary distribution when l1 = l2 = 0");
  const double total = chain.total_rate();
  return {chain.lambda2() / total, chain.lambda1() / total};
}

/// One realisation of the chain on [start_time, end_time].
struct RegimePath {
  double start_time = 0.0;
  double end_time = 0.0;
  Regime initial_state = Regime::bull;
  std::vector<double> jump_times;  // strictly increasing, inside (start_time, end_time]
  std::vector<Regime> states;      // regime entered at each jump

  Regime terminal_state() const noexcept {
    return states.empty() ? initial_state : states.back();
  }

  /// Right-continuous state at time t.
  Regime state_at(double t) const noexcept {
    Regime s = initial_state;
    for (std::size_t k = 0; k < jump_times.size() && jump_times[k] <= t; ++k) s = states[k];
    return s;
  }

  /// Time spent in each regime over the whole path.
  std::array<double, 2> occupation_times() const noexcept {
    std::array<double, 2> occ{0.0, 0.0};
    double left = start_time;
    Regime s = initial_state;
    for (std::size_t k = 0; k < jump_times.size(); ++k) {
      occ[idx(s)] += jump_times[k] - left;
      left = jump_times[k];
      s = states[k];
    }
    occ[idx(s)] += end_time - left;
    return occ;
  }
};

/// Exact path sampling from exponential holding times, drawn from the given stream.
inline RegimePath sample_regime_path(Regime initial, double start_time, double end_time,
                                     const RegimeChain& chain, RandomStream& stream) {
  if (!(start_time < end_time)) throw InvalidArgument("sample_regime_path requires t0 < T");
  RegimePath path{start_time, end_time, initial, {}, {}};
  double t = start_time;
  Regime s = initial;
  while (true) {
    t += stream.exponential(chain.leave_rate(s));
    if (!(t <= end_time)) break;
    s = other(s);
    path.jump_times.push_back(t);
    path.states.push_back(s);
  }
  return path;
}

/// Seeded convenience overload; path `path_index` of the regime stream for `seed`.
inline RegimePath sample_regime_path(Regime initial, double start_time, double end_time,
                                     const RegimeChain& chain, std::uint64_t seed,
                                     std::uint64_t path_index = 0) {
  RandomStream stream(seed, path_index, StreamId::regime);
  return sample_regime_path(initial, start_time, end_time, chain, stream);
}

}  // namespace regime_eq
