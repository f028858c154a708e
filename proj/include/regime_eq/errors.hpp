#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace regime_eq {

/// Bad parameters or violated preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A function was evaluated outside its mathematical domain (g <= 0, x <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A time or value lies outside the range an object covers.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// The g-system integration failed (positivity lost, step underflow).
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double time)
      : std::runtime_error(what + " (t = " + std::to_string(time) + ")"), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// A simulated wealth became non-finite.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Conditioning on a terminal regime that has zero probability.
class UnreachableRegime : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Both switching rates are zero, so every distribution is stationary.
class NoStationaryDistribution : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace regime_eq
