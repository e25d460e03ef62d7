#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lqrpg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a structural requirement (shape, definiteness, rank).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A gain (or closed-loop matrix) is not Hurwitz where one is required.
class StabilityError : public Error {
 public:
  StabilityError(const std::string& what, double spectral_abscissa)
      : Error(what + " (spectral abscissa " + std::to_string(spectral_abscissa) + ")"),
        spectral_abscissa_(spectral_abscissa) {}
  double spectral_abscissa() const { return spectral_abscissa_; }

 private:
  double spectral_abscissa_;
};

/// An iterative kernel failed to converge.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  /// Residual (or other progress measure) per iteration.
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

/// Back-substitution hit a nearly singular block.
class IllConditionedError : public Error {
 public:
  IllConditionedError(const std::string& what, double condition_estimate)
      : Error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

class UnsupportedForOutputFeedback : public Error {
 public:
  using Error::Error;
};

class DegenerateDirection : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lqrpg
