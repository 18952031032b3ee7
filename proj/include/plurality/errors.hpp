#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plurality {

// Invalid argument or configuration value. Message names the violated constraint.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation invoked on an object in the wrong state (e.g. sampling an empty pool).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An iterated map left its domain. step() is the index of the first bad iterate.
class MapDomainError : public ParameterError {
 public:
  MapDomainError(std::size_t step, double value)
      : ParameterError("iterated map left its domain at step " + std::to_string(step) +
                       " (value " + std::to_string(value) + ")"),
        step_(step),
        value_(value) {}

  std::size_t step() const noexcept { return step_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t step_;
  double value_;
};

// Output could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace plurality
