#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace greenbound {

/// Invalid user-facing configuration (bad grid size, non-positive energy, ...).
/// The CLI maps these to exit code 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Programming error: sampled data does not match the grid it is used with.
class ShapeMismatch : public std::logic_error {
 public:
  ShapeMismatch(std::size_t expected, std::size_t actual)
      : std::logic_error("sample count " + std::to_string(actual) +
                         " does not match grid size " + std::to_string(expected)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

/// Base of every numeric failure. The CLI maps these to exit code 2.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DenominatorVanished : public NumericError {
 public:
  explicit DenominatorVanished(double value)
      : NumericError("normalization integral at x_ref vanished (" + std::to_string(value) + ")") {}
};

class NonFinite : public NumericError {
 public:
  NonFinite(const std::string& what, std::size_t index)
      : NumericError(what + ": non-finite sample at index " + std::to_string(index)), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class NonPositiveTail : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegenerateSamples : public NumericError {
 public:
  using NumericError::NumericError;
};

class IllConditioned : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A fitted model predicts a non-positive coupling inside its own fit range.
class InvalidModel : public NumericError {
 public:
  using NumericError::NumericError;
};

class OutOfRange : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonMonotone : public NumericError {
 public:
  using NumericError::NumericError;
};

class NoBoundState : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace greenbound
