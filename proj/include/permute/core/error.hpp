#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace permute {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A program-model operation named something the checker does not know.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Replaying a recorded schedule surfaced a different operation.
class NondeterminismDetected : public Error {
 public:
  NondeterminismDetected(std::size_t step, const std::string& detail)
      : Error("nondeterminism detected at step " + std::to_string(step) + ": " + detail),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

// Broken internal invariant (engine bug), never a program finding.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace permute
