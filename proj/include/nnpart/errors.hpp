#pragma once

#include <stdexcept>
#include <string>

namespace nnpart {

/// Malformed arguments: dimension mismatches, out-of-domain inputs.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid parameter combinations (kernel scales, schedules, configs).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The simplex broke down numerically or exceeded its pivot budget.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A body with no feasible point was handed to a sampler.
class EmptyBodyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cut emptied a knowledge set. With an honest environment this never
/// happens, so it points at the environment or the harness.
class InconsistentFeedback : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A guaranteed mathematical property failed at runtime.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Query generation could not satisfy its constraints.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AdversaryExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nnpart
