#pragma once

#include <stdexcept>
#include <string>

namespace pbdpowers {

// Caller handed in something outside an operation's domain. The CLI maps
// these to exit code 2.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidPower : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A learner ran but could not produce an answer. The CLI maps these to
// exit code 3.
class LearnerFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExhausted : public LearnerFailure {
 public:
  using LearnerFailure::LearnerFailure;
};

class DegenerateEstimate : public LearnerFailure {
 public:
  using LearnerFailure::LearnerFailure;
};

class GridExhausted : public LearnerFailure {
 public:
  using LearnerFailure::LearnerFailure;
};

class BetaNotFound : public LearnerFailure {
 public:
  using LearnerFailure::LearnerFailure;
};

class NonConverged : public LearnerFailure {
 public:
  using LearnerFailure::LearnerFailure;
};

class GuardViolated : public LearnerFailure {
 public:
  using LearnerFailure::LearnerFailure;
};

class NoFixedPoint : public LearnerFailure {
 public:
  using LearnerFailure::LearnerFailure;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

}  // namespace detail
}  // namespace pbdpowers
