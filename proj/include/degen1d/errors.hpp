#pragma once

#include <stdexcept>
#include <string>

namespace degen1d {

struct OutOfDomain : std::domain_error {
  using std::domain_error::domain_error;
};

struct NonIntegrable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingDerivative : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotCompactlyContained : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct OrderingViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotInDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScheduleUnreachable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HNotAdmissible : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct HypothesisViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceNotEstablished : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BadParameters : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotPositive : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace degen1d
