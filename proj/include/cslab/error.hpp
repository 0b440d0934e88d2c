#pragma once

#include <stdexcept>
#include <string>

namespace cslab {

// Base of every error raised by the library. The CLI maps subclasses onto
// exit statuses.
class LabError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arguments outside an operation's domain (bad sizes, inconsistent data).
class DomainError : public LabError {
 public:
  using LabError::LabError;
};

// A finite prefix is too short to decide the question asked of it.
class InsufficientTruncation : public LabError {
 public:
  using LabError::LabError;
};

// depth(B, s): the domain of s is not of the form {0, ..., mu_m(B) - 1}.
class NotACut : public LabError {
 public:
  using LabError::LabError;
};

// An exhaustive search would exceed the configured enumeration cap.
class BudgetError : public LabError {
 public:
  using LabError::LabError;
};

// No witness exists at the requested size parameter.
class ThresholdError : public LabError {
 public:
  using LabError::LabError;
};

}  // namespace cslab
