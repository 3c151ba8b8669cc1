#pragma once

#include <stdexcept>
#include <string>

namespace mvam {

// Base of every error raised by the library. Callers that batch evaluations
// catch this and turn it into an infeasibility flag.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad config documents, out-of-range parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class BoundsError : public Error {
 public:
  BoundsError(std::string component, const std::string& what)
      : Error(what), component_(std::move(component)) {}
  const std::string& component() const noexcept { return component_; }

 private:
  std::string component_;
};

class DegenerateDesignError : public Error {
 public:
  using Error::Error;
};

class SpaceTooLargeError : public Error {
 public:
  using Error::Error;
};

// The prescribed gait cannot be executed by the given geometry.
class InfeasibleGaitError : public Error {
 public:
  InfeasibleGaitError(std::string leg, const std::string& what)
      : Error(what), leg_(std::move(leg)) {}
  const std::string& leg() const noexcept { return leg_; }

 private:
  std::string leg_;
};

class WorkspaceError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

// No admissible contact-force distribution exists for the requested wrench.
class ContactInfeasibleError : public Error {
 public:
  ContactInfeasibleError(std::string constraint, const std::string& what)
      : Error(what), constraint_(std::move(constraint)) {}
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

class InstabilityError : public Error {
 public:
  InstabilityError(double time_s, const std::string& what)
      : Error(what), time_s_(time_s) {}
  double time_s() const noexcept { return time_s_; }

 private:
  double time_s_;
};

class UndefinedTcotError : public Error {
 public:
  using Error::Error;
};

class MarginUndefinedError : public Error {
 public:
  using Error::Error;
};

class SearchFailedError : public Error {
 public:
  using Error::Error;
};

class EmptyFrontError : public Error {
 public:
  using Error::Error;
};

// Re-raised by the trace builders with the grid time at which a step failed.
class TimedError : public Error {
 public:
  TimedError(double time_s, const std::string& what)
      : Error(what), time_s_(time_s) {}
  double time_s() const noexcept { return time_s_; }

 private:
  double time_s_;
};

}  // namespace mvam
