#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gpgoodwin {

/// Parameters or arguments that violate a documented precondition.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A model state that lies outside the domain where the equations are defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// GPD parameters for which the labor-share relation has no admissible
/// solution. Carries the offending bracketed ratio.
class InfeasibleError : public std::domain_error {
 public:
  InfeasibleError(const std::string& what, double ratio)
      : std::domain_error(what), ratio_(ratio) {}
  double ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

/// A regression that cannot be carried out (too few points, singular design).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable input data.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A yearly series with holes that must be interpolated first.
class GapError : public InputError {
 public:
  GapError(const std::string& what, std::vector<int> missing_years)
      : InputError(what), missing_years_(std::move(missing_years)) {}
  const std::vector<int>& missing_years() const noexcept { return missing_years_; }

 private:
  std::vector<int> missing_years_;
};

}  // namespace gpgoodwin
