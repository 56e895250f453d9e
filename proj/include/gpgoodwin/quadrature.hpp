#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gpgoodwin/error.hpp"

namespace gpgoodwin::quadrature {

inline constexpr double kDefaultAbsTol = 1e-10;

/// Adaptive 15-point Gauss-Kronrod integration of a smooth integrand on a
/// finite interval, terminating on an absolute error target.
///
/// Boost's adaptive driver stops on error <= tol * L1, so the absolute target
/// is translated using an L1 estimate from one non-adaptive Kronrod pass.
template <class F>
double integrate(F f, double a, double b, double abs_tol = kDefaultAbsTol,
                 double* error_estimate = nullptr) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  if (!(abs_tol > 0.0)) throw ParameterError("quadrature tolerance must be positive");
  if (a == b) {
    if (error_estimate) *error_estimate = 0.0;
    return 0.0;
  }
  const double l1_guess = Rule::integrate([&](double x) { return std::abs(f(x)); }, a, b, 0);
  constexpr double kFloor = 4.0 * std::numeric_limits<double>::epsilon();
  const double rel_tol = l1_guess > 0.0 ? std::max(abs_tol / l1_guess, kFloor) : kFloor;
  double err = 0.0;
  const double value = Rule::integrate(f, a, b, 30, rel_tol, &err);
  if (error_estimate) *error_estimate = err;
  return value;
}

}  // namespace gpgoodwin::quadrature
