#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gpgoodwin/error.hpp"

namespace gpgoodwin {

struct Coefficient {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
};

/// Estimated coefficients with 1-sigma errors and residual diagnostics.
struct FitResult {
  std::vector<Coefficient> coefficients;
  double ssr = 0.0;
  int dof = 0;
  double r_squared = 0.0;
  std::size_t n_points = 0;

  const Coefficient& operator[](std::string_view name) const {
    for (const auto& c : coefficients) {
      if (c.name == name) return c;
    }
    throw ParameterError("no coefficient named " + std::string(name));
  }
  double value(std::string_view name) const { return (*this)[name].value; }
  double std_error(std::string_view name) const { return (*this)[name].std_error; }
};

namespace detail {

inline double total_sum_of_squares(std::span<const double> y) {
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double tss = 0.0;
  for (double v : y) tss += (v - mean) * (v - mean);
  return tss;
}

}  // namespace detail

/// Ordinary least squares y = intercept + slope * x with the usual
/// homoscedastic covariance. Centered sums keep it stable for large n.
inline FitResult ols(std::span<const double> x, std::span<const double> y,
                     std::string intercept_name = "intercept",
                     std::string slope_name = "slope") {
  if (x.size() != y.size()) throw ParameterError("ols: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw FitError("ols needs at least 3 points, got " + std::to_string(n));
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw FitError("ols: regressor has zero variance");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - intercept - slope * x[i];
    ssr += r * r;
  }
  const int dof = static_cast<int>(n) - 2;
  const double s2 = ssr / dof;
  FitResult out;
  out.coefficients = {
      {std::move(intercept_name), intercept,
       std::sqrt(s2 * (1.0 / static_cast<double>(n) + mx * mx / sxx))},
      {std::move(slope_name), slope, std::sqrt(s2 / sxx)},
  };
  out.ssr = ssr;
  out.dof = dof;
  out.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  out.n_points = n;
  return out;
}

struct PowerLawSettings {
  double delta_min = 0.01;
  double delta_max = 5.0;
  double delta_step = 0.01;
  /// Holds the exponent at this value and fits only the linear pair.
  std::optional<double> fixed_delta;
  int max_iterations = 200;
};

struct PowerLawFit {
  FitResult fit;  // coefficients "A", "B", "delta"
  double grid_delta = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// y = A + B x^delta for x > 0.
///
/// A grid over delta with closed-form OLS for (A, B) at each node picks the
/// start (ties go to the smaller delta); Gauss-Newton with step halving then
/// refines all three. Errors come from s^2 (J^T J)^-1 at the optimum.
inline PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y,
                                 const PowerLawSettings& settings = {}) {
  if (x.size() != y.size()) throw ParameterError("power law: x and y differ in length");
  const std::size_t n = x.size();
  const bool free_delta = !settings.fixed_delta.has_value();
  const int n_params = free_delta ? 3 : 2;
  if (n <= static_cast<std::size_t>(n_params)) {
    throw FitError("power law fit needs more points than parameters");
  }
  std::vector<double> log_x(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0)) throw FitError("power law regressor must be positive");
    log_x[i] = std::log(x[i]);
  }

  auto ssr_at = [&](double a, double b, double d) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - a - b * std::exp(d * log_x[i]);
      s += r * r;
    }
    return s;
  };

  std::vector<double> powered(n);
  auto linear_at = [&](double d) {
    for (std::size_t i = 0; i < n; ++i) powered[i] = std::exp(d * log_x[i]);
    return ols(powered, y);
  };

  double delta = 0.0;
  if (free_delta) {
    if (!(settings.delta_step > 0.0 && settings.delta_max >= settings.delta_min)) {
      throw ParameterError("power law: bad delta grid");
    }
    const auto steps = static_cast<long>(
        std::floor((settings.delta_max - settings.delta_min) / settings.delta_step + 1e-9));
    double best = HUGE_VAL;
    for (long k = 0; k <= steps; ++k) {
      const double d = settings.delta_min + static_cast<double>(k) * settings.delta_step;
      const FitResult lin = linear_at(d);
      if (lin.ssr < best) {
        best = lin.ssr;
        delta = d;
      }
    }
  } else {
    delta = *settings.fixed_delta;
  }
  const FitResult start = linear_at(delta);

  Eigen::Vector3d theta(start.coefficients[0].value, start.coefficients[1].value, delta);
  double ssr = ssr_at(theta[0], theta[1], theta[2]);
  PowerLawFit out;
  out.grid_delta = delta;

  auto jacobian = [&](const Eigen::Vector3d& t, Eigen::MatrixXd& jac, Eigen::VectorXd& res) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = std::exp(t[2] * log_x[i]);
      const auto row = static_cast<Eigen::Index>(i);
      res[row] = y[i] - t[0] - t[1] * p;
      jac(row, 0) = 1.0;
      jac(row, 1) = p;
      if (free_delta) jac(row, 2) = t[1] * p * log_x[i];
    }
  };

  const auto rows = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd jac(rows, n_params);
  Eigen::VectorXd res(rows);
  for (int it = 0; it < settings.max_iterations; ++it) {
    jacobian(theta, jac, res);
    const Eigen::MatrixXd normal = jac.transpose() * jac;
    const Eigen::VectorXd step = normal.ldlt().solve(jac.transpose() * res);
    double scale = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving, scale *= 0.5) {
      Eigen::Vector3d trial = theta;
      trial.head(n_params) += scale * step;
      if (free_delta && !(trial[2] > 0.0)) continue;
      const double trial_ssr = ssr_at(trial[0], trial[1], trial[2]);
      if (trial_ssr <= ssr) {
        const double gain = ssr - trial_ssr;
        theta = trial;
        ssr = trial_ssr;
        improved = gain > 1e-15 * (ssr + 1e-300);
        break;
      }
    }
    out.iterations = it + 1;
    if (!improved) {
      out.converged = true;
      break;
    }
  }

  jacobian(theta, jac, res);
  const int dof = static_cast<int>(n) - n_params;
  const double s2 = ssr / dof;
  const Eigen::MatrixXd cov = s2 * (jac.transpose() * jac).inverse();
  out.fit.coefficients = {
      {"A", theta[0], std::sqrt(cov(0, 0))},
      {"B", theta[1], std::sqrt(cov(1, 1))},
      {"delta", theta[2], free_delta ? std::sqrt(cov(2, 2)) : 0.0},
  };
  out.fit.ssr = ssr;
  out.fit.dof = dof;
  const double tss = detail::total_sum_of_squares(y);
  out.fit.r_squared = tss > 0.0 ? 1.0 - ssr / tss : 1.0;
  out.fit.n_points = n;
  return out;
}

}  // namespace gpgoodwin
