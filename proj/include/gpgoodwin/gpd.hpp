#pragma once

// Gompertz-Pareto income distribution.
//
// Incomes are normalized (currency free). Probabilities and shares use the
// [0, 100] scale, so the complementary CDF starts at 100 and the density
// integrates to 100. Below the threshold x_t the complementary CDF is the
// Gompertz curve exp(exp(A - B x)); from x_t on it is a Pareto power law
// x^-alpha, scaled so both branches meet at x_t.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gpgoodwin/error.hpp"
#include "gpgoodwin/percent.hpp"
#include "gpgoodwin/quadrature.hpp"

namespace gpgoodwin::gpd {

/// A = ln(ln 100), fixed by the boundary condition ccdf(0) = 100.
inline constexpr double kGompertzIntercept = 1.5271796258079011;

/// (B, x_t, alpha) of a Gompertz-Pareto distribution. Always valid once built.
class GpdParams {
 public:
  GpdParams(double slope, double threshold, double pareto_index)
      : slope_(slope), threshold_(threshold), pareto_index_(pareto_index) {
    if (!(std::isfinite(slope) && slope > 0.0)) {
      throw ParameterError("Gompertz slope B must be positive and finite");
    }
    if (!(std::isfinite(threshold) && threshold > 0.0)) {
      throw ParameterError("Pareto threshold x_t must be positive and finite");
    }
    if (!(std::isfinite(pareto_index) && pareto_index > 0.0)) {
      throw ParameterError("Pareto index alpha must be positive and finite");
    }
  }

  double slope() const noexcept { return slope_; }
  double threshold() const noexcept { return threshold_; }
  double pareto_index() const noexcept { return pareto_index_; }
  static constexpr double intercept() noexcept { return kGompertzIntercept; }

  /// Mean-dependent quantities (mean, Lorenz curve, Gini, shares) need alpha > 1.
  bool has_finite_mean() const noexcept { return pareto_index_ > 1.0; }

  /// ccdf(x_t) = exp(exp(A - B x_t)); also the Pareto normalization factor.
  double threshold_ccdf() const noexcept {
    return std::exp(std::exp(kGompertzIntercept - slope_ * threshold_));
  }

 private:
  double slope_;
  double threshold_;
  double pareto_index_;
};

struct LorenzPoint {
  Percent x_axis;  // cumulative population share
  Percent y_axis;  // cumulative income share
};

struct AlphaInversion {
  double alpha;
  /// Bracketed ratio u x_t G(x_t) / ((100 - u) I(x_t)); admissible in (0, 1).
  double ratio;
  /// d(alpha)/du at the solution. Large values mean alpha is poorly
  /// determined by u.
  double dalpha_du;
};

namespace detail {

inline void require_nonnegative(double x) {
  if (!(x >= 0.0)) throw ParameterError("income must be non-negative");
}

inline void require_finite_mean(const GpdParams& p) {
  if (!p.has_finite_mean()) {
    throw ParameterError("mean income diverges: requires alpha > 1, got alpha = " +
                         std::to_string(p.pareto_index()));
  }
}

inline double gompertz_density(double slope, double x) {
  const double z = std::exp(kGompertzIntercept - slope * x);
  return slope * z * std::exp(z);
}

inline double partial_moment(double slope, double x, double abs_tol) {
  return quadrature::integrate([slope](double w) { return w * gompertz_density(slope, w); },
                               0.0, x, abs_tol);
}

// Pareto tail term alpha x_t G(x_t) / (alpha - 1); 100 <x> = I(x_t) + this.
inline double tail_moment(const GpdParams& p) {
  const double a = p.pareto_index();
  return a * p.threshold() * p.threshold_ccdf() / (a - 1.0);
}

// First-moment distribution F1(x) on the 100 scale, given the mean.
inline double first_moment_share(const GpdParams& p, double x, double mean) {
  if (x < p.threshold()) return partial_moment(p.slope(), x, quadrature::kDefaultAbsTol) / mean;
  const double a = p.pareto_index();
  const double xt = p.threshold();
  return 100.0 - a * xt * p.threshold_ccdf() * std::pow(xt / x, a - 1.0) / ((a - 1.0) * mean);
}

}  // namespace detail

/// Complementary CDF F(x): share of the population with income >= x.
inline Percent ccdf(const GpdParams& p, double x) {
  detail::require_nonnegative(x);
  if (x < p.threshold()) {
    return Percent(std::exp(std::exp(kGompertzIntercept - p.slope() * x)));
  }
  return Percent(p.threshold_ccdf() * std::pow(p.threshold() / x, p.pareto_index()));
}

/// Cumulative distribution, 100 - ccdf.
inline Percent cdf(const GpdParams& p, double x) { return ccdf(p, x).complement(); }

/// Density in percent per unit of normalized income.
inline double pdf(const GpdParams& p, double x) {
  detail::require_nonnegative(x);
  if (x < p.threshold()) return detail::gompertz_density(p.slope(), x);
  const double a = p.pareto_index();
  return a * p.threshold_ccdf() * std::pow(p.threshold() / x, a) / x;
}

/// Income x with ccdf(x) = q. Inverse of the complementary CDF; q = 100 maps to 0.
inline double ccdf_inverse(const GpdParams& p, Percent q) {
  const double level = q.value();
  if (!(level > 0.0)) throw ParameterError("ccdf_inverse requires q > 0");
  const double at_threshold = p.threshold_ccdf();
  if (level > at_threshold) {
    const double x = (kGompertzIntercept - std::log(std::log(level))) / p.slope();
    return x > 0.0 ? x : 0.0;
  }
  return p.threshold() * std::pow(at_threshold / level, 1.0 / p.pareto_index());
}

/// I(x) = integral of w g(w) over [0, x] for x in the Gompertz region.
inline double gompertz_partial_moment(const GpdParams& p, double x,
                                      double abs_tol = quadrature::kDefaultAbsTol) {
  if (!(x >= 0.0 && x <= p.threshold())) {
    throw ParameterError("partial moment is defined on [0, x_t] only");
  }
  return detail::partial_moment(p.slope(), x, abs_tol);
}

/// Average normalized income <x>. Requires alpha > 1.
inline double mean_income(const GpdParams& p) {
  detail::require_finite_mean(p);
  return (gompertz_partial_moment(p, p.threshold()) + detail::tail_moment(p)) / 100.0;
}

inline LorenzPoint lorenz(const GpdParams& p, double x) {
  detail::require_nonnegative(x);
  detail::require_finite_mean(p);
  const double mean = mean_income(p);
  return {cdf(p, x), Percent(detail::first_moment_share(p, x, mean))};
}

/// Gini coefficient on [0, 1] from the closed GPD expression. The Gompertz
/// part still needs the integral of I(x) g(x) / B over [0, x_t].
inline double gini(const GpdParams& p) {
  detail::require_finite_mean(p);
  const double a = p.pareto_index();
  const double b = p.slope();
  const double xt = p.threshold();
  const double mean = mean_income(p);
  const double g_t = p.threshold_ccdf();
  const double gompertz_part = quadrature::integrate(
      [&](double x) {
        return detail::partial_moment(b, x, quadrature::kDefaultAbsTol) *
               detail::gompertz_density(b, x) / b;
      },
      0.0, xt);
  const double bracket = b / mean * gompertz_part + 100.0 * g_t +
                         a * a * xt * g_t * g_t / (mean * (a - 1.0) * (1.0 - 2.0 * a));
  return 1.0 - 2e-4 * bracket;
}

/// Gompertzian (workers') share of total income, u = F1(x_t).
/// Throws InfeasibleError when the share falls outside (0, 100).
inline Percent labor_share(const GpdParams& p) {
  detail::require_finite_mean(p);
  const double mean = mean_income(p);
  const double u = detail::first_moment_share(p, p.threshold(), mean);
  if (!(u > 0.0 && u < 100.0)) {
    const double moment = gompertz_partial_moment(p, p.threshold());
    throw InfeasibleError("labor share outside (0, 100): " + std::to_string(u),
                          u * p.threshold() * p.threshold_ccdf() / ((100.0 - u) * moment));
  }
  return Percent(u);
}

/// Capitalists' share U = 100 - u.
inline Percent capital_share(Percent labor) { return labor.complement(); }

/// Solves the labor-share relation for alpha given u, B and x_t. The relation
/// is explicit in 1/alpha.
inline AlphaInversion invert_alpha(Percent labor, double slope, double threshold) {
  if (!(slope > 0.0 && threshold > 0.0)) {
    throw ParameterError("invert_alpha requires B > 0 and x_t > 0");
  }
  const double u = labor.value();
  const double g_t = std::exp(std::exp(kGompertzIntercept - slope * threshold));
  const double moment = detail::partial_moment(slope, threshold, quadrature::kDefaultAbsTol);
  if (!(u < 100.0)) throw InfeasibleError("labor share must be below 100", HUGE_VAL);
  const double ratio = u * threshold * g_t / ((100.0 - u) * moment);
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw InfeasibleError("infeasible GPD parameters: bracketed ratio " + std::to_string(ratio) +
                              " outside (0, 1)",
                          ratio);
  }
  const double alpha = 1.0 / (1.0 - ratio);
  return {alpha, ratio, alpha * alpha * ratio * 100.0 / (u * (100.0 - u))};
}

/// Income share of those at or below x_d, V = I(x_d) / <x>, with x_d in the
/// Gompertz region.
inline Percent unemployment_share(const GpdParams& p, double x_d) {
  detail::require_nonnegative(x_d);
  if (!(x_d < p.threshold())) {
    throw ParameterError("unemployment threshold x_d must lie below x_t");
  }
  return Percent(gompertz_partial_moment(p, x_d) / mean_income(p));
}

// Exponential approximation of the upper Gompertz region, meant for
// A < B x and x < x_t. The domain is documented, not enforced.

inline Percent exp_approx_ccdf(double slope, double x) {
  detail::require_nonnegative(x);
  return Percent(99.0 + std::exp(-slope * x));
}

inline Percent exp_approx_cdf(double slope, double x) {
  detail::require_nonnegative(x);
  return Percent(1.0 - std::exp(-slope * x));
}

inline double exp_approx_pdf(double slope, double x) {
  detail::require_nonnegative(x);
  return slope * std::exp(-slope * x);
}

/// n i.i.d. draws by inversion of the complementary CDF. Deterministic for a
/// given seed on every platform (mt19937_64 with a fixed bits-to-double map).
inline std::vector<double> sample(const GpdParams& p, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ParameterError("sample size must be at least 1");
  std::mt19937_64 rng(seed);
  const double at_threshold = p.threshold_ccdf();
  const double inv_alpha = 1.0 / p.pareto_index();
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = 100.0 * ((static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53);
    if (q > at_threshold) {
      const double x = (kGompertzIntercept - std::log(std::log(q))) / p.slope();
      out.push_back(x > 0.0 ? x : 0.0);
    } else {
      out.push_back(p.threshold() * std::pow(at_threshold / q, inv_alpha));
    }
  }
  return out;
}

}  // namespace gpgoodwin::gpd
