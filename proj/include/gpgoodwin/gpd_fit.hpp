#pragma once

// Estimation of (B, x_t, alpha) from income samples.
//
// Both branches are fitted by linear regression on the empirical
// complementary CDF: ln(ln F) = A - B x below the threshold and
// ln F = c - alpha ln x above it. The threshold is picked from a grid of
// upper quantiles such that the fitted Gompertz intercept reproduces
// A = ln(ln 100) within a relative bound.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "gpgoodwin/error.hpp"
#include "gpgoodwin/gpd.hpp"
#include "gpgoodwin/regression.hpp"

namespace gpgoodwin::gpd {

struct CcdfPoint {
  double x;
  double ccdf;  // percent of samples >= x
};

/// Sorted, deduplicated empirical complementary CDF on the 100 scale.
class EmpiricalCcdf {
 public:
  const std::vector<CcdfPoint>& points() const noexcept { return points_; }
  std::size_t sample_size() const noexcept { return sample_size_; }

  /// Builds from samples that are already sorted ascending.
  static EmpiricalCcdf from_sorted(std::span<const double> sorted) {
    EmpiricalCcdf out;
    out.sample_size_ = sorted.size();
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (i > 0 && sorted[i] == sorted[i - 1]) continue;
      out.points_.push_back({sorted[i], 100.0 * static_cast<double>(sorted.size() - i) / n});
    }
    return out;
  }

 private:
  std::vector<CcdfPoint> points_;
  std::size_t sample_size_ = 0;
};

namespace detail {

inline std::vector<double> checked_sorted(std::span<const double> samples,
                                          std::size_t min_samples) {
  if (samples.size() < std::max<std::size_t>(min_samples, 1)) {
    throw FitError("too few samples: " + std::to_string(samples.size()) + " < " +
                   std::to_string(min_samples));
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double v : sorted) {
    if (!(std::isfinite(v) && v >= 0.0)) {
      throw ParameterError("income samples must be finite and non-negative");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

// Regression coordinates for both branches, computed once per ccdf.
struct BranchCoordinates {
  std::vector<double> x;
  std::vector<double> log_log_f;  // valid on [0, gompertz_end)
  std::vector<double> log_x;      // valid where x > 0
  std::vector<double> log_f;
  std::size_t gompertz_end = 0;   // first index with F <= 1

  explicit BranchCoordinates(const EmpiricalCcdf& ccdf) {
    const auto& pts = ccdf.points();
    x.reserve(pts.size());
    log_f.reserve(pts.size());
    log_x.reserve(pts.size());
    for (const auto& p : pts) {
      x.push_back(p.x);
      log_f.push_back(std::log(p.ccdf));
      log_x.push_back(p.x > 0.0 ? std::log(p.x) : -HUGE_VAL);
      if (p.ccdf > 1.0) {
        log_log_f.push_back(std::log(std::log(p.ccdf)));
        ++gompertz_end;
      }
    }
  }

  std::size_t lower_index(double value) const {
    return static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), value) - x.begin());
  }
};

}  // namespace detail

inline EmpiricalCcdf empirical_ccdf(std::span<const double> samples,
                                    std::size_t min_samples = 100) {
  const auto sorted = detail::checked_sorted(samples, min_samples);
  return EmpiricalCcdf::from_sorted(sorted);
}

struct GompertzFit {
  double slope = 0.0;      // B
  double intercept = 0.0;  // fitted A
  double slope_se = 0.0;
  double intercept_se = 0.0;
  double ssr = 0.0;
  std::size_t n_points = 0;
  std::size_t excluded_points = 0;  // below x_max but with F <= 1
};

struct ParetoFit {
  double alpha = 0.0;
  double alpha_se = 0.0;
  double log_scale = 0.0;  // intercept of ln F on ln x
  double ssr = 0.0;
  std::size_t n_points = 0;
};

namespace detail {

inline GompertzFit gompertz_on(const BranchCoordinates& c, double x_max, std::size_t min_points) {
  const std::size_t below = c.lower_index(x_max);
  const std::size_t end = std::min(below, c.gompertz_end);
  if (end < min_points) {
    throw FitError("Gompertz branch: " + std::to_string(end) + " usable points below x = " +
                   std::to_string(x_max) + ", need " + std::to_string(min_points));
  }
  const std::span<const double> xs(c.x.data(), end);
  const std::span<const double> ys(c.log_log_f.data(), end);
  const FitResult fit = ols(xs, ys);
  return {-fit.coefficients[1].value, fit.coefficients[0].value, fit.coefficients[1].std_error,
          fit.coefficients[0].std_error, fit.ssr, end, below - end};
}

inline ParetoFit pareto_on(const BranchCoordinates& c, double x_min, std::size_t min_points) {
  if (!(x_min > 0.0)) throw ParameterError("Pareto branch needs x_min > 0");
  const std::size_t begin = c.lower_index(x_min);
  const std::size_t count = c.x.size() - begin;
  if (count < min_points) {
    throw FitError("Pareto branch: " + std::to_string(count) + " points at or above x = " +
                   std::to_string(x_min) + ", need " + std::to_string(min_points));
  }
  const std::span<const double> xs(c.log_x.data() + begin, count);
  const std::span<const double> ys(c.log_f.data() + begin, count);
  const FitResult fit = ols(xs, ys);
  return {-fit.coefficients[1].value, fit.coefficients[1].std_error, fit.coefficients[0].value,
          fit.ssr, count};
}

}  // namespace detail

/// OLS of ln(ln F) on x for points with x < x_max. Points with F <= 1 are
/// left out since the double logarithm is undefined there.
inline GompertzFit fit_gompertz_slope(const EmpiricalCcdf& ccdf, double x_max,
                                      std::size_t min_points = 10) {
  return detail::gompertz_on(detail::BranchCoordinates(ccdf), x_max, min_points);
}

/// OLS of ln F on ln x for points with x >= x_min; the slope is -alpha.
inline ParetoFit fit_pareto_index(const EmpiricalCcdf& ccdf, double x_min,
                                  std::size_t min_points = 10) {
  return detail::pareto_on(detail::BranchCoordinates(ccdf), x_min, min_points);
}

struct FitConfig {
  double quantile_lo = 0.90;
  double quantile_hi = 0.999;
  int n_candidates = 40;
  double a_bound = 0.02;
  std::size_t min_samples = 100;
  std::size_t min_branch_points = 10;
  /// Treat a selection on the first or last grid node as unconverged.
  bool strict_grid_edge = false;
};

struct ThresholdCandidate {
  double quantile = 0.0;
  double threshold = 0.0;
  bool valid = false;  // both branch fits succeeded
  bool accepted = false;
  GompertzFit gompertz;
  ParetoFit pareto;
  double a_discrepancy = HUGE_VAL;
  std::string note;
};

struct GpdFitReport {
  double slope = 0.0;
  double slope_se = 0.0;
  double threshold = 0.0;
  double alpha = 0.0;
  double alpha_se = 0.0;
  double a_hat = 0.0;
  double a_discrepancy = 0.0;
  double pareto_log_scale = 0.0;
  double ssr_gompertz = 0.0;
  double ssr_pareto = 0.0;
  std::size_t n_gompertz = 0;
  std::size_t n_pareto = 0;
  /// |G_fit(x_t) - P_fit(x_t)| / P_fit(x_t) for the two fitted branches.
  double continuity_gap = 0.0;
  std::size_t sample_size = 0;
  std::size_t selected_candidate = 0;
  bool converged = false;
  std::string diagnostic;
  std::vector<ThresholdCandidate> candidates;

  GpdParams params() const { return GpdParams(slope, threshold, alpha); }
};

/// Empirical quantile with linear interpolation between order statistics.
inline double sorted_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ParameterError("quantile of empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

/// Threshold search over upper quantiles, log-spaced in tail mass between
/// 1 - quantile_lo and 1 - quantile_hi. Among candidates whose fitted A lies
/// within a_bound of ln(ln 100), the smallest combined residual sum wins
/// (ties to the smaller threshold). When none qualifies the candidate with the
/// smallest A discrepancy is returned with converged = false.
inline GpdFitReport fit_gpd(std::span<const double> samples, const FitConfig& config = {}) {
  if (!(config.quantile_lo > 0.0 && config.quantile_lo < config.quantile_hi &&
        config.quantile_hi < 1.0)) {
    throw ParameterError("threshold quantile range must satisfy 0 < lo < hi < 1");
  }
  if (config.n_candidates < 2) throw ParameterError("need at least two threshold candidates");
  const auto sorted = detail::checked_sorted(samples, config.min_samples);
  const auto ccdf = EmpiricalCcdf::from_sorted(sorted);
  const detail::BranchCoordinates coords(ccdf);

  GpdFitReport report;
  report.sample_size = sorted.size();
  const double tail_hi = 1.0 - config.quantile_lo;
  const double tail_lo = 1.0 - config.quantile_hi;
  for (int k = 0; k < config.n_candidates; ++k) {
    const double frac = static_cast<double>(k) / (config.n_candidates - 1);
    ThresholdCandidate cand;
    cand.quantile = 1.0 - tail_hi * std::pow(tail_lo / tail_hi, frac);
    cand.threshold = sorted_quantile(sorted, cand.quantile);
    try {
      cand.gompertz = detail::gompertz_on(coords, cand.threshold, config.min_branch_points);
      cand.pareto = detail::pareto_on(coords, cand.threshold, config.min_branch_points);
      cand.valid = true;
      cand.a_discrepancy = std::abs(cand.gompertz.intercept - kGompertzIntercept) /
                           kGompertzIntercept;
      cand.accepted = cand.a_discrepancy <= config.a_bound && cand.gompertz.slope > 0.0 &&
                      cand.pareto.alpha > 0.0;
    } catch (const std::exception& e) {
      cand.note = e.what();
    }
    report.candidates.push_back(std::move(cand));
  }

  const auto& cands = report.candidates;
  std::size_t best = cands.size();
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (!cands[i].accepted) continue;
    if (best == cands.size()) {
      best = i;
      continue;
    }
    const double cur = cands[i].gompertz.ssr + cands[i].pareto.ssr;
    const double ref = cands[best].gompertz.ssr + cands[best].pareto.ssr;
    if (cur < ref || (cur == ref && cands[i].threshold < cands[best].threshold)) best = i;
  }
  report.converged = best != cands.size();
  if (!report.converged) {
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (!cands[i].valid) continue;
      if (best == cands.size() || cands[i].a_discrepancy < cands[best].a_discrepancy) best = i;
    }
    if (best == cands.size()) throw FitError("no threshold candidate admits both branch fits");
    report.diagnostic = "no candidate met the A bound; best-effort candidate reported";
  } else if (best == 0 || best + 1 == cands.size()) {
    report.diagnostic = "selected threshold lies on the edge of the candidate grid";
    if (config.strict_grid_edge) report.converged = false;
  }

  const auto& c = cands[best];
  report.selected_candidate = best;
  report.slope = c.gompertz.slope;
  report.slope_se = c.gompertz.slope_se;
  report.threshold = c.threshold;
  report.alpha = c.pareto.alpha;
  report.alpha_se = c.pareto.alpha_se;
  report.a_hat = c.gompertz.intercept;
  report.a_discrepancy = c.a_discrepancy;
  report.pareto_log_scale = c.pareto.log_scale;
  report.ssr_gompertz = c.gompertz.ssr;
  report.ssr_pareto = c.pareto.ssr;
  report.n_gompertz = c.gompertz.n_points;
  report.n_pareto = c.pareto.n_points;
  const double g_fit = std::exp(std::exp(c.gompertz.intercept - c.gompertz.slope * c.threshold));
  const double p_fit = std::exp(c.pareto.log_scale - c.pareto.alpha * std::log(c.threshold));
  report.continuity_gap = std::abs(g_fit - p_fit) / p_fit;
  return report;
}

}  // namespace gpgoodwin::gpd
