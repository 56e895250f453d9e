#pragma once

// Yearly (u, v) series to growth rates, and the regressions that test the
// Goodwin and DHMP models against them.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gpgoodwin/data_io.hpp"
#include "gpgoodwin/dynamics.hpp"
#include "gpgoodwin/error.hpp"
#include "gpgoodwin/regression.hpp"

namespace gpgoodwin::estimation {

/// kForward is (f(t+1) - f(t-1)) / 2. kReversed is its negative,
/// (f(t-1) - f(t+1)) / 2, the sign convention of the printed derivative
/// columns of the bundled table.
enum class DifferenceDirection { kForward, kReversed };

inline std::string_view to_string(DifferenceDirection d) {
  return d == DifferenceDirection::kForward ? "forward" : "reversed";
}

namespace detail {

inline void require_consecutive(std::span<const int> years) {
  std::vector<int> missing;
  for (std::size_t i = 1; i < years.size(); ++i) {
    if (years[i] <= years[i - 1]) throw InputError("years must be strictly increasing");
    for (int y = years[i - 1] + 1; y < years[i]; ++y) missing.push_back(y);
  }
  if (!missing.empty()) throw GapError("yearly series has missing years", missing);
}

}  // namespace detail

/// Central differences at unit spacing. Endpoints get no derivative. Years
/// must be consecutive and every value present; otherwise GapError lists the
/// years to interpolate first.
inline std::vector<std::optional<double>> central_difference(
    std::span<const int> years, std::span<const std::optional<double>> values,
    DifferenceDirection direction = DifferenceDirection::kForward) {
  if (years.size() != values.size()) throw ParameterError("years and values differ in length");
  if (years.size() < 3) throw InputError("central differences need at least 3 years");
  detail::require_consecutive(years);
  std::vector<int> missing;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i] || !std::isfinite(*values[i])) missing.push_back(years[i]);
  }
  if (!missing.empty()) throw GapError("yearly series has missing values", missing);
  const double sign = direction == DifferenceDirection::kForward ? 1.0 : -1.0;
  std::vector<std::optional<double>> out(values.size());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    out[i] = sign * (*values[i + 1] - *values[i - 1]) / 2.0;
  }
  return out;
}

inline std::vector<std::optional<double>> central_difference(
    std::span<const int> years, std::span<const double> values,
    DifferenceDirection direction = DifferenceDirection::kForward) {
  std::vector<std::optional<double>> wrapped(values.begin(), values.end());
  return central_difference(years, wrapped, direction);
}

struct RateEntry {
  int year = 0;
  double u = 0.0;
  double v = 0.0;
  std::optional<double> du;
  std::optional<double> dv;
  bool interpolated = false;

  std::optional<double> u_rate() const {
    return du ? std::optional<double>(*du / u) : std::nullopt;
  }
  std::optional<double> v_rate() const {
    return dv ? std::optional<double>(*dv / v) : std::nullopt;
  }
};

struct RateSeries {
  std::vector<RateEntry> entries;
  DifferenceDirection direction = DifferenceDirection::kForward;
};

inline RateSeries rate_series(std::span<const data::YearRecord> records,
                              DifferenceDirection direction = DifferenceDirection::kForward) {
  std::vector<int> years;
  std::vector<std::optional<double>> u;
  std::vector<std::optional<double>> v;
  for (const auto& r : records) {
    years.push_back(r.year);
    u.push_back(r.labor_share);
    v.push_back(r.employment);
  }
  const auto du = central_difference(years, u, direction);
  const auto dv = central_difference(years, v, direction);
  RateSeries out;
  out.direction = direction;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!(*u[i] > 0.0 && *v[i] > 0.0)) throw InputError("u and v must be positive");
    out.entries.push_back({years[i], *u[i], *v[i], du[i], dv[i], records[i].interpolated});
  }
  return out;
}

struct RegressionOptions {
  bool exclude_interpolated = false;
  std::size_t min_points = 5;
};

namespace detail {

inline std::vector<const RateEntry*> usable(const RateSeries& rates, const RegressionOptions& opt) {
  std::vector<const RateEntry*> out;
  for (const auto& e : rates.entries) {
    if (!e.du || !e.dv) continue;
    if (opt.exclude_interpolated && e.interpolated) continue;
    out.push_back(&e);
  }
  if (out.size() < std::max<std::size_t>(opt.min_points, 3)) {
    throw FitError("regression needs at least " + std::to_string(opt.min_points) +
                   " usable years, got " + std::to_string(out.size()));
  }
  return out;
}

}  // namespace detail

struct GoodwinFit {
  FitResult u_fit;  // u'/u = A1 + B1 v
  FitResult v_fit;  // v'/v = A2 + B2 u
  dynamics::GoodwinParams params{0.0, 0.0, 0.0, 0.0};
  dynamics::ConditionReport conditions;
  /// (a+b)c = 100 - a2/b2, undefined when B2 = 0.
  std::optional<double> ab_c;
  std::vector<int> years;
};

/// Two straight-line fits; a1 = -A1, b1 = B1, a2 = A2, b2 = -B2.
inline GoodwinFit fit_goodwin_lines(const RateSeries& rates, const RegressionOptions& opt = {}) {
  const auto pts = detail::usable(rates, opt);
  std::vector<double> u, v, ur, vr;
  GoodwinFit out;
  for (const auto* e : pts) {
    u.push_back(e->u);
    v.push_back(e->v);
    ur.push_back(*e->u_rate());
    vr.push_back(*e->v_rate());
    out.years.push_back(e->year);
  }
  out.u_fit = ols(v, ur, "A1", "B1");
  out.v_fit = ols(u, vr, "A2", "B2");
  out.params = dynamics::GoodwinParams(-out.u_fit.value("A1"), out.v_fit.value("A2"),
                                       out.u_fit.value("B1"), -out.v_fit.value("B2"));
  out.conditions = dynamics::check_goodwin_conditions(out.params);
  if (out.params.b2() != 0.0) out.ab_c = 100.0 - out.params.a2() / out.params.b2();
  return out;
}

struct DhmpFit {
  PowerLawFit u_fit;  // u'/u = A1 + B1 V^delta, V = 100 - v
  FitResult v_fit;    // v'/v = A2 + B2 ln(u_bar - u)
  double u_bar = 95.0;
  dynamics::DhmpParams params{0.0, 0.0, 0.0, 0.0, 1.0, 95.0};
  dynamics::DhmpErrors errors;
  dynamics::ConditionReport conditions;
  std::vector<int> years;
};

/// Power-law fit for the labor-share rate and a log-linear fit for the
/// employment rate. The DHMP constants are a1 = -A1, b1 = B1, a2 = -A2,
/// b2 = lambda = B2.
inline DhmpFit fit_dhmp(const RateSeries& rates, double u_bar = 95.0,
                        const RegressionOptions& opt = {},
                        const PowerLawSettings& power = {}) {
  if (!(u_bar > 0.0 && u_bar < 100.0)) throw ParameterError("u_bar must lie in (0, 100)");
  const auto pts = detail::usable(rates, opt);
  std::vector<double> unemployment, log_gap, ur, vr;
  DhmpFit out;
  out.u_bar = u_bar;
  double u_max = 0.0;
  for (const auto* e : pts) {
    u_max = std::max(u_max, e->u);
    unemployment.push_back(100.0 - e->v);
    log_gap.push_back(u_bar > e->u ? std::log(u_bar - e->u) : NAN);
    ur.push_back(*e->u_rate());
    vr.push_back(*e->v_rate());
    out.years.push_back(e->year);
  }
  if (!(u_bar > u_max)) {
    throw ParameterError("u_bar = " + std::to_string(u_bar) + " must exceed the largest u (" +
                         std::to_string(u_max) + ")");
  }
  out.u_fit = fit_power_law(unemployment, ur, power);
  out.v_fit = ols(log_gap, vr, "A2bar", "B2bar");
  const auto& c = out.u_fit.fit;
  out.params = dynamics::DhmpParams(-c.value("A"), -out.v_fit.value("A2bar"), c.value("B"),
                                    out.v_fit.value("B2bar"), c.value("delta"), u_bar);
  out.errors.a1 = c.std_error("A");
  out.errors.b1 = c.std_error("B");
  out.errors.delta = c.std_error("delta");
  out.errors.a2 = out.v_fit.std_error("A2bar");
  out.errors.b2 = out.v_fit.std_error("B2bar");
  out.conditions = dynamics::check_dhmp_conditions(out.params, u_max, out.errors);
  return out;
}

// ---------------------------------------------------------------------------
// Phase-space centroids

struct Segment {
  int first_year;
  int last_year;
};

struct Centroid {
  Segment segment;
  double u;
  double v;
  std::size_t n_points;
};

inline std::vector<Centroid> phase_centroids(std::span<const data::YearRecord> records,
                                             std::span<const Segment> segments) {
  if (records.empty()) throw InputError("no records");
  int lo = records.front().year;
  int hi = lo;
  for (const auto& r : records) {
    lo = std::min(lo, r.year);
    hi = std::max(hi, r.year);
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (s.first_year > s.last_year) throw ParameterError("segment ends before it starts");
    if (s.first_year < lo || s.last_year > hi) throw ParameterError("segment outside data range");
    for (std::size_t j = 0; j < i; ++j) {
      if (s.first_year <= segments[j].last_year && segments[j].first_year <= s.last_year) {
        throw ParameterError("segments overlap");
      }
    }
  }
  std::vector<Centroid> out;
  for (const auto& s : segments) {
    Centroid c{s, 0.0, 0.0, 0};
    for (const auto& r : records) {
      if (r.year < s.first_year || r.year > s.last_year) continue;
      if (!r.labor_share || !r.employment) continue;
      c.u += *r.labor_share;
      c.v += *r.employment;
      ++c.n_points;
    }
    if (c.n_points == 0) {
      throw InputError("segment " + std::to_string(s.first_year) + "-" +
                       std::to_string(s.last_year) + " has no data");
    }
    c.u /= static_cast<double>(c.n_points);
    c.v /= static_cast<double>(c.n_points);
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Recomputed vs printed derivatives

struct DerivativeRow {
  int year;
  double du;
  double dv;
  std::optional<double> du_printed;
  std::optional<double> dv_printed;
};

struct DerivativeComparison {
  DifferenceDirection direction = DifferenceDirection::kForward;
  std::vector<DerivativeRow> rows;
  std::size_t u_sign_mismatches = 0;
  std::size_t v_sign_mismatches = 0;
  std::size_t n_compared = 0;
  /// Pearson correlation between computed and printed columns.
  double u_correlation = NAN;
  double v_correlation = NAN;
  double u_max_abs_diff = 0.0;
  double v_max_abs_diff = 0.0;
};

namespace detail {

inline double correlation(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (n < 2) return NAN;
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace detail

inline DerivativeComparison compare_printed_derivatives(
    std::span<const data::YearRecord> records,
    DifferenceDirection direction = DifferenceDirection::kForward) {
  const auto rates = rate_series(records, direction);
  DerivativeComparison out;
  out.direction = direction;
  std::vector<double> cu, pu, cv, pv;
  for (std::size_t i = 0; i < rates.entries.size(); ++i) {
    const auto& e = rates.entries[i];
    if (!e.du || !e.dv) continue;
    DerivativeRow row{e.year, *e.du, *e.dv, records[i].du_printed, records[i].dv_printed};
    if (row.du_printed && row.dv_printed) {
      ++out.n_compared;
      cu.push_back(row.du);
      pu.push_back(*row.du_printed);
      cv.push_back(row.dv);
      pv.push_back(*row.dv_printed);
      if (row.du * *row.du_printed < 0.0) ++out.u_sign_mismatches;
      if (row.dv * *row.dv_printed < 0.0) ++out.v_sign_mismatches;
      out.u_max_abs_diff = std::max(out.u_max_abs_diff, std::abs(row.du - *row.du_printed));
      out.v_max_abs_diff = std::max(out.v_max_abs_diff, std::abs(row.dv - *row.dv_printed));
    }
    out.rows.push_back(row);
  }
  out.u_correlation = detail::correlation(cu, pu);
  out.v_correlation = detail::correlation(cv, pv);
  return out;
}

}  // namespace gpgoodwin::estimation
