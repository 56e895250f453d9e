#pragma once

// Goodwin growth-cycle dynamics and the DHMP extension.
//
// u is the labor share and v the employment rate, both in percent. The
// Goodwin system in regrouped form is the classical Lotka-Volterra pair
//   du/dt = (-a1 + b1 v) u,   dv/dt = (a2 - b2 u) v,
// and the DHMP system is
//   du/dt = (-a1 + b1 (100 - v)^delta) u,   dv/dt = (-a2 + b2 ln(u_bar - u)) v.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gpgoodwin/error.hpp"

namespace gpgoodwin::dynamics {

struct State {
  double u = 0.0;
  double v = 0.0;

  friend State operator+(State a, State b) { return {a.u + b.u, a.v + b.v}; }
  friend State operator-(State a, State b) { return {a.u - b.u, a.v - b.v}; }
  friend State operator*(double s, State a) { return {s * a.u, s * a.v}; }
};

inline double distance(State a, State b) { return std::hypot(a.u - b.u, a.v - b.v); }

// ---------------------------------------------------------------------------
// Parameters

/// Economic constants of the original model, du/dt = [-(a+d) + h v] u and
/// dv/dt = [(100 - u)/c - (a+b)] v.
struct GoodwinRaw {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double h = 0.0;
};

/// The combinations of raw constants that the regrouped form determines.
/// a, b and d are not separately recoverable.
struct GoodwinCombinations {
  double c;
  double h;
  double a_plus_d;
  double a_plus_b;
};

class GoodwinParams {
 public:
  GoodwinParams(double a1, double a2, double b1, double b2) : a1_(a1), a2_(a2), b1_(b1), b2_(b2) {
    if (!(std::isfinite(a1) && std::isfinite(a2) && std::isfinite(b1) && std::isfinite(b2))) {
      throw ParameterError("Goodwin constants must be finite");
    }
  }

  /// a1 = a + d, a2 = 100/c - (a + b), b1 = h, b2 = 1/c.
  static GoodwinParams from_raw(const GoodwinRaw& raw) {
    if (raw.c == 0.0) throw ParameterError("Goodwin constant c must be non-zero");
    GoodwinParams p(raw.a + raw.d, 100.0 / raw.c - (raw.a + raw.b), raw.h, 1.0 / raw.c);
    p.raw_ = raw;
    return p;
  }

  double a1() const noexcept { return a1_; }
  double a2() const noexcept { return a2_; }
  double b1() const noexcept { return b1_; }
  double b2() const noexcept { return b2_; }
  const std::optional<GoodwinRaw>& raw() const noexcept { return raw_; }

  /// Undefined (throws) when b2 = 0, since then c is infinite.
  GoodwinCombinations combinations() const {
    if (b2_ == 0.0) throw ParameterError("b2 = 0: c is unbounded");
    const double c = 1.0 / b2_;
    return {c, b1_, a1_, 100.0 * b2_ - a2_};
  }

 private:
  double a1_;
  double a2_;
  double b1_;
  double b2_;
  std::optional<GoodwinRaw> raw_;
};

/// Raw DHMP constants; delta and u_bar are carried by DhmpParams.
struct DhmpRaw {
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
  double h = 0.0;
  double lambda = 0.0;
};

struct DhmpCombinations {
  double a_plus_d;
  double h;
  double lambda;
  double a_plus_b;
};

class DhmpParams {
 public:
  DhmpParams(double a1, double a2, double b1, double b2, double delta, double u_bar)
      : a1_(a1), a2_(a2), b1_(b1), b2_(b2), delta_(delta), u_bar_(u_bar) {
    if (!(std::isfinite(a1) && std::isfinite(a2) && std::isfinite(b1) && std::isfinite(b2) &&
          std::isfinite(delta))) {
      throw ParameterError("DHMP constants must be finite");
    }
    if (!(u_bar > 0.0 && u_bar < 100.0)) {
      throw ParameterError("DHMP u_bar must lie in (0, 100)");
    }
  }

  /// a1 = a + d, a2 = lambda ln(100 - u_bar) + (a + b), b1 = h, b2 = lambda.
  static DhmpParams from_raw(const DhmpRaw& raw, double delta, double u_bar) {
    if (!(u_bar > 0.0 && u_bar < 100.0)) throw ParameterError("DHMP u_bar must lie in (0, 100)");
    DhmpParams p(raw.a + raw.d, raw.lambda * std::log(100.0 - u_bar) + raw.a + raw.b, raw.h,
                 raw.lambda, delta, u_bar);
    p.raw_ = raw;
    return p;
  }

  double a1() const noexcept { return a1_; }
  double a2() const noexcept { return a2_; }
  double b1() const noexcept { return b1_; }
  double b2() const noexcept { return b2_; }
  double delta() const noexcept { return delta_; }
  double u_bar() const noexcept { return u_bar_; }
  const std::optional<DhmpRaw>& raw() const noexcept { return raw_; }

  DhmpCombinations combinations() const {
    return {a1_, b1_, b2_, a2_ - b2_ * std::log(100.0 - u_bar_)};
  }

 private:
  double a1_;
  double a2_;
  double b1_;
  double b2_;
  double delta_;
  double u_bar_;
  std::optional<DhmpRaw> raw_;
};

// ---------------------------------------------------------------------------
// Right-hand sides

inline State goodwin_rhs(const GoodwinParams& p, State s) {
  if (!(s.u > 0.0 && s.v > 0.0)) throw DomainError("Goodwin state requires u > 0 and v > 0");
  return {(-p.a1() + p.b1() * s.v) * s.u, (p.a2() - p.b2() * s.u) * s.v};
}

/// The same vector field written with the raw constants.
inline State goodwin_rhs(const GoodwinRaw& r, State s) {
  if (!(s.u > 0.0 && s.v > 0.0)) throw DomainError("Goodwin state requires u > 0 and v > 0");
  return {(-(r.a + r.d) + r.h * s.v) * s.u, ((100.0 - s.u) / r.c - (r.a + r.b)) * s.v};
}

inline void require_dhmp_domain(double u_bar, State s) {
  if (!(s.u > 0.0 && s.u < u_bar)) {
    throw DomainError("DHMP state requires 0 < u < u_bar (u = " + std::to_string(s.u) + ")");
  }
  if (!(s.v > 0.0 && s.v < 100.0)) {
    throw DomainError("DHMP state requires 0 < v < 100 (v = " + std::to_string(s.v) + ")");
  }
}

inline State dhmp_rhs(const DhmpParams& p, State s) {
  require_dhmp_domain(p.u_bar(), s);
  const double unemployment = 100.0 - s.v;
  return {(-p.a1() + p.b1() * std::pow(unemployment, p.delta())) * s.u,
          (-p.a2() + p.b2() * std::log(p.u_bar() - s.u)) * s.v};
}

inline State dhmp_rhs(const DhmpRaw& r, double delta, double u_bar, State s) {
  require_dhmp_domain(u_bar, s);
  return {(-(r.a + r.d) + r.h * std::pow(100.0 - s.v, delta)) * s.u,
          ((-r.lambda * std::log(100.0 - u_bar) - (r.a + r.b)) + r.lambda * std::log(u_bar - s.u)) *
              s.v};
}

// ---------------------------------------------------------------------------
// Fixed points, periods, first integral

struct CenterPeriod {
  double u_c;
  double v_c;
  double period;
};

/// Center (a2/b2, a1/b1) and small-oscillation period 2 pi / sqrt(a1 a2).
/// Throws DomainError when a1 a2 <= 0 (no oscillatory center).
inline CenterPeriod goodwin_center_period(const GoodwinParams& p) {
  const double product = p.a1() * p.a2();
  if (!(product > 0.0)) {
    throw DomainError("no oscillatory center: a1 * a2 = " + std::to_string(product) + " <= 0");
  }
  if (p.b1() == 0.0 || p.b2() == 0.0) throw DomainError("center undefined for b1 = 0 or b2 = 0");
  return {p.a2() / p.b2(), p.a1() / p.b1(), 2.0 * std::numbers::pi / std::sqrt(product)};
}

/// Same quantities from the raw constants:
/// u_c = 100 - (a+b) c, v_c = (a+d)/h, T = 2 pi / sqrt((a+d)[100/c - (a+b)]).
inline CenterPeriod goodwin_center_period(const GoodwinRaw& r) {
  const double product = (r.a + r.d) * (100.0 / r.c - (r.a + r.b));
  if (!(product > 0.0)) throw DomainError("no oscillatory center for these raw constants");
  return {100.0 - (r.a + r.b) * r.c, (r.a + r.d) / r.h, 2.0 * std::numbers::pi / std::sqrt(product)};
}

/// Stationary point of the DHMP field: (100 - v*)^delta = a1/b1 and
/// u* = u_bar - exp(a2/b2).
inline State dhmp_fixed_point(const DhmpParams& p) {
  if (p.b1() == 0.0 || p.b2() == 0.0) throw DomainError("DHMP fixed point needs b1, b2 != 0");
  const double ratio = p.a1() / p.b1();
  if (!(ratio > 0.0)) throw DomainError("DHMP fixed point needs a1/b1 > 0");
  const State s{p.u_bar() - std::exp(p.a2() / p.b2()), 100.0 - std::pow(ratio, 1.0 / p.delta())};
  require_dhmp_domain(p.u_bar(), s);
  return s;
}

/// H(u, v) = b2 u - a2 ln u + b1 v - a1 ln v, constant along exact Goodwin orbits.
inline double conserved_quantity(const GoodwinParams& p, State s) {
  if (!(s.u > 0.0 && s.v > 0.0)) throw DomainError("H requires u > 0 and v > 0");
  return p.b2() * s.u - p.a2() * std::log(s.u) + p.b1() * s.v - p.a1() * std::log(s.v);
}

// ---------------------------------------------------------------------------
// Parameter conditions

enum class Verdict { kHolds, kFails, kBoundary, kUndetermined, kInconclusive };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return "holds";
    case Verdict::kFails: return "fails";
    case Verdict::kBoundary: return "boundary";
    case Verdict::kUndetermined: return "undetermined";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "?";
}

struct ConditionEntry {
  std::string label;
  double value = NAN;  // left-hand side
  double bound = 0.0;  // right-hand side
  std::optional<double> std_error;  // of lhs - rhs
  Verdict verdict = Verdict::kUndetermined;
};

struct ConditionReport {
  std::vector<ConditionEntry> textbook;   // conditions the model assumes
  std::vector<ConditionEntry> empirical;  // sign set found in the Brazilian fits
  std::string note;

  static bool all_hold(const std::vector<ConditionEntry>& set) {
    for (const auto& e : set) {
      if (e.verdict != Verdict::kHolds) return false;
    }
    return !set.empty();
  }
  bool textbook_holds() const { return all_hold(textbook); }
  bool empirical_holds() const { return all_hold(empirical); }
  const ConditionEntry& find(std::string_view label, bool empirical_set) const {
    for (const auto& e : empirical_set ? empirical : textbook) {
      if (e.label == label) return e;
    }
    throw ParameterError("no condition labelled " + std::string(label));
  }
};

enum class Relation { kGreater, kLess };

/// Verdict for lhs (relation) rhs. A standard error at least as large as the
/// margin makes the entry inconclusive.
inline ConditionEntry evaluate_condition(std::string label, double lhs, Relation rel, double rhs,
                                         std::optional<double> std_error = std::nullopt) {
  ConditionEntry e{std::move(label), lhs, rhs, std_error, Verdict::kUndetermined};
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) return e;
  const double margin = rel == Relation::kGreater ? lhs - rhs : rhs - lhs;
  if (margin == 0.0) {
    e.verdict = Verdict::kBoundary;
  } else if (std_error && *std_error >= std::abs(margin)) {
    e.verdict = Verdict::kInconclusive;
  } else {
    e.verdict = margin > 0.0 ? Verdict::kHolds : Verdict::kFails;
  }
  return e;
}

/// Textbook set c > 0, h > 0, (a+d) > 0, (a+b)c < 100 and the reversed set
/// found empirically, evaluated from the regrouped constants.
inline ConditionReport check_goodwin_conditions(const GoodwinParams& p) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double c = p.b2() != 0.0 ? 1.0 / p.b2() : nan;
  const double ab_c = p.b2() != 0.0 ? 100.0 - p.a2() / p.b2() : nan;
  ConditionReport r;
  r.textbook = {
      evaluate_condition("c > 0", c, Relation::kGreater, 0.0),
      evaluate_condition("h > 0", p.b1(), Relation::kGreater, 0.0),
      evaluate_condition("(a+d) > 0", p.a1(), Relation::kGreater, 0.0),
      evaluate_condition("(a+b)c < 100", ab_c, Relation::kLess, 100.0),
  };
  r.empirical = {
      evaluate_condition("c < 0", c, Relation::kLess, 0.0),
      evaluate_condition("h < 0", p.b1(), Relation::kLess, 0.0),
      evaluate_condition("(a+d) < 0", p.a1(), Relation::kLess, 0.0),
      evaluate_condition("(a+b)c > 100", ab_c, Relation::kGreater, 100.0),
  };
  r.note = "a, b and d are not separately determined; only c, h, a+d and a+b are";
  return r;
}

inline bool goodwin_textbook_regime(const GoodwinParams& p) {
  return check_goodwin_conditions(p).textbook_holds();
}

/// Standard errors of fitted DHMP constants, used to flag inconclusive signs.
struct DhmpErrors {
  std::optional<double> a1;
  std::optional<double> a2;
  std::optional<double> b1;
  std::optional<double> b2;
  std::optional<double> delta;
};

inline ConditionReport check_dhmp_conditions(const DhmpParams& p,
                                             std::optional<double> max_labor_share = std::nullopt,
                                             const DhmpErrors& se = {}) {
  const double ub = p.u_bar();
  const auto comb = p.combinations();
  const double odds = ub / (100.0 - ub);
  ConditionReport r;
  r.textbook = {
      evaluate_condition("delta > 0", p.delta(), Relation::kGreater, 0.0, se.delta),
      evaluate_condition("lambda > 0", comb.lambda, Relation::kGreater, 0.0, se.b2),
      max_labor_share ? evaluate_condition("u < u_bar", *max_labor_share, Relation::kLess, ub)
                      : ConditionEntry{"u < u_bar", NAN, ub, std::nullopt, Verdict::kUndetermined},
      evaluate_condition("u_bar < 100", ub, Relation::kLess, 100.0),
      evaluate_condition("h < (a+d)", comb.h, Relation::kLess, comb.a_plus_d),
      evaluate_condition("(a+b) < lambda ln(u_bar/(100-u_bar))", comb.a_plus_b, Relation::kLess,
                         comb.lambda * std::log(odds)),
      evaluate_condition("u_bar/(100-u_bar) > 1", odds, Relation::kGreater, 1.0),
  };
  // (a+b) < -lambda ln(100 - u_bar) is a2 < 0, so its error is that of a2.
  r.empirical = {
      evaluate_condition("delta > 0", p.delta(), Relation::kGreater, 0.0, se.delta),
      evaluate_condition("h > 0", comb.h, Relation::kGreater, 0.0, se.b1),
      evaluate_condition("(a+d) > 0", comb.a_plus_d, Relation::kGreater, 0.0, se.a1),
      evaluate_condition("lambda < 0", comb.lambda, Relation::kLess, 0.0, se.b2),
      evaluate_condition("(a+b) < -lambda ln(100-u_bar)", comb.a_plus_b, Relation::kLess,
                         -comb.lambda * std::log(100.0 - ub), se.a2),
  };
  r.note = "u_bar is assumed, not estimated; a, b and d are not separately determined";
  return r;
}

// ---------------------------------------------------------------------------
// Integration

struct TrajectoryPoint {
  double t;
  double u;
  double v;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  std::string method = "rk4";
  double step = 0.0;

  std::size_t size() const noexcept { return points.size(); }
  State state(std::size_t i) const { return {points[i].u, points[i].v}; }
};

struct IntegrationSettings {
  double t_end = 10.0;
  double step = 1e-3;
  std::size_t record_every = 1;
};

struct IntegrationResult {
  Trajectory trajectory;
  bool truncated = false;
  std::string diagnostic;
  /// Goodwin only: some state had u > 100 or v > 100.
  bool left_unit_square = false;
  /// Goodwin only: max |H(t) - H(0)| / |H(0)| over all steps.
  std::optional<double> conserved_drift;
};

enum class Model { kGoodwin, kDhmp };

namespace detail {

// Classical fixed-step RK4. Rhs throws DomainError to signal an exit.
template <class Rhs, class OnStep>
void run_rk4(Rhs&& rhs, OnStep&& on_step, State s0, const IntegrationSettings& cfg,
             IntegrationResult& out) {
  if (!(cfg.step > 0.0 && std::isfinite(cfg.step))) throw ParameterError("step must be positive");
  if (!(cfg.t_end >= 0.0 && std::isfinite(cfg.t_end))) throw ParameterError("t_end must be >= 0");
  const std::size_t stride = cfg.record_every == 0 ? 1 : cfg.record_every;
  const double h = cfg.step;
  const auto full_steps = static_cast<std::size_t>(std::floor(cfg.t_end / h + 1e-9));
  const double remainder = cfg.t_end - static_cast<double>(full_steps) * h;
  const std::size_t total = full_steps + (remainder > 1e-12 * h ? 1 : 0);

  out.trajectory.step = h;
  out.trajectory.points.push_back({0.0, s0.u, s0.v});
  State s = s0;
  for (std::size_t k = 0; k < total; ++k) {
    const double t0 = static_cast<double>(k) * h;
    const double dt = k < full_steps ? h : remainder;
    State next;
    try {
      const State k1 = rhs(s);
      const State k2 = rhs(s + 0.5 * dt * k1);
      const State k3 = rhs(s + 0.5 * dt * k2);
      const State k4 = rhs(s + dt * k3);
      next = s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      rhs(next);
    } catch (const DomainError& e) {
      out.truncated = true;
      out.diagnostic = "left the model domain after t = " + std::to_string(t0) + ": " + e.what();
      if (out.trajectory.points.back().t != t0) out.trajectory.points.push_back({t0, s.u, s.v});
      return;
    }
    s = next;
    on_step(s);
    const bool last = k + 1 == total;
    if ((k + 1) % stride == 0 || last) {
      const double t = k < full_steps ? static_cast<double>(k + 1) * h : cfg.t_end;
      out.trajectory.points.push_back({t, s.u, s.v});
    }
  }
}

}  // namespace detail

/// Fixed-step RK4 for the Goodwin system. Excursions above 100 are allowed
/// and flagged; the first-integral drift is tracked at every step.
inline IntegrationResult integrate(const GoodwinParams& p, State initial,
                                   const IntegrationSettings& cfg) {
  IntegrationResult out;
  const double h0 = conserved_quantity(p, initial);
  const double scale = h0 != 0.0 ? std::abs(h0) : 1.0;
  double drift = 0.0;
  bool outside = initial.u > 100.0 || initial.v > 100.0;
  detail::run_rk4([&](State s) { return goodwin_rhs(p, s); },
                  [&](State s) {
                    drift = std::max(drift, std::abs(conserved_quantity(p, s) - h0) / scale);
                    outside = outside || s.u > 100.0 || s.v > 100.0;
                  },
                  initial, cfg, out);
  out.conserved_drift = drift;
  out.left_unit_square = outside;
  return out;
}

/// Fixed-step RK4 for DHMP; stops at the last in-domain state on exit.
inline IntegrationResult integrate(const DhmpParams& p, State initial,
                                   const IntegrationSettings& cfg) {
  require_dhmp_domain(p.u_bar(), initial);
  IntegrationResult out;
  detail::run_rk4([&](State s) { return dhmp_rhs(p, s); }, [](State) {}, initial, cfg, out);
  return out;
}

struct PeriodEstimate {
  std::optional<double> period;
  double section = 0.0;
  std::vector<double> crossing_times;
  std::string diagnostic;
};

/// Mean time between successive same-direction crossings of the section
/// u = section_u, with crossing times found by linear interpolation. The
/// default section is the middle of the trajectory's u range.
inline PeriodEstimate orbit_period(const Trajectory& traj,
                                   std::optional<double> section_u = std::nullopt) {
  PeriodEstimate out;
  const auto& pts = traj.points;
  if (pts.size() < 3) {
    out.diagnostic = "trajectory too short";
    return out;
  }
  double lo = pts.front().u;
  double hi = lo;
  for (const auto& p : pts) {
    lo = std::min(lo, p.u);
    hi = std::max(hi, p.u);
  }
  out.section = section_u.value_or(0.5 * (lo + hi));
  if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) {
    out.diagnostic = "no period: u is constant along the trajectory";
    return out;
  }
  int direction = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double s0 = pts[i].u - out.section;
    const double s1 = pts[i + 1].u - out.section;
    const bool up = s0 < 0.0 && s1 >= 0.0;
    const bool down = s0 > 0.0 && s1 <= 0.0;
    if (!up && !down) continue;
    const int dir = up ? 1 : -1;
    if (direction == 0) direction = dir;
    if (dir != direction) continue;
    const double frac = s0 / (s0 - s1);
    out.crossing_times.push_back(pts[i].t + frac * (pts[i + 1].t - pts[i].t));
  }
  if (out.crossing_times.size() < 2) {
    out.diagnostic = "no period: fewer than two same-direction crossings";
    return out;
  }
  const auto& ct = out.crossing_times;
  out.period = (ct.back() - ct.front()) / static_cast<double>(ct.size() - 1);
  return out;
}

}  // namespace gpgoodwin::dynamics
