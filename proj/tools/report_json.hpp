#pragma once

// JSON views of library results for the command-line reports.

#include <cmath>
#include <optional>

#include <json.hpp>

#include "gpgoodwin/gpgoodwin.hpp"

namespace gpgoodwin::report {

using Json = nlohmann::ordered_json;

inline Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

inline Json to_json(const FitResult& f) {
  Json coeffs = Json::object();
  for (const auto& c : f.coefficients) {
    coeffs[c.name] = {{"value", number(c.value)}, {"std_error", number(c.std_error)}};
  }
  return {{"coefficients", coeffs},
          {"ssr", number(f.ssr)},
          {"dof", f.dof},
          {"r_squared", number(f.r_squared)},
          {"n_points", f.n_points}};
}

inline Json to_json(const PowerLawFit& f) {
  Json j = to_json(f.fit);
  j["grid_delta"] = f.grid_delta;
  j["iterations"] = f.iterations;
  j["converged"] = f.converged;
  return j;
}

inline Json to_json(const dynamics::ConditionEntry& e) {
  return {{"condition", e.label},
          {"value", number(e.value)},
          {"bound", number(e.bound)},
          {"std_error", number(e.std_error)},
          {"verdict", dynamics::to_string(e.verdict)}};
}

inline Json to_json(const dynamics::ConditionReport& r) {
  Json textbook = Json::array();
  Json empirical = Json::array();
  for (const auto& e : r.textbook) textbook.push_back(to_json(e));
  for (const auto& e : r.empirical) empirical.push_back(to_json(e));
  Json j = {{"textbook", textbook},
            {"textbook_holds", r.textbook_holds()},
            {"empirical", empirical},
            {"empirical_holds", r.empirical_holds()}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline Json to_json(const dynamics::GoodwinParams& p) {
  return {{"a1", p.a1()}, {"a2", p.a2()}, {"b1", p.b1()}, {"b2", p.b2()}};
}

inline Json to_json(const dynamics::DhmpParams& p) {
  return {{"a1", p.a1()},       {"a2", p.a2()},    {"b1", p.b1()},
          {"b2", p.b2()},       {"delta", p.delta()}, {"u_bar", p.u_bar()}};
}

inline Json to_json(const gpd::GpdFitReport& r) {
  Json cands = Json::array();
  for (const auto& c : r.candidates) {
    Json j = {{"quantile", c.quantile},
              {"threshold", c.threshold},
              {"valid", c.valid},
              {"accepted", c.accepted}};
    if (c.valid) {
      j["slope"] = c.gompertz.slope;
      j["intercept"] = c.gompertz.intercept;
      j["alpha"] = c.pareto.alpha;
      j["a_discrepancy"] = c.a_discrepancy;
      j["ssr"] = c.gompertz.ssr + c.pareto.ssr;
    }
    if (!c.note.empty()) j["note"] = c.note;
    cands.push_back(std::move(j));
  }
  return {{"converged", r.converged},
          {"diagnostic", r.diagnostic},
          {"sample_size", r.sample_size},
          {"slope", r.slope},
          {"slope_se", r.slope_se},
          {"threshold", r.threshold},
          {"alpha", r.alpha},
          {"alpha_se", r.alpha_se},
          {"intercept", r.a_hat},
          {"intercept_target", gpd::kGompertzIntercept},
          {"intercept_discrepancy", r.a_discrepancy},
          {"pareto_log_scale", r.pareto_log_scale},
          {"continuity_gap", r.continuity_gap},
          {"gompertz_points", r.n_gompertz},
          {"pareto_points", r.n_pareto},
          {"ssr_gompertz", r.ssr_gompertz},
          {"ssr_pareto", r.ssr_pareto},
          {"selected_candidate", r.selected_candidate},
          {"candidates", cands}};
}

}  // namespace gpgoodwin::report
