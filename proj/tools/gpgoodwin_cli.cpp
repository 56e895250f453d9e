// gpgoodwin: command-line front end.
//
//   gpgoodwin sample     draw incomes from a Gompertz-Pareto distribution
//   gpgoodwin fit-gpd    fit (B, x_t, alpha) to an income file
//   gpgoodwin evaluate   Gini, labor share and unemployment per table row
//   gpgoodwin simulate   integrate the Goodwin or DHMP system
//   gpgoodwin estimate   growth-rate regressions on a yearly table
//   gpgoodwin table1     export the bundled yearly table
//
// Exit status: 0 success, 2 bad input or usage, 3 numerical failure
// (unconverged fit, domain exit). GPGOODWIN_LOG sets the log level.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "gpgoodwin/gpgoodwin.hpp"
#include "report_json.hpp"

namespace {

using namespace gpgoodwin;
using report::Json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Settings {
  std::string config;
  std::string input;
  std::string output;
  std::string report;
  std::string curve;
  std::string export_dir;

  // sample
  double slope = 0.34;
  double threshold = 7.5;
  double alpha = 2.8;
  std::size_t n = 100000;
  std::uint64_t seed = 1;
  double nominal_scale = 0.0;

  // fit-gpd
  std::string normalize = "none";
  int year = 0;
  gpd::FitConfig fit;
  bool strict_a_bound = false;
  bool keep_malformed = false;

  // simulate
  std::string model = "goodwin";
  double a1 = NAN;
  double a2 = NAN;
  double b1 = NAN;
  double b2 = NAN;
  double delta = 1.0;
  std::string raw;
  double u0 = NAN;
  double v0 = NAN;
  double t_end = 100.0;
  double step = 1e-3;
  std::size_t record_every = 10;

  // estimate
  double u_bar = 95.0;
  std::string direction = "forward";
  bool exclude_interpolated = false;
  bool interpolate = false;
  std::string segments = "1981-1994,1995-2009";
};

// ---------------------------------------------------------------------------
// Config file

template <class T>
void assign(const Json& j, T& field) {
  field = j.get<T>();
}

void apply_config(const std::string& path, Settings& s) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw InputError("config " + path + ": expected a JSON object");
  const std::map<std::string, std::function<void(const Json&)>> keys = {
      {"input", [&](const Json& v) { assign(v, s.input); }},
      {"output", [&](const Json& v) { assign(v, s.output); }},
      {"report", [&](const Json& v) { assign(v, s.report); }},
      {"curve", [&](const Json& v) { assign(v, s.curve); }},
      {"export_dir", [&](const Json& v) { assign(v, s.export_dir); }},
      {"slope", [&](const Json& v) { assign(v, s.slope); }},
      {"threshold", [&](const Json& v) { assign(v, s.threshold); }},
      {"alpha", [&](const Json& v) { assign(v, s.alpha); }},
      {"n", [&](const Json& v) { assign(v, s.n); }},
      {"seed", [&](const Json& v) { assign(v, s.seed); }},
      {"nominal_scale", [&](const Json& v) { assign(v, s.nominal_scale); }},
      {"normalize", [&](const Json& v) { s.normalize = v.is_number() ? v.dump() : v.get<std::string>(); }},
      {"year", [&](const Json& v) { assign(v, s.year); }},
      {"quantile_lo", [&](const Json& v) { assign(v, s.fit.quantile_lo); }},
      {"quantile_hi", [&](const Json& v) { assign(v, s.fit.quantile_hi); }},
      {"candidates", [&](const Json& v) { assign(v, s.fit.n_candidates); }},
      {"a_bound", [&](const Json& v) { assign(v, s.fit.a_bound); }},
      {"min_branch_points", [&](const Json& v) { assign(v, s.fit.min_branch_points); }},
      {"strict_a_bound", [&](const Json& v) { assign(v, s.strict_a_bound); }},
      {"keep_malformed", [&](const Json& v) { assign(v, s.keep_malformed); }},
      {"model", [&](const Json& v) { assign(v, s.model); }},
      {"a1", [&](const Json& v) { assign(v, s.a1); }},
      {"a2", [&](const Json& v) { assign(v, s.a2); }},
      {"b1", [&](const Json& v) { assign(v, s.b1); }},
      {"b2", [&](const Json& v) { assign(v, s.b2); }},
      {"delta", [&](const Json& v) { assign(v, s.delta); }},
      {"raw", [&](const Json& v) { assign(v, s.raw); }},
      {"u0", [&](const Json& v) { assign(v, s.u0); }},
      {"v0", [&](const Json& v) { assign(v, s.v0); }},
      {"t_end", [&](const Json& v) { assign(v, s.t_end); }},
      {"step", [&](const Json& v) { assign(v, s.step); }},
      {"record_every", [&](const Json& v) { assign(v, s.record_every); }},
      {"u_bar", [&](const Json& v) { assign(v, s.u_bar); }},
      {"direction", [&](const Json& v) { assign(v, s.direction); }},
      {"exclude_interpolated", [&](const Json& v) { assign(v, s.exclude_interpolated); }},
      {"interpolate", [&](const Json& v) { assign(v, s.interpolate); }},
      {"segments", [&](const Json& v) { assign(v, s.segments); }},
  };
  for (const auto& [key, value] : j.items()) {
    const auto it = keys.find(key);
    if (it == keys.end()) throw InputError("config " + path + ": unknown key '" + key + "'");
    try {
      it->second(value);
    } catch (const Json::exception& e) {
      throw InputError("config " + path + ": bad value for '" + key + "': " + e.what());
    }
  }
}

// Looks for --config before the real parse so that its values become
// defaults which explicit flags then override.
std::optional<std::string> find_config(int argc, char** argv) {
  std::optional<std::string> path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
  }
  return path;
}

// ---------------------------------------------------------------------------
// Output helpers

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw InputError("cannot write " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_json(const std::string& path, const Json& j) {
  Sink sink(path);
  sink.stream() << j.dump(2) << '\n';
}

void write_csv(const std::string& path, const data::NumericTable& t) {
  Sink sink(path);
  data::write_numeric_csv(sink.stream(), t);
}

std::vector<data::YearRecord> load_records(const Settings& s) {
  if (s.input.empty()) return data::load_table1();
  return data::load_table_csv(s.input);
}

std::string input_name(const Settings& s) { return s.input.empty() ? "bundled" : s.input; }

std::vector<double> parse_list(const std::string& text, std::size_t want, const char* what) {
  std::vector<double> out;
  for (auto cell : data::split_csv_line(text)) {
    const auto v = data::parse_number(cell);
    if (!v) throw InputError(std::string(what) + ": not a number: " + std::string(cell));
    out.push_back(*v);
  }
  if (out.size() != want) {
    throw InputError(std::string(what) + ": expected " + std::to_string(want) + " values");
  }
  return out;
}

std::vector<estimation::Segment> parse_segments(const std::string& text) {
  std::vector<estimation::Segment> out;
  for (auto cell : data::split_csv_line(text)) {
    const auto dash = cell.find('-', 1);
    if (dash == std::string_view::npos) throw InputError("segment '" + std::string(cell) + "' is not FIRST-LAST");
    const auto a = data::parse_int(cell.substr(0, dash));
    const auto b = data::parse_int(cell.substr(dash + 1));
    if (!a || !b) throw InputError("segment '" + std::string(cell) + "' is not FIRST-LAST");
    out.push_back({*a, *b});
  }
  return out;
}

estimation::DifferenceDirection parse_direction(const std::string& d) {
  if (d == "forward") return estimation::DifferenceDirection::kForward;
  if (d == "reversed") return estimation::DifferenceDirection::kReversed;
  throw InputError("direction must be 'forward' or 'reversed'");
}

// ---------------------------------------------------------------------------
// sample

int cmd_sample(const Settings& s) {
  const gpd::GpdParams p(s.slope, s.threshold, s.alpha);
  auto xs = gpd::sample(p, s.n, s.seed);
  data::IncomeDataset ds;
  if (s.nominal_scale > 0.0) {
    for (double& x : xs) x *= s.nominal_scale;
    ds = data::normalize(data::make_dataset(std::move(xs)), s.nominal_scale);
  } else {
    ds = data::make_dataset(std::move(xs));
  }
  Sink sink(s.output);
  data::write_income_csv(sink.stream(), ds);
  spdlog::info("wrote {} draws from (B={}, x_t={}, alpha={}) with seed {}", s.n, s.slope,
               s.threshold, s.alpha, s.seed);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// fit-gpd

data::NumericTable fitted_curve(const std::vector<double>& xs, const gpd::GpdParams& p) {
  const auto ccdf = gpd::empirical_ccdf(xs, 1);
  const auto& pts = ccdf.points();
  data::NumericTable t;
  t.columns = {"x", "empirical_F", "fitted_F"};
  const double x_step = (pts.back().x - pts.front().x) / 1000.0;
  double last_x = -HUGE_VAL;
  double last_log = HUGE_VAL;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double lf = std::log10(pts[i].ccdf);
    const bool keep = i == 0 || i + 1 == pts.size() || pts[i].x - last_x >= x_step ||
                      last_log - lf >= 0.005;
    if (!keep) continue;
    last_x = pts[i].x;
    last_log = lf;
    t.add_row({pts[i].x, pts[i].ccdf, gpd::ccdf(p, pts[i].x).value()});
  }
  return t;
}

int cmd_fit_gpd(const Settings& s) {
  if (s.input.empty()) throw InputError("fit-gpd needs --input");
  data::IncomeLoadOptions opt;
  opt.abort_on_malformed = !s.keep_malformed;
  auto ds = data::load_income_csv(s.input, opt);
  if (ds.malformed_rows > 0) {
    spdlog::warn("{}: skipped {} malformed rows", s.input, ds.malformed_rows);
  }
  if (s.normalize == "mean") {
    ds = data::normalize(std::move(ds));
  } else if (s.normalize != "none") {
    const auto c = data::parse_number(s.normalize);
    if (!c) throw InputError("--normalize takes none, mean or a positive number");
    ds = data::normalize(std::move(ds), *c);
  }
  std::vector<double> xs;
  const auto& values = ds.normalized.empty() ? ds.raw : ds.normalized;
  if (s.year != 0) {
    const auto by = ds.by_year();
    const auto it = by.find(s.year);
    if (it == by.end()) throw InputError("no rows for year " + std::to_string(s.year));
    xs = it->second;
  } else {
    xs = values;
  }
  auto cfg = s.fit;
  cfg.strict_grid_edge = s.strict_a_bound;
  if (xs.size() < cfg.min_samples) {
    throw InputError("need at least " + std::to_string(cfg.min_samples) + " incomes, got " +
                     std::to_string(xs.size()));
  }
  spdlog::info("fitting {} incomes", xs.size());
  const auto r = gpd::fit_gpd(xs, cfg);

  Json j = {{"input", s.input},
            {"normalization_constant", report::number(ds.normalization_constant)},
            {"malformed_rows", ds.malformed_rows}};
  if (s.year != 0) j["year"] = s.year;
  j["config"] = {{"quantile_lo", cfg.quantile_lo},
                 {"quantile_hi", cfg.quantile_hi},
                 {"candidates", cfg.n_candidates},
                 {"a_bound", cfg.a_bound},
                 {"strict_a_bound", cfg.strict_grid_edge}};
  j["fit"] = report::to_json(r);
  write_json(s.output, j);
  if (!s.curve.empty() && r.slope > 0.0 && r.threshold > 0.0 && r.alpha > 0.0) {
    write_csv(s.curve, fitted_curve(xs, r.params()));
  }
  if (!r.converged) {
    spdlog::error("fit did not converge: {}", r.diagnostic);
    return kExitNumerical;
  }
  if (!r.diagnostic.empty()) spdlog::warn("{}", r.diagnostic);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

int cmd_evaluate(const Settings& s) {
  const auto records = load_records(s);
  data::NumericTable t;
  t.columns = {"year",  "evaluated", "B",     "x_t",    "alpha",    "mean", "Gini",
               "Gini_raw", "Gini_gap", "u",   "u_raw",  "u_gap",    "V",    "V_raw", "V_gap"};
  const auto gap = [](double computed, const std::optional<double>& raw) -> std::optional<double> {
    if (!raw || *raw == 0.0) return std::nullopt;
    return (computed - *raw) / *raw;
  };
  Json skipped = Json::array();
  Json outliers = Json::array();
  std::size_t evaluated = 0;
  std::size_t u_within = 0;
  double worst_gini = 0.0;
  for (const auto& r : records) {
    const auto yr = static_cast<double>(r.year);
    if (!r.has_gpd()) {
      spdlog::warn("skipping {}: no GPD parameters", r.year);
      skipped.push_back(r.year);
      t.add_row({yr, 0.0, std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                 r.gini, std::nullopt, std::nullopt, r.labor_share, std::nullopt, std::nullopt,
                 r.unemployment, std::nullopt});
      continue;
    }
    const auto p = r.gpd_params();
    const double mean = gpd::mean_income(p);
    const double g = gpd::gini(p);
    const double u = gpd::labor_share(p).value();
    std::optional<double> v;
    if (r.x_d) v = gpd::unemployment_share(p, *r.x_d).value();
    const auto ug = gap(u, r.labor_share);
    const auto gg = gap(g, r.gini);
    ++evaluated;
    if (ug && std::abs(*ug) <= 0.07) {
      ++u_within;
    } else {
      outliers.push_back({{"year", r.year}, {"u", u}, {"u_raw", report::number(r.labor_share)}});
    }
    if (gg) worst_gini = std::max(worst_gini, std::abs(*gg));
    t.add_row({yr, 1.0, p.slope(), p.threshold(), p.pareto_index(), mean, g, r.gini, gg, u,
               r.labor_share, ug, v, r.unemployment, v ? gap(*v, r.unemployment) : std::nullopt});
  }
  write_csv(s.output, t);
  if (!s.report.empty()) {
    write_json(s.report, {{"input", input_name(s)},
                          {"rows", records.size()},
                          {"evaluated", evaluated},
                          {"skipped", skipped},
                          {"u_within_7_percent", u_within},
                          {"u_outliers", outliers},
                          {"max_gini_relative_gap", worst_gini}});
  }
  spdlog::info("evaluated {} rows, skipped {}", evaluated, skipped.size());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

data::NumericTable trajectory_table(const dynamics::Trajectory& traj) {
  data::NumericTable t;
  t.columns = {"t", "u", "v"};
  for (const auto& p : traj.points) t.add_row({p.t, p.u, p.v});
  return t;
}

Json orbit_json(const dynamics::IntegrationResult& res, dynamics::State start) {
  const auto per = dynamics::orbit_period(res.trajectory);
  double excursion = 0.0;
  for (std::size_t i = 0; i < res.trajectory.size(); ++i) {
    excursion = std::max(excursion, dynamics::distance(res.trajectory.state(i), start));
  }
  Json j = {{"points", res.trajectory.size()},
            {"t_final", res.trajectory.points.back().t},
            {"stationary", excursion <= 1e-12},
            {"max_distance_from_start", excursion},
            {"period", report::number(per.period)},
            {"period_section_u", per.section},
            {"period_crossings", per.crossing_times.size()},
            {"truncated", res.truncated},
            {"diagnostic", res.diagnostic}};
  if (!per.diagnostic.empty()) j["period_diagnostic"] = per.diagnostic;
  return j;
}

int cmd_simulate(const Settings& s) {
  const dynamics::IntegrationSettings cfg{s.t_end, s.step, s.record_every};
  const bool given = !(std::isnan(s.a1) || std::isnan(s.a2) || std::isnan(s.b1) || std::isnan(s.b2));
  if (given == !s.raw.empty()) {
    throw InputError("give either --a1 --a2 --b1 --b2 or --raw, not both and not neither");
  }
  Json j = {{"model", s.model}};
  dynamics::IntegrationResult res;
  dynamics::State start{};
  if (s.model == "goodwin") {
    std::optional<dynamics::GoodwinParams> p;
    if (given) {
      p.emplace(s.a1, s.a2, s.b1, s.b2);
    } else {
      const auto r = parse_list(s.raw, 5, "--raw a,b,c,d,h");
      p = dynamics::GoodwinParams::from_raw({r[0], r[1], r[2], r[3], r[4]});
      j["raw"] = {{"a", r[0]}, {"b", r[1]}, {"c", r[2]}, {"d", r[3]}, {"h", r[4]}};
    }
    j["constants"] = report::to_json(*p);
    std::optional<dynamics::CenterPeriod> cp;
    try {
      cp = dynamics::goodwin_center_period(*p);
    } catch (const DomainError& e) {
      j["center_diagnostic"] = e.what();
    }
    if (cp) {
      j["fixed_point"] = {{"u", cp->u_c}, {"v", cp->v_c}};
      j["period_formula"] = cp->period;
    }
    if (p->b2() != 0.0) {
      const auto c = p->combinations();
      j["combinations"] = {{"c", c.c}, {"h", c.h}, {"a_plus_d", c.a_plus_d}, {"a_plus_b", c.a_plus_b}};
    }
    j["conditions"] = report::to_json(dynamics::check_goodwin_conditions(*p));
    if (std::isnan(s.u0) || std::isnan(s.v0)) {
      if (!cp) throw InputError("no center to start from; give --u0 and --v0");
      start = {0.99 * cp->u_c, cp->v_c};
    } else {
      start = {s.u0, s.v0};
    }
    res = dynamics::integrate(*p, start, cfg);
    j["start"] = {{"u", start.u}, {"v", start.v}};
    j["orbit"] = orbit_json(res, start);
    j["orbit"]["conserved_drift"] = report::number(res.conserved_drift);
    j["orbit"]["left_unit_square"] = res.left_unit_square;
  } else if (s.model == "dhmp") {
    std::optional<dynamics::DhmpParams> p;
    if (given) {
      p.emplace(s.a1, s.a2, s.b1, s.b2, s.delta, s.u_bar);
    } else {
      const auto r = parse_list(s.raw, 5, "--raw a,b,d,h,lambda");
      p = dynamics::DhmpParams::from_raw({r[0], r[1], r[2], r[3], r[4]}, s.delta, s.u_bar);
      j["raw"] = {{"a", r[0]}, {"b", r[1]}, {"d", r[2]}, {"h", r[3]}, {"lambda", r[4]}};
    }
    j["constants"] = report::to_json(*p);
    std::optional<dynamics::State> fp;
    try {
      fp = dynamics::dhmp_fixed_point(*p);
      j["fixed_point"] = {{"u", fp->u}, {"v", fp->v}};
    } catch (const DomainError& e) {
      j["fixed_point_diagnostic"] = e.what();
    }
    j["conditions"] = report::to_json(dynamics::check_dhmp_conditions(*p));
    if (std::isnan(s.u0) || std::isnan(s.v0)) {
      if (!fp) throw InputError("no fixed point to start from; give --u0 and --v0");
      start = {0.99 * fp->u, fp->v};
    } else {
      start = {s.u0, s.v0};
    }
    res = dynamics::integrate(*p, start, cfg);
    j["start"] = {{"u", start.u}, {"v", start.v}};
    j["orbit"] = orbit_json(res, start);
  } else {
    throw InputError("--model must be goodwin or dhmp");
  }
  j["settings"] = {{"method", res.trajectory.method},
                   {"step", s.step},
                   {"t_end", s.t_end},
                   {"record_every", s.record_every}};
  write_csv(s.output, trajectory_table(res.trajectory));
  if (!s.report.empty()) write_json(s.report, j);
  if (res.truncated) {
    spdlog::error("{}", res.diagnostic);
    return kExitNumerical;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// estimate

Json derivative_json(const estimation::DerivativeComparison& c) {
  Json rows = Json::array();
  for (const auto& r : c.rows) {
    rows.push_back({{"year", r.year},
                    {"du", r.du},
                    {"du_printed", report::number(r.du_printed)},
                    {"dv", r.dv},
                    {"dv_printed", report::number(r.dv_printed)}});
  }
  return {{"direction", estimation::to_string(c.direction)},
          {"n_compared", c.n_compared},
          {"u_sign_mismatches", c.u_sign_mismatches},
          {"v_sign_mismatches", c.v_sign_mismatches},
          {"u_correlation", report::number(c.u_correlation)},
          {"v_correlation", report::number(c.v_correlation)},
          {"u_max_abs_diff", c.u_max_abs_diff},
          {"v_max_abs_diff", c.v_max_abs_diff},
          {"rows", rows}};
}

void export_series(const std::string& dir, const std::vector<data::YearRecord>& records) {
  std::filesystem::create_directories(dir);
  data::NumericTable uv, phase, tuv;
  uv.columns = {"year", "u", "v", "interpolated"};
  phase.columns = {"label", "year", "u", "v"};
  tuv.columns = {"t", "u", "v"};
  double label = 1.0;
  for (const auto& r : records) {
    const auto y = static_cast<double>(r.year);
    uv.add_row({y, r.labor_share, r.employment, r.interpolated ? 1.0 : 0.0});
    phase.add_row({label++, y, r.labor_share, r.employment});
    tuv.add_row({y, r.labor_share, r.employment});
  }
  const std::filesystem::path base(dir);
  write_csv((base / "uv_series.csv").string(), uv);
  write_csv((base / "phase.csv").string(), phase);
  write_csv((base / "tuv.csv").string(), tuv);
}

int cmd_estimate(const Settings& s) {
  auto records = load_records(s);
  if (s.interpolate) {
    const std::string fields[] = {"u", "v"};
    records = data::interpolate_missing(records, fields);
    for (auto& r : records) {
      if (r.employment && !r.unemployment) r.unemployment = 100.0 - *r.employment;
    }
  }
  if (records.size() < 7) {
    throw InputError("estimation needs at least 7 consecutive years, got " +
                     std::to_string(records.size()));
  }
  const auto direction = parse_direction(s.direction);
  const auto rates = estimation::rate_series(records, direction);
  const estimation::RegressionOptions opt{s.exclude_interpolated, 5};

  const auto gw = estimation::fit_goodwin_lines(rates, opt);
  Json goodwin = {{"years", gw.years},
                  {"u_fit", report::to_json(gw.u_fit)},
                  {"v_fit", report::to_json(gw.v_fit)},
                  {"constants", report::to_json(gw.params)},
                  {"ab_c", report::number(gw.ab_c)}};
  try {
    const auto cp = dynamics::goodwin_center_period(gw.params);
    goodwin["center"] = {{"u", cp.u_c}, {"v", cp.v_c}, {"period", cp.period}};
  } catch (const DomainError& e) {
    goodwin["center"] = nullptr;
    goodwin["center_diagnostic"] = e.what();
  }
  goodwin["conditions"] = report::to_json(gw.conditions);

  const auto dh = estimation::fit_dhmp(rates, s.u_bar, opt);
  Json dhmp = {{"years", dh.years},
               {"u_bar", dh.u_bar},
               {"u_fit", report::to_json(dh.u_fit)},
               {"v_fit", report::to_json(dh.v_fit)},
               {"constants", report::to_json(dh.params)},
               {"conditions", report::to_json(dh.conditions)}};

  const auto segments = parse_segments(s.segments);
  Json centroids = Json::array();
  for (const auto& c : estimation::phase_centroids(records, segments)) {
    centroids.push_back({{"first_year", c.segment.first_year},
                         {"last_year", c.segment.last_year},
                         {"u", c.u},
                         {"v", c.v},
                         {"n_points", c.n_points}});
  }

  Json j = {{"input", input_name(s)},
            {"direction", estimation::to_string(direction)},
            {"exclude_interpolated", s.exclude_interpolated},
            {"goodwin", goodwin},
            {"dhmp", dhmp},
            {"derivatives", derivative_json(estimation::compare_printed_derivatives(records, direction))},
            {"centroids", centroids}};
  write_json(s.output, j);
  if (!s.export_dir.empty()) export_series(s.export_dir, records);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// table1

int cmd_table1(const Settings& s) {
  auto records = data::load_table1();
  if (s.interpolate) {
    const std::string fields[] = {"B", "B_se", "x_t", "alpha", "alpha_se", "Gini"};
    records = data::interpolate_missing(records, fields);
  }
  Sink sink(s.output);
  data::write_table_csv(sink.stream(), records);
  return kExitOk;
}

// ---------------------------------------------------------------------------

void setup_logging() {
  auto logger = spdlog::stderr_logger_st("gpgoodwin");
  logger->set_pattern("gpgoodwin: %l: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("GPGOODWIN_LOG")) {
    const auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string(env) != "off") {
      spdlog::warn("GPGOODWIN_LOG={} not understood; using warn", env);
    } else {
      spdlog::set_level(level);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  Settings s;
  try {
    if (const auto path = find_config(argc, argv)) apply_config(*path, s);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitInput;
  }

  CLI::App app{"Gompertz-Pareto income distributions and growth-cycle dynamics"};
  app.require_subcommand(1);
  app.add_option("--config", s.config, "JSON file of option defaults");

  auto* sample = app.add_subcommand("sample", "Draw normalized incomes from a Gompertz-Pareto law");
  sample->add_option("--slope,-B", s.slope, "Gompertz slope B")->capture_default_str();
  sample->add_option("--threshold", s.threshold, "Pareto threshold x_t")->capture_default_str();
  sample->add_option("--alpha", s.alpha, "Pareto index")->capture_default_str();
  sample->add_option("-n,--count", s.n, "Number of draws")->capture_default_str();
  sample->add_option("--seed", s.seed, "Random seed")->capture_default_str();
  sample->add_option("--nominal-scale", s.nominal_scale,
                     "Write nominal values x*C with C recorded as normalization constant");
  sample->add_option("-o,--output", s.output, "Income CSV (default stdout)");

  auto* fit = app.add_subcommand("fit-gpd", "Fit B, x_t and alpha to an income CSV");
  fit->add_option("-i,--input", s.input, "Income CSV")->required(s.input.empty());
  fit->add_option("-o,--output", s.output, "JSON report (default stdout)");
  fit->add_option("--curve", s.curve, "CSV of x, empirical F, fitted F");
  fit->add_option("--normalize", s.normalize, "none, mean, or a positive constant")->capture_default_str();
  fit->add_option("--year", s.year, "Use only rows of this year (two-column files)");
  fit->add_option("--quantile-lo", s.fit.quantile_lo, "Lowest threshold quantile")->capture_default_str();
  fit->add_option("--quantile-hi", s.fit.quantile_hi, "Highest threshold quantile")->capture_default_str();
  fit->add_option("--candidates", s.fit.n_candidates, "Threshold grid size")->capture_default_str();
  fit->add_option("--a-bound", s.fit.a_bound, "Allowed relative deviation of the intercept")
      ->capture_default_str();
  fit->add_flag("--strict-a-bound", s.strict_a_bound, "Fail when the threshold lands on a grid edge");
  fit->add_flag("--keep-malformed", s.keep_malformed, "Skip malformed rows instead of aborting");

  auto* eval = app.add_subcommand("evaluate", "Gini, labor share and unemployment per table row");
  eval->add_option("-i,--input", s.input, "Yearly table CSV (default: bundled table)");
  eval->add_option("-o,--output", s.output, "CSV (default stdout)");
  eval->add_option("--report", s.report, "JSON summary");

  auto* sim = app.add_subcommand("simulate", "Integrate the Goodwin or DHMP system with RK4");
  sim->add_option("--model", s.model, "goodwin or dhmp")
      ->check(CLI::IsMember({"goodwin", "dhmp"}))
      ->capture_default_str();
  sim->add_option("--a1", s.a1);
  sim->add_option("--a2", s.a2);
  sim->add_option("--b1", s.b1);
  sim->add_option("--b2", s.b2);
  sim->add_option("--delta", s.delta, "DHMP Phillips exponent")->capture_default_str();
  sim->add_option("--u-bar", s.u_bar, "DHMP labor-share ceiling")->capture_default_str();
  sim->add_option("--raw", s.raw, "goodwin: a,b,c,d,h; dhmp: a,b,d,h,lambda");
  sim->add_option("--u0", s.u0, "Initial labor share (default 0.99 of the fixed point)");
  sim->add_option("--v0", s.v0, "Initial employment rate (default: fixed point)");
  sim->add_option("--t-end", s.t_end, "Integration time")->capture_default_str();
  sim->add_option("--step", s.step, "RK4 step")->capture_default_str();
  sim->add_option("--record-every", s.record_every, "Keep every k-th step")->capture_default_str();
  sim->add_option("-o,--output", s.output, "Trajectory CSV t,u,v (default stdout)");
  sim->add_option("--report", s.report, "JSON orbit report");

  auto* est = app.add_subcommand("estimate", "Growth-rate regressions on a yearly table");
  est->add_option("-i,--input", s.input, "Yearly table CSV (default: bundled table)");
  est->add_option("-o,--output", s.output, "JSON report (default stdout)");
  est->add_option("--export-dir", s.export_dir, "Write uv_series.csv, phase.csv, tuv.csv here");
  est->add_option("--u-bar", s.u_bar, "DHMP labor-share ceiling")->capture_default_str();
  est->add_option("--direction", s.direction, "forward or reversed central differences")
      ->check(CLI::IsMember({"forward", "reversed"}))
      ->capture_default_str();
  est->add_flag("--exclude-interpolated", s.exclude_interpolated,
                "Leave interpolated years out of the regressions");
  est->add_flag("--interpolate", s.interpolate, "Fill missing u and v linearly first");
  est->add_option("--segments", s.segments, "Centroid year ranges")->capture_default_str();

  auto* table = app.add_subcommand("table1", "Write the bundled 1981-2009 table");
  table->add_option("-o,--output", s.output, "CSV (default stdout)");
  table->add_flag("--interpolate", s.interpolate, "Fill the missing GPD columns linearly");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*sample) return cmd_sample(s);
    if (*fit) return cmd_fit_gpd(s);
    if (*eval) return cmd_evaluate(s);
    if (*sim) return cmd_simulate(s);
    if (*est) return cmd_estimate(s);
    if (*table) return cmd_table1(s);
  } catch (const InputError& e) {
    spdlog::error("{}", e.what());
    return kExitInput;
  } catch (const ParameterError& e) {
    spdlog::error("{}", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitNumerical;
  }
  return kExitInput;
}
