#pragma once

// Yearly tables, income microdata files and the bundled 1981-2009 dataset.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "gpgoodwin/error.hpp"
#include "gpgoodwin/gpd.hpp"
#include "gpgoodwin/table1_data.hpp"

namespace gpgoodwin::data {

/// Shortest decimal text that reads back as the same double.
inline std::string format_number(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

/// Strict parse of a whole cell; accepts a leading '+'.
inline std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::optional<int> parse_int(std::string_view s) {
  s = trim(s);
  int value = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// ---------------------------------------------------------------------------
// Yearly records

/// One row of the yearly table. Any field except the year may be missing.
struct YearRecord {
  int year = 0;
  std::optional<double> slope;           // B
  std::optional<double> slope_se;
  std::optional<double> threshold;       // x_t
  std::optional<double> alpha;
  std::optional<double> alpha_se;
  std::optional<double> x_d;
  std::optional<double> unemployment;    // [V], percent
  std::optional<double> gini;            // [Gini]
  std::optional<double> labor_share;     // [u], percent
  std::optional<double> du_printed;
  std::optional<double> employment;      // [v], percent
  std::optional<double> dv_printed;
  bool interpolated = false;

  bool has_gpd() const { return slope && threshold && alpha; }
  gpd::GpdParams gpd_params() const {
    if (!has_gpd()) throw InputError("year " + std::to_string(year) + " has no GPD parameters");
    return gpd::GpdParams(*slope, *threshold, *alpha);
  }

  friend bool operator==(const YearRecord&, const YearRecord&) = default;
};

inline constexpr std::array<std::string_view, 14> kTableColumns = {
    "year", "B", "B_se", "x_t", "alpha", "alpha_se", "x_d",
    "V",    "Gini", "u", "du", "v", "dv", "interpolated"};

/// Field names accepted by interpolate_missing, matching the table header.
inline std::optional<double>& field(YearRecord& r, std::string_view name) {
  if (name == "B") return r.slope;
  if (name == "B_se") return r.slope_se;
  if (name == "x_t") return r.threshold;
  if (name == "alpha") return r.alpha;
  if (name == "alpha_se") return r.alpha_se;
  if (name == "x_d") return r.x_d;
  if (name == "V") return r.unemployment;
  if (name == "Gini") return r.gini;
  if (name == "u") return r.labor_share;
  if (name == "du") return r.du_printed;
  if (name == "v") return r.employment;
  if (name == "dv") return r.dv_printed;
  throw ParameterError("unknown table field: " + std::string(name));
}

inline const std::optional<double>& field(const YearRecord& r, std::string_view name) {
  return field(const_cast<YearRecord&>(r), name);
}

inline std::vector<YearRecord> read_table_csv(std::istream& in, std::string_view source = "table") {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<YearRecord> out;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto cells = split_csv_line(text);
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    if (!header_seen) {
      header_seen = true;
      if (cells.size() != kTableColumns.size() ||
          !std::equal(cells.begin(), cells.end(), kTableColumns.begin())) {
        throw InputError(where + ": expected header " + "year,B,B_se,x_t,alpha,alpha_se,x_d,V,Gini,u,du,v,dv,interpolated");
      }
      continue;
    }
    if (cells.size() != kTableColumns.size()) {
      throw InputError(where + ": expected " + std::to_string(kTableColumns.size()) + " cells");
    }
    YearRecord r;
    const auto year = parse_int(cells[0]);
    if (!year) throw InputError(where + ": bad year");
    r.year = *year;
    for (std::size_t c = 1; c + 1 < cells.size(); ++c) {
      if (cells[c].empty()) continue;
      const auto value = parse_number(cells[c]);
      if (!value || !std::isfinite(*value)) {
        throw InputError(where + ": bad value in column " + std::string(kTableColumns[c]));
      }
      field(r, kTableColumns[c]) = *value;
    }
    const auto flag = cells.back();
    if (flag == "1" || flag == "true") {
      r.interpolated = true;
    } else if (!(flag.empty() || flag == "0" || flag == "false")) {
      throw InputError(where + ": interpolated flag must be 0 or 1");
    }
    if (r.unemployment && r.employment &&
        std::abs(*r.employment - (100.0 - *r.unemployment)) > 1e-9) {
      throw InputError(where + ": v must equal 100 - V");
    }
    if (!out.empty() && r.year <= out.back().year) {
      throw InputError(where + ": years must increase");
    }
    out.push_back(r);
  }
  if (!header_seen) throw InputError(std::string(source) + ": empty table");
  return out;
}

inline std::vector<YearRecord> load_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_table_csv(in, path);
}

inline void write_table_csv(std::ostream& out, std::span<const YearRecord> records) {
  for (std::size_t c = 0; c < kTableColumns.size(); ++c) {
    out << (c ? "," : "") << kTableColumns[c];
  }
  out << '\n';
  for (const auto& r : records) {
    out << r.year;
    for (std::size_t c = 1; c + 1 < kTableColumns.size(); ++c) {
      out << ',';
      if (const auto& v = field(r, kTableColumns[c])) out << format_number(*v);
    }
    out << ',' << (r.interpolated ? 1 : 0) << '\n';
  }
}

inline void save_table_csv(const std::string& path, std::span<const YearRecord> records) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  write_table_csv(out, records);
}

/// The bundled 29-year table. 1991, 1994 and 2000 have no GPD parameters.
inline std::vector<YearRecord> load_table1() {
  std::istringstream in(kTable1Csv);
  return read_table_csv(in, "table1");
}

/// Linear interpolation of the named fields across missing entries. Absent
/// years inside the range are inserted first. Every record that receives a
/// value is flagged as interpolated.
inline std::vector<YearRecord> interpolate_missing(std::vector<YearRecord> records,
                                                   std::span<const std::string> fields) {
  std::sort(records.begin(), records.end(),
            [](const YearRecord& a, const YearRecord& b) { return a.year < b.year; });
  std::vector<YearRecord> full;
  for (const auto& r : records) {
    if (!full.empty() && r.year == full.back().year) {
      throw InputError("duplicate year " + std::to_string(r.year));
    }
    while (!full.empty() && full.back().year + 1 < r.year) {
      YearRecord gap;
      gap.year = full.back().year + 1;
      full.push_back(gap);
    }
    full.push_back(r);
  }
  for (const auto& name : fields) {
    std::vector<int> boundary;
    for (std::size_t i = 0; i < full.size(); ++i) {
      if (field(full[i], name)) continue;
      std::optional<std::size_t> lo;
      std::optional<std::size_t> hi;
      for (std::size_t j = i; j-- > 0;) {
        if (field(full[j], name)) {
          lo = j;
          break;
        }
      }
      for (std::size_t j = i + 1; j < full.size(); ++j) {
        if (field(full[j], name)) {
          hi = j;
          break;
        }
      }
      if (!lo || !hi) {
        boundary.push_back(full[i].year);
        continue;
      }
      const double y0 = *field(full[*lo], name);
      const double y1 = *field(full[*hi], name);
      const double w = static_cast<double>(full[i].year - full[*lo].year) /
                       static_cast<double>(full[*hi].year - full[*lo].year);
      field(full[i], name) = y0 + w * (y1 - y0);
      full[i].interpolated = true;
    }
    if (!boundary.empty()) {
      throw GapError("cannot interpolate field " + name + " at the series boundary", boundary);
    }
  }
  return full;
}

// ---------------------------------------------------------------------------
// Plain numeric series (trajectories, exports)

/// Header row plus numeric rows; an empty cell is a missing value.
struct NumericTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw InputError("no column named " + std::string(name));
  }
  void add_row(std::vector<std::optional<double>> row) {
    if (row.size() != columns.size()) throw ParameterError("row width does not match header");
    rows.push_back(std::move(row));
  }
  bool operator==(const NumericTable&) const = default;
};

inline NumericTable read_numeric_csv(std::istream& in, std::string_view source = "series") {
  NumericTable t;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto cells = split_csv_line(text);
    if (!header_seen) {
      header_seen = true;
      for (auto c : cells) t.columns.emplace_back(c);
      continue;
    }
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    if (cells.size() != t.columns.size()) throw InputError(where + ": wrong number of cells");
    std::vector<std::optional<double>> row;
    for (auto c : cells) {
      if (c.empty()) {
        row.emplace_back();
        continue;
      }
      const auto v = parse_number(c);
      if (!v) throw InputError(where + ": not a number: " + std::string(c));
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (!header_seen) throw InputError(std::string(source) + ": empty file");
  return t;
}

inline NumericTable load_numeric_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_numeric_csv(in, path);
}

inline void write_numeric_csv(std::ostream& out, const NumericTable& t) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      if (row[c]) out << format_number(*row[c]);
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Income microdata

struct IncomeDataset {
  std::vector<double> raw;
  std::vector<int> years;  // empty for the single-column layout
  std::optional<double> normalization_constant;
  std::vector<double> normalized;
  std::size_t malformed_rows = 0;
  std::vector<std::size_t> malformed_lines;

  /// Values grouped by year; requires the two-column layout.
  std::map<int, std::vector<double>> by_year() const {
    if (years.size() != raw.size()) throw InputError("dataset has no year column");
    std::map<int, std::vector<double>> out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      out[years[i]].push_back(normalized.empty() ? raw[i] : normalized[i]);
    }
    return out;
  }
};

enum class IncomeLayout { kAuto, kIncome, kYearIncome };

struct IncomeLoadOptions {
  IncomeLayout layout = IncomeLayout::kAuto;
  /// Abort when more than this fraction of rows is malformed.
  double max_malformed_fraction = 0.01;
  bool abort_on_malformed = true;
};

inline constexpr std::string_view kNormalizationKey = "normalization_constant";

inline IncomeDataset read_income_csv(std::istream& in, const IncomeLoadOptions& opt = {},
                                     std::string_view source = "income") {
  IncomeDataset ds;
  IncomeLayout layout = opt.layout;
  std::string line;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    auto text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      text.remove_prefix(1);
      text = trim(text);
      if (text.substr(0, kNormalizationKey.size()) == kNormalizationKey) {
        auto rest = trim(text.substr(kNormalizationKey.size()));
        if (!rest.empty() && (rest.front() == '=' || rest.front() == ':')) rest.remove_prefix(1);
        const auto c = parse_number(rest);
        if (!c || !(*c > 0.0) || !std::isfinite(*c)) {
          throw InputError(std::string(source) + ": bad normalization constant");
        }
        ds.normalization_constant = *c;
      }
      continue;
    }
    const auto cells = split_csv_line(text);
    if (first_row) {
      first_row = false;
      std::string lower(text);
      std::transform(lower.begin(), lower.end(), lower.begin(),
                     [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
      lower.erase(std::remove(lower.begin(), lower.end(), ' '), lower.end());
      if (lower == "income" || lower == "year,income") {
        const auto header_layout = lower == "income" ? IncomeLayout::kIncome : IncomeLayout::kYearIncome;
        if (layout != IncomeLayout::kAuto && layout != header_layout) {
          throw InputError(std::string(source) + ": header does not match the requested layout");
        }
        layout = header_layout;
        continue;
      }
      if (layout == IncomeLayout::kAuto) {
        layout = cells.size() == 2 ? IncomeLayout::kYearIncome : IncomeLayout::kIncome;
      }
    }
    ++rows;
    const std::size_t want = layout == IncomeLayout::kYearIncome ? 2 : 1;
    std::optional<double> value;
    std::optional<int> year;
    if (cells.size() == want) {
      value = parse_number(cells.back());
      if (want == 2) year = parse_int(cells.front());
    }
    const bool ok = value && std::isfinite(*value) && *value >= 0.0 && (want == 1 || year);
    if (!ok) {
      ++ds.malformed_rows;
      ds.malformed_lines.push_back(line_no);
      continue;
    }
    ds.raw.push_back(*value);
    if (want == 2) ds.years.push_back(*year);
  }
  if (rows == 0) throw InputError(std::string(source) + ": no income rows");
  const double fraction = static_cast<double>(ds.malformed_rows) / static_cast<double>(rows);
  if (opt.abort_on_malformed && fraction > opt.max_malformed_fraction) {
    throw InputError(std::string(source) + ": " + std::to_string(ds.malformed_rows) + " of " +
                     std::to_string(rows) + " rows are malformed");
  }
  if (ds.raw.empty()) throw InputError(std::string(source) + ": no valid income values");
  if (ds.normalization_constant) {
    for (double v : ds.raw) ds.normalized.push_back(v / *ds.normalization_constant);
  }
  return ds;
}

inline IncomeDataset load_income_csv(const std::string& path, const IncomeLoadOptions& opt = {}) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_income_csv(in, opt, path);
}

/// Writes the raw values; the normalization constant, if any, goes into a
/// comment line so that loading restores the normalized values.
inline void write_income_csv(std::ostream& out, const IncomeDataset& ds) {
  if (ds.normalization_constant) {
    out << "# " << kNormalizationKey << "=" << format_number(*ds.normalization_constant) << '\n';
  }
  const bool with_year = ds.years.size() == ds.raw.size() && !ds.years.empty();
  out << (with_year ? "year,income" : "income") << '\n';
  for (std::size_t i = 0; i < ds.raw.size(); ++i) {
    if (with_year) out << ds.years[i] << ',';
    out << format_number(ds.raw[i]) << '\n';
  }
}

inline void save_income_csv(const std::string& path, const IncomeDataset& ds) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  write_income_csv(out, ds);
}

inline IncomeDataset make_dataset(std::vector<double> values) {
  IncomeDataset ds;
  for (double v : values) {
    if (!(v >= 0.0 && std::isfinite(v))) throw InputError("incomes must be finite and >= 0");
  }
  ds.raw = std::move(values);
  return ds;
}

/// Divides every raw value by the constant, or by the sample mean if none.
inline IncomeDataset normalize(IncomeDataset ds, std::optional<double> constant = std::nullopt) {
  if (ds.raw.empty()) throw InputError("cannot normalize an empty dataset");
  double c = 0.0;
  if (constant) {
    if (!(*constant > 0.0 && std::isfinite(*constant))) {
      throw ParameterError("normalization constant must be positive");
    }
    c = *constant;
  } else {
    for (double v : ds.raw) c += v;
    c /= static_cast<double>(ds.raw.size());
    if (!(c > 0.0)) throw InputError("sample mean is zero; cannot normalize");
  }
  ds.normalization_constant = c;
  ds.normalized.resize(ds.raw.size());
  for (std::size_t i = 0; i < ds.raw.size(); ++i) ds.normalized[i] = ds.raw[i] / c;
  return ds;
}

/// x_d = 0.2 * minimum salary / normalization constant.
inline double unemployment_threshold(double min_salary, double normalization_constant) {
  if (!(min_salary > 0.0 && normalization_constant > 0.0)) {
    throw ParameterError("minimum salary and normalization constant must be positive");
  }
  return 0.2 * min_salary / normalization_constant;
}

}  // namespace gpgoodwin::data
