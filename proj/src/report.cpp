#include "carnot/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "carnot/error.hpp"

namespace carnot {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io_error, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error(Errc::io_error, "write to '" + path + "' failed");
}

/// JSON numbers are written with 17 significant digits for reproducibility.
nlohmann::ordered_json num(double v) {
  if (!std::isfinite(v)) return format_double(v);
  return v;
}

}  // namespace

Report::Report(std::string operation, std::uint64_t seed)
    : operation_(std::move(operation)), seed_(seed) {}

void Report::set_columns(std::vector<std::string> columns) { columns_ = std::move(columns); }

void Report::add_row(std::vector<std::string> cells) {
  if (!columns_.empty() && cells.size() != columns_.size())
    throw Error(Errc::dimension_mismatch, "Report: row width does not match the header");
  rows_.push_back(std::move(cells));
}

void Report::add_row(const Vec& values) {
  std::vector<std::string> cells;
  for (double v : values) cells.push_back(format_double(v));
  add_row(std::move(cells));
}

void Report::add_invariant(const std::string& name, bool pass, double value, double bound,
                           const std::string& detail) {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["pass"] = pass;
  j["value"] = num(value);
  j["bound"] = num(bound);
  if (!detail.empty()) j["detail"] = detail;
  invariants_.push_back(std::move(j));
}

void Report::set_info(const std::string& key, nlohmann::ordered_json value) {
  info_[key] = std::move(value);
}

void Report::set_series(std::vector<std::string> names, std::vector<Vec> rows) {
  for (const Vec& r : rows)
    if (r.size() != names.size())
      throw Error(Errc::dimension_mismatch, "Report: series row width mismatch");
  series_names_ = std::move(names);
  series_ = std::move(rows);
}

bool Report::all_pass() const {
  return std::all_of(invariants_.begin(), invariants_.end(),
                     [](const nlohmann::ordered_json& j) { return j["pass"].get<bool>(); });
}

std::string Report::csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + csv_cell(columns_[i]);
  out += "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
    out += "\n";
  }
  return out;
}

nlohmann::ordered_json Report::summary() const {
  nlohmann::ordered_json j;
  j["operation"] = operation_;
  j["seed"] = seed_;
  j["pass"] = all_pass();
  j["invariants"] = invariants_;
  j["info"] = info_;
  return j;
}

void Report::write_csv(const std::string& path) const { write_text(path, csv()); }

void Report::write_summary(const std::string& path) const {
  write_text(path, summary().dump(2) + "\n");
}

std::string plot_data(const Report& report) {
  if (report.series().empty())
    throw Error(Errc::invalid_argument, "emit_plot_data: report has no (r, value) series");
  std::vector<Vec> rows = report.series();
  std::stable_sort(rows.begin(), rows.end(), [](const Vec& a, const Vec& b) { return a[0] > b[0]; });
  std::string out = "#";
  for (const auto& n : report.series_names()) out += " " + n;
  out += "\n";
  for (const Vec& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? " " : "") + format_double(r[i]);
    out += "\n";
  }
  return out;
}

void emit_plot_data(const Report& report, const std::string& path) {
  write_text(path, plot_data(report));
}

}  // namespace carnot
