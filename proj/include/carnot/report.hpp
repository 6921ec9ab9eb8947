#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "carnot/group.hpp"
#include "json.hpp"

namespace carnot {

/// %.17g formatting used by every emitted file.
std::string format_double(double v);

/// Result of one scenario: a CSV table, invariant verdicts and an optional
/// plot series (r, value...).
class Report {
 public:
  Report(std::string operation, std::uint64_t seed);

  void set_columns(std::vector<std::string> columns);
  void add_row(std::vector<std::string> cells);
  void add_row(const Vec& values);

  /// Records an invariant. `value` and `bound` are informative.
  void add_invariant(const std::string& name, bool pass, double value, double bound,
                     const std::string& detail = {});
  /// Extra key/value pairs for the summary.
  void set_info(const std::string& key, nlohmann::ordered_json value);

  void set_series(std::vector<std::string> names, std::vector<Vec> rows);

  bool all_pass() const;
  const std::string& operation() const { return operation_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  const std::vector<Vec>& series() const { return series_; }
  const std::vector<std::string>& series_names() const { return series_names_; }

  std::string csv() const;
  nlohmann::ordered_json summary() const;

  void write_csv(const std::string& path) const;
  void write_summary(const std::string& path) const;

 private:
  std::string operation_;
  std::uint64_t seed_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  nlohmann::ordered_json invariants_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json info_ = nlohmann::ordered_json::object();
  std::vector<std::string> series_names_;
  std::vector<Vec> series_;
};

/// Whitespace-separated plot data, rows ordered by r (first value) descending.
/// Throws if the report has no series.
void emit_plot_data(const Report& report, const std::string& path);
std::string plot_data(const Report& report);

}  // namespace carnot
