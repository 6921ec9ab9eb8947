#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/report.hpp"
#include "json.hpp"

namespace carnot {

/// Group spec JSON: {"name", "m", "n", "matrices": [n row-major m x m arrays],
/// "epsilon2"?}. Without epsilon2 the norm constant is calibrated with
/// `calibration_samples` pairs and `seed`.
GroupSpecB parse_group_spec(const std::string& path, std::uint64_t seed = 1,
                            std::size_t calibration_samples = 10000);
GroupSpecB group_from_json(const nlohmann::json& j, std::uint64_t seed = 1,
                           std::size_t calibration_samples = 10000);
nlohmann::ordered_json group_to_json(const GroupSpecB& g);
void write_group_spec(const GroupSpecB& g, const std::string& path);

struct Scenario {
  std::string operation;     ///< e.g. "pde broadstar"
  std::string spec_path;     ///< group spec file
  nlohmann::json params;     ///< operation parameters (scenario file contents)
  std::string out_prefix;    ///< writes <prefix>.csv, .summary.json, .plot.dat
  std::uint64_t seed = 1;
};

/// Operation names accepted by run_scenario.
const std::vector<std::string>& operation_names();

/// Reads a scenario file (JSON object). An empty path gives an empty object.
nlohmann::json load_scenario_params(const std::string& path);

/// Executes the operation on an already parsed group; no files are written.
Report run_operation(const std::string& operation, const GroupSpecB& g,
                     const nlohmann::json& params, std::uint64_t seed);

/// Parses the spec, runs, writes the report files. Returns the exit status:
/// 0 success, 2 invariant failure, 1 error (message on `err`).
int run_scenario(const Scenario& scenario, std::ostream& err);

}  // namespace carnot
