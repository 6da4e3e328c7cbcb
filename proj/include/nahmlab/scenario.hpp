#ifndef NAHMLAB_SCENARIO_HPP
#define NAHMLAB_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nahmlab/nahm.hpp"

namespace nahmlab {

// ---------------------------------------------------------------------------
// Scenario-driven front end. A scenario is a JSON file
//
//   { "schema": 1, "name": ..., "kind": "lie|nahm|gauge|metric|implode|acceptance",
//     "params": { ... }, "seed": N }
//
// Unknown fields are rejected so that regression baselines cannot drift
// silently. Reports are written with sorted keys and 17-significant-digit
// floats; two runs of the same scenario and seed produce identical bytes.
// ---------------------------------------------------------------------------

struct Scenario {
  int schema = 1;
  std::string name;
  std::string kind;
  std::uint64_t seed = 0;
  std::string params_json;  // canonicalized parameter object
};

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Report {
  Scenario scenario;
  std::map<std::string, double> results;
  std::map<std::string, std::string> notes;
  std::vector<Assertion> assertions;
  std::vector<std::string> artifacts;

  bool passed() const;
};

struct ScenarioParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text);

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the file's seed
  std::optional<int> grid_nodes;
  std::optional<double> t_max;
};

/// Executes a scenario and writes <name>_report.json plus any CSV artifacts
/// under out_dir. Throws ScenarioParseError for malformed input and
/// BlowUpError on numeric blow-up.
Report run_scenario(const std::string& path, const std::string& out_dir,
                    const RunOptions& opts = {});
Report run_parsed_scenario(const Scenario& sc, const std::string& out_dir,
                           const RunOptions& opts = {});

/// Deterministic export. JSON keys are sorted and floats printed with 17
/// significant digits; CSV uses '.' decimals and '\n' line endings.
std::string report_to_json(const Report& report);
void export_report(const Report& report, const std::string& out_dir,
                   std::vector<std::string>* written_paths = nullptr);

/// CSV schema for sampled quadruples: header "t,T0_00_re,T0_00_im,...",
/// one row per node, entries row-major.
std::string nahm_path_csv(const NahmPath& path);
std::string matrix_series_csv(const Grid& grid,
                              const std::vector<std::vector<CMatrix>>& series,
                              const std::vector<std::string>& names);
std::string scalar_series_csv(const Grid& grid,
                              const std::vector<std::vector<double>>& series,
                              const std::vector<std::string>& names);

/// Matrices in reports serialize as arrays of rows of [re, im] pairs.
std::string matrix_to_json(const CMatrix& m);

std::string format_double(double v);

}  // namespace nahmlab

#endif
