#pragma once

// Named scenarios behind `sim preset` and `sim run`.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfsim/cli/config.hpp"
#include "dfsim/io.hpp"

namespace dfsim::cli {

inline constexpr const char* kVersion = "0.1.0";

struct PresetInfo {
  std::string name;
  std::string summary;
};

[[nodiscard]] const std::vector<PresetInfo>& preset_catalog();
/// One line per preset, `name  summary`, in a fixed order.
[[nodiscard]] std::string list_presets();

struct ScenarioOutput {
  nlohmann::json report;
  std::vector<double> times;
  std::vector<CsvColumn> columns;
};

/// Runs a preset with parameters from `cfg`. Throws UsageError for unknown names.
[[nodiscard]] ScenarioOutput run_preset(const std::string& name, const Config& cfg);

/// Runs the preset named by cfg's `preset` key and writes trajectory.csv,
/// report.json and manifest.json into cfg's `out` directory.
/// Returns 0 on success, 2 on validation errors, 3 on numerical failures.
int run_scenario(const Config& cfg, std::ostream& log, std::ostream& err);

}  // namespace dfsim::cli
