#pragma once

// Runs the pipelines a scenario asks for and writes the artifacts (manifest,
// CSV tables, SVG figures) into one output directory.

#include "scenario.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace birkhoff::tools {

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct RunResult {
  std::vector<Check> checks;
  nlohmann::json manifest;
  std::filesystem::path directory;
  std::vector<std::string> files;

  bool pass() const;
};

/// $BIRKHOFF_OUTPUT_ROOT, or ./birkhoff_out when unset.
std::filesystem::path output_root();

/// Checks that depend on the map kind (e.g. hj needs a mechanical map).
/// Returns the problems found; empty means runnable.
std::vector<Diagnostic> semantic_problems(const Scenario& s);

/// Everything is written to a scratch directory first and moved to `dir`
/// once all stages finished, so a failed run leaves no partial output.
/// `threads` overrides the scenario's thread count when given.
RunResult run_scenario(const Scenario& s, const std::filesystem::path& dir,
                       std::optional<unsigned> threads = std::nullopt);

}  // namespace birkhoff::tools
