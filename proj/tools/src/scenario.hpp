#pragma once

// Scenario files: one JSON object describing a map, a grid, the pipeline to
// run and its tolerances. Parsing is strict (unknown keys are rejected) and
// to_json(parse(x)) is a fixed point.

#include "registry.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace birkhoff::tools {

inline constexpr int kScenarioSchemaVersion = 1;

struct GridSpec {
  int nq = 256;
  int np = 256;
  std::optional<double> band;  // default: the map's trapping band

  bool operator==(const GridSpec&) const = default;
};

struct Tolerances {
  double hausdorff_cells = 5.0;   // B versus B-infinity estimate
  double reference_cells = 3.0;   // B versus a known reference set
  int inclusion_cells = 3;        // graph of du versus B
  double fixed_point = 1e-6;      // target tail bound
  double hj = 1e-10;              // value-iteration tolerance
  double duality = 1e-6;
  double graph_oracle = 1e-3;

  bool operator==(const Tolerances&) const = default;
};

struct PipelineOptions {
  int conley_iterations = 200;
  int birkhoff_slack = 1;
  int n_max = 60;
  int rotation_orbit = 4000;
  int rotation_boot = 200;
  int spectral_pairs = 10;
  int spectral_nq = 1024;
  int generating_steps = 3;  // broken-geodesic branes n = 1..steps
  int hj_n = 512;
  double arc_budget = 50.0;

  bool operator==(const PipelineOptions&) const = default;
};

struct Scenario {
  int schema_version = kScenarioSchemaVersion;
  std::string name;
  std::string description;
  MapSpec map;
  GridSpec grid;
  std::string pipeline = "all";
  Tolerances tolerances;
  PipelineOptions options;
  std::string output;  // directory below the output root; default: name
  std::uint64_t seed = 1;
  unsigned threads = 0;

  bool operator==(const Scenario&) const = default;
};

const std::vector<std::string>& pipeline_names();

struct Diagnostic {
  std::string path;
  std::string message;
};

/// Throws SchemaError listing every problem found.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(std::vector<Diagnostic> d);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }
  nlohmann::json to_json() const;

 private:
  std::vector<Diagnostic> diags_;
};

Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);
nlohmann::json to_json(const Scenario& s);

}  // namespace birkhoff::tools
