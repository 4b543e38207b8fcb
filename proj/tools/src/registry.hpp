#pragma once

// Named constructors for the map zoo, keyed by the names used in scenario
// files.

#include <birkhoff/annulus.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace birkhoff::tools {

struct MapSpec {
  std::string name;
  std::map<std::string, double> params;

  bool operator==(const MapSpec&) const = default;
};

struct MapInfo {
  std::string name;
  std::string summary;
  std::map<std::string, double> defaults;
};

const std::vector<MapInfo>& map_catalog();
const MapInfo* find_map(const std::string& name);

/// Parameters merged over the catalog defaults. Throws Error(Schema) on an
/// unknown map or parameter name.
std::map<std::string, double> resolved_params(const MapSpec& spec);
CESMap make_map(const MapSpec& spec);

/// Hyperbolic saddle whose unstable manifold closure is the attractor, for
/// the mechanical maps.
std::optional<AnnulusPoint> known_saddle(const MapSpec& spec);

/// Potential and discount rate of the discounted HJ problem whose
/// characteristic flow is the given map (mechanical maps only).
struct HJData {
  Potential V;
  double alpha;
};
std::optional<HJData> hj_data(const MapSpec& spec);

}  // namespace birkhoff::tools
