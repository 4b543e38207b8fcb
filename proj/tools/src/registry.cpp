#include "registry.hpp"

#include <birkhoff/error.hpp>

namespace birkhoff::tools {

const std::vector<MapInfo>& map_catalog() {
  static const std::vector<MapInfo> catalog = {
      {"trivial_contraction", "(q, p) -> (q, a p)", {{"a", 0.5}}},
      {"dissipative_standard",
       "P = a p + k V'(q), Q = q + P + omega with V = -A cos(2 pi q) / (2 pi)^2",
       {{"a", 0.5}, {"k", 0.9}, {"omega", 0.0}, {"amplitude", 1.0}}},
      {"damped_mechanical", "time-T map of q'' = -V'(q) - friction q', cosine potential",
       {{"friction", 1.0}, {"amplitude", 1.0}, {"dt", 0.05}, {"T", 1.0}}},
      {"damped_pendulum", "damped pendulum in q = theta / 2 pi, saddle at q = 1/2",
       {{"friction", 1.0}, {"dt", 0.05}, {"T", 1.0}}},
      {"whisker", "synthetic dissipative map with a one-sided hair at q = 1/2",
       {{"a", 0.5}, {"beta", 0.5}, {"height", 0.5}, {"growth", 0.8}, {"width", 0.08}, {"band", 0.8}}},
  };
  return catalog;
}

const MapInfo* find_map(const std::string& name) {
  for (const auto& m : map_catalog())
    if (m.name == name) return &m;
  return nullptr;
}

std::map<std::string, double> resolved_params(const MapSpec& spec) {
  const MapInfo* info = find_map(spec.name);
  if (!info) throw Error(ErrorKind::Schema, "unknown map '" + spec.name + "'");
  std::map<std::string, double> p = info->defaults;
  for (const auto& [key, value] : spec.params) {
    if (!p.count(key))
      throw Error(ErrorKind::Schema, "map '" + spec.name + "' has no parameter '" + key + "'");
    p[key] = value;
  }
  return p;
}

CESMap make_map(const MapSpec& spec) {
  const auto p = resolved_params(spec);
  if (spec.name == "trivial_contraction") return make_trivial_contraction(p.at("a"));
  if (spec.name == "dissipative_standard")
    return make_dissipative_standard(p.at("a"), p.at("k"), cosine_potential(p.at("amplitude")),
                                     p.at("omega"));
  if (spec.name == "damped_mechanical")
    return make_damped_mechanical(cosine_potential(p.at("amplitude")), p.at("friction"),
                                  p.at("dt"), p.at("T"));
  if (spec.name == "damped_pendulum")
    return make_damped_pendulum(p.at("friction"), p.at("dt"), p.at("T"));
  WhiskerParams w;
  w.a = p.at("a");
  w.beta = p.at("beta");
  w.height = p.at("height");
  w.growth = p.at("growth");
  w.width = p.at("width");
  w.band = p.at("band");
  return make_whisker_map(w);
}

std::optional<AnnulusPoint> known_saddle(const MapSpec& spec) {
  if (spec.name == "damped_pendulum" || spec.name == "damped_mechanical")
    return AnnulusPoint{0.5, 0.0};
  return std::nullopt;
}

std::optional<HJData> hj_data(const MapSpec& spec) {
  const auto p = resolved_params(spec);
  if (spec.name == "damped_pendulum") return HJData{cosine_potential(1.0), p.at("friction")};
  if (spec.name == "damped_mechanical")
    return HJData{cosine_potential(p.at("amplitude")), p.at("friction")};
  return std::nullopt;
}

}  // namespace birkhoff::tools
