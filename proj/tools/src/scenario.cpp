#include "scenario.hpp"

#include <birkhoff/error.hpp>

#include <fstream>
#include <functional>
#include <set>

namespace birkhoff::tools {

using nlohmann::json;

const std::vector<std::string>& pipeline_names() {
  static const std::vector<std::string> names = {"attractor", "spectral", "fixedpoint",
                                                 "hj",        "validate", "all"};
  return names;
}

SchemaError::SchemaError(std::vector<Diagnostic> d)
    : std::runtime_error("scenario schema violation"), diags_(std::move(d)) {}

json SchemaError::to_json() const {
  json list = json::array();
  for (const auto& d : diags_) list.push_back({{"path", d.path}, {"message", d.message}});
  return {{"error", "schema"}, {"diagnostics", list}};
}

namespace {

class Reader {
 public:
  std::vector<Diagnostic> diags;

  void fail(const std::string& path, const std::string& msg) { diags.push_back({path, msg}); }

  bool object(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    for (const auto& [key, _] : j.items())
      if (!allowed.count(key)) fail(path + "/" + key, "unknown key");
    return true;
  }

  template <class T>
  void number(const json& j, const std::string& key, const std::string& path, T& out,
              std::function<bool(T)> ok = {}, const char* rule = "") {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    const std::string p = path + "/" + key;
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) return fail(p, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.get<long long>() < 0) return fail(p, "expected a non-negative integer");
      }
    } else if (!v.is_number()) {
      return fail(p, "expected a number");
    }
    const T val = v.get<T>();
    if (ok && !ok(val)) return fail(p, rule);
    out = val;
  }

  void string(const json& j, const std::string& key, const std::string& path, std::string& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_string()) return fail(path + "/" + key, "expected a string");
    out = j.at(key).get<std::string>();
  }
};

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Scenario parse_scenario(const json& j) {
  Reader r;
  Scenario s;
  if (!r.object(j, "", {"schema_version", "name", "description", "map", "grid", "pipeline",
                        "tolerances", "options", "output", "seed", "threads"}))
    throw SchemaError(r.diags);

  if (!j.contains("schema_version")) r.fail("/schema_version", "required");
  r.number<int>(j, "schema_version", "", s.schema_version,
                [](int v) { return v == kScenarioSchemaVersion; }, "unsupported schema version");
  if (!j.contains("name")) r.fail("/name", "required");
  r.string(j, "name", "", s.name);
  if (j.contains("name") && j["name"].is_string() && s.name.empty()) r.fail("/name", "empty");
  r.string(j, "description", "", s.description);
  r.string(j, "pipeline", "", s.pipeline);
  {
    const auto& names = pipeline_names();
    if (std::find(names.begin(), names.end(), s.pipeline) == names.end())
      r.fail("/pipeline", "unknown pipeline '" + s.pipeline + "'");
  }
  r.string(j, "output", "", s.output);
  if (s.output.find("..") != std::string::npos || (!s.output.empty() && s.output[0] == '/'))
    r.fail("/output", "must be a relative path without '..'");
  r.number<std::uint64_t>(j, "seed", "", s.seed);
  r.number<unsigned>(j, "threads", "", s.threads);

  if (!j.contains("map")) {
    r.fail("/map", "required");
  } else if (r.object(j["map"], "/map", {"name", "params"})) {
    const json& m = j["map"];
    if (!m.contains("name")) r.fail("/map/name", "required");
    r.string(m, "name", "/map", s.map.name);
    if (m.contains("params")) {
      if (!m["params"].is_object()) {
        r.fail("/map/params", "expected an object");
      } else {
        for (const auto& [key, v] : m["params"].items()) {
          if (!v.is_number()) r.fail("/map/params/" + key, "expected a number");
          else s.map.params[key] = v.get<double>();
        }
      }
    }
    if (!s.map.name.empty()) {
      try {
        (void)make_map(s.map);
      } catch (const Error& e) {
        r.fail("/map", e.what());
      }
    }
  }

  if (j.contains("grid") && r.object(j["grid"], "/grid", {"nq", "np", "band"})) {
    const json& g = j["grid"];
    auto pow2 = [](int v) { return power_of_two(v) && v >= 8 && v <= 4096; };
    r.number<int>(g, "nq", "/grid", s.grid.nq, pow2, "must be a power of two in [8, 4096]");
    r.number<int>(g, "np", "/grid", s.grid.np, pow2, "must be a power of two in [8, 4096]");
    if (g.contains("band") && !g["band"].is_null()) {
      double band = 0.0;
      r.number<double>(g, "band", "/grid", band, [](double v) { return v > 0.0; },
                       "must be positive");
      if (band > 0.0) s.grid.band = band;
    }
  }

  if (j.contains("tolerances") &&
      r.object(j["tolerances"], "/tolerances",
               {"hausdorff_cells", "reference_cells", "inclusion_cells", "fixed_point", "hj",
                "duality", "graph_oracle"})) {
    const json& t = j["tolerances"];
    const std::string p = "/tolerances";
    auto pos = [](double v) { return v > 0.0; };
    r.number<double>(t, "hausdorff_cells", p, s.tolerances.hausdorff_cells, pos, "must be positive");
    r.number<double>(t, "reference_cells", p, s.tolerances.reference_cells, pos, "must be positive");
    r.number<int>(t, "inclusion_cells", p, s.tolerances.inclusion_cells,
                  [](int v) { return v >= 0; }, "must be non-negative");
    r.number<double>(t, "fixed_point", p, s.tolerances.fixed_point, pos, "must be positive");
    r.number<double>(t, "hj", p, s.tolerances.hj, pos, "must be positive");
    r.number<double>(t, "duality", p, s.tolerances.duality, pos, "must be positive");
    r.number<double>(t, "graph_oracle", p, s.tolerances.graph_oracle, pos, "must be positive");
  }

  if (j.contains("options") &&
      r.object(j["options"], "/options",
               {"conley_iterations", "birkhoff_slack", "n_max", "rotation_orbit",
                "rotation_boot", "spectral_pairs", "spectral_nq", "generating_steps", "hj_n",
                "arc_budget"})) {
    const json& o = j["options"];
    const std::string p = "/options";
    auto nonneg = [](int v) { return v >= 0; };
    auto positive = [](int v) { return v > 0; };
    r.number<int>(o, "conley_iterations", p, s.options.conley_iterations, nonneg, "must be >= 0");
    r.number<int>(o, "birkhoff_slack", p, s.options.birkhoff_slack, nonneg, "must be >= 0");
    r.number<int>(o, "n_max", p, s.options.n_max, positive, "must be positive");
    r.number<int>(o, "rotation_orbit", p, s.options.rotation_orbit,
                  [](int v) { return v >= 80; }, "must be >= 80");
    r.number<int>(o, "rotation_boot", p, s.options.rotation_boot, positive, "must be positive");
    r.number<int>(o, "spectral_pairs", p, s.options.spectral_pairs, nonneg, "must be >= 0");
    r.number<int>(o, "spectral_nq", p, s.options.spectral_nq,
                  [](int v) { return v >= 16; }, "must be >= 16");
    r.number<int>(o, "generating_steps", p, s.options.generating_steps,
                  [](int v) { return v >= 0 && v <= 6; }, "must be in [0, 6]");
    r.number<int>(o, "hj_n", p, s.options.hj_n, [](int v) { return v >= 16; }, "must be >= 16");
    r.number<double>(o, "arc_budget", p, s.options.arc_budget,
                     [](double v) { return v > 0.0; }, "must be positive");
  }

  if (!r.diags.empty()) throw SchemaError(r.diags);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError({{"", "cannot open scenario file '" + path + "'"}});
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError({{"", std::string("malformed JSON: ") + e.what()}});
  }
  return parse_scenario(j);
}

json to_json(const Scenario& s) {
  json params = json::object();
  for (const auto& [k, v] : s.map.params) params[k] = v;
  json grid = {{"nq", s.grid.nq}, {"np", s.grid.np}};
  grid["band"] = s.grid.band ? json(*s.grid.band) : json(nullptr);
  const auto& t = s.tolerances;
  const auto& o = s.options;
  return {
      {"schema_version", s.schema_version},
      {"name", s.name},
      {"description", s.description},
      {"map", {{"name", s.map.name}, {"params", params}}},
      {"grid", grid},
      {"pipeline", s.pipeline},
      {"tolerances",
       {{"hausdorff_cells", t.hausdorff_cells},
        {"reference_cells", t.reference_cells},
        {"inclusion_cells", t.inclusion_cells},
        {"fixed_point", t.fixed_point},
        {"hj", t.hj},
        {"duality", t.duality},
        {"graph_oracle", t.graph_oracle}}},
      {"options",
       {{"conley_iterations", o.conley_iterations},
        {"birkhoff_slack", o.birkhoff_slack},
        {"n_max", o.n_max},
        {"rotation_orbit", o.rotation_orbit},
        {"rotation_boot", o.rotation_boot},
        {"spectral_pairs", o.spectral_pairs},
        {"spectral_nq", o.spectral_nq},
        {"generating_steps", o.generating_steps},
        {"hj_n", o.hj_n},
        {"arc_budget", o.arc_budget}}},
      {"output", s.output},
      {"seed", s.seed},
      {"threads", s.threads},
  };
}

}  // namespace birkhoff::tools
