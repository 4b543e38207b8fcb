#include "pipeline.hpp"

#include "report.hpp"

#include <birkhoff/discounted_hj.hpp>
#include <birkhoff/error.hpp>
#include <birkhoff/fixed_point.hpp>
#include <birkhoff/parallel.hpp>
#include <birkhoff/rotation.hpp>
#include <birkhoff/spectral.hpp>
#include <birkhoff/unstable_manifold.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <random>

#ifndef BIRKHOFF_VERSION
#define BIRKHOFF_VERSION "unknown"
#endif

namespace birkhoff::tools {

namespace fs = std::filesystem;
using nlohmann::json;

bool RunResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

fs::path output_root() {
  const char* env = std::getenv("BIRKHOFF_OUTPUT_ROOT");
  return env && *env ? fs::path(env) : fs::path("birkhoff_out");
}

namespace {

bool wants(const Scenario& s, const char* stage) {
  return s.pipeline == "all" || s.pipeline == stage;
}

std::string fmt(double v) { return format_number(v); }

json cellset_json(const CellSet& c) {
  return {{"label", to_string(c.label)},
          {"nq", c.grid.nq},
          {"np", c.grid.np},
          {"band", c.grid.band},
          {"cells", c.count()},
          {"rle", run_length_encode(c)}};
}

// Random trigonometric polynomial with at most `harmonics` modes.
struct TrigPoly {
  std::vector<double> a, b;

  double value(double q) const {
    double s = 0.0;
    for (std::size_t h = 0; h < a.size(); ++h) {
      const double w = 2.0 * M_PI * static_cast<double>(h + 1);
      s += a[h] * std::cos(w * q) + b[h] * std::sin(w * q);
    }
    return s;
  }
  double slope(double q) const {
    double s = 0.0;
    for (std::size_t h = 0; h < a.size(); ++h) {
      const double w = 2.0 * M_PI * static_cast<double>(h + 1);
      s += w * (-a[h] * std::sin(w * q) + b[h] * std::cos(w * q));
    }
    return s;
  }
  double curvature(double q) const {
    double s = 0.0;
    for (std::size_t h = 0; h < a.size(); ++h) {
      const double w = 2.0 * M_PI * static_cast<double>(h + 1);
      s -= w * w * (a[h] * std::cos(w * q) + b[h] * std::sin(w * q));
    }
    return s;
  }
  Periodic1D function() const {
    const TrigPoly self = *this;
    return {[self](double q) { return self.value(q); },
            [self](double q) { return self.slope(q); },
            [self](double q) { return self.curvature(q); }};
  }
};

TrigPoly random_trig(std::mt19937_64& rng, int max_harmonics, double scale) {
  std::uniform_int_distribution<int> modes(1, max_harmonics);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  TrigPoly t;
  const int m = modes(rng);
  for (int h = 1; h <= m; ++h) {
    t.a.push_back(scale * coef(rng) / h);
    t.b.push_back(scale * coef(rng) / h);
  }
  return t;
}

// max - min of a smooth periodic function by dense sampling with a
// parabolic correction at the extreme samples.
double dense_oscillation(const std::function<double(double)>& f, int n = 1 << 16) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = f(static_cast<double>(i) / n);
  auto refine = [&](std::size_t i, double sign) {
    const double a = v[(i + v.size() - 1) % v.size()], b = v[i], c = v[(i + 1) % v.size()];
    const double den = a - 2.0 * b + c;
    if (sign * den >= 0.0) return b;
    return b - 0.125 * (c - a) * (c - a) / den;
  };
  const auto lo = std::min_element(v.begin(), v.end()) - v.begin();
  const auto hi = std::max_element(v.begin(), v.end()) - v.begin();
  return refine(static_cast<std::size_t>(hi), -1.0) - refine(static_cast<std::size_t>(lo), 1.0);
}

class Runner {
 public:
  Runner(const Scenario& s, fs::path dir) : s_(s), dir_(std::move(dir)), map_(make_map(s.map)) {
    const double band = s.grid.band.value_or(map_.trapping_band);
    if (!std::isfinite(band))
      throw Error(ErrorKind::NotTrapping, "map has no trapping band; set grid.band");
    grid_ = CellGrid(s.grid.nq, s.grid.np, band);
  }

  RunResult run() {
    if (wants(s_, "attractor") || wants(s_, "hj") || wants(s_, "validate")) timed("attractor", [&] { attractor(); });
    if (wants(s_, "spectral")) timed("spectral", [&] { spectral(); });
    if (wants(s_, "fixedpoint") && map_.a < 1.0) timed("fixedpoint", [&] { fixedpoint(); });
    if (wants(s_, "hj") && hj_data(s_.map)) timed("hj", [&] { hj(); });
    if (wants(s_, "validate") && map_.dissipative()) timed("validate", [&] { validate(); });

    CsvTable checks({"check", "value", "tolerance", "pass", "note"});
    json jc = json::array();
    for (const auto& c : result_.checks) {
      checks.row({c.name, fmt(c.value), fmt(c.tolerance), c.pass ? "1" : "0", c.note});
      jc.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance},
                    {"pass", c.pass}, {"note", c.note}});
    }
    file("checks.csv", checks.str());

    json map_json = {{"name", s_.map.name}, {"a", map_.a}, {"trapping_band", map_.trapping_band},
                     {"twist", map_.twist}, {"conformal", map_.conformal}};
    json params = json::object();
    for (const auto& [k, v] : resolved_params(s_.map)) params[k] = v;
    map_json["params"] = params;
    result_.manifest = {
        {"manifest_version", 1},
        {"software", {{"name", "birkhoff"}, {"version", BIRKHOFF_VERSION}}},
        {"scenario", to_json(s_)},
        {"map", map_json},
        {"grid", {{"nq", grid_.nq}, {"np", grid_.np}, {"band", grid_.band}}},
        {"seed", s_.seed},
        {"results", results_},
        {"cellsets", cellsets_},
        {"checks", jc},
        {"pass", result_.pass()},
    };
    files_.push_back("manifest.json");
    files_.push_back("timings.json");
    std::sort(files_.begin(), files_.end());
    result_.manifest["files"] = files_;
    write_text(dir_ / "manifest.json", result_.manifest.dump(2) + "\n");

    // Wall-clock data lives in its own file so the manifest stays
    // reproducible byte for byte.
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    write_text(dir_ / "timings.json",
               json({{"finished_utc", stamp}, {"threads", thread_count()}, {"stages", timings_}})
                       .dump(2) +
                   "\n");
    result_.files = files_;
    return result_;
  }

 private:
  void timed(const char* name, const std::function<void()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    timings_[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  void check(std::string name, double value, double tol, bool pass, std::string note = "") {
    result_.checks.push_back({std::move(name), value, tol, pass, std::move(note)});
  }

  void file(const std::string& name, const std::string& text) {
    write_text(dir_ / name, text);
    files_.push_back(name);
  }

  void attractor() {
    b0_ = conley_attractor(map_, grid_, s_.options.conley_iterations);
    sets_ = birkhoff_attractor(map_, b0_, s_.options.birkhoff_slack);
    const CellSet& B = sets_.birkhoff;
    json res = {{"b0_cells", b0_.count()}, {"birkhoff_cells", B.count()}};

    check("birkhoff_subset_b0", is_subset(B, b0_) ? 1 : 0, 1, is_subset(B, b0_));
    check("birkhoff_every_column", occupies_every_column(B) ? 1 : 0, 1, occupies_every_column(B));

    std::vector<SvgPolyline> lines;
    if (s_.map.name == "trivial_contraction") {
      std::vector<AnnulusPoint> zs;
      for (int i = 0; i < 4 * grid_.nq; ++i) zs.push_back({(i + 0.5) / (4 * grid_.nq), 0.0});
      const double d = hausdorff_distance(B, zs) / grid_.cell_diameter();
      res["hausdorff_to_zero_section_cells"] = d;
      check("birkhoff_vs_zero_section", d, s_.tolerances.reference_cells,
            d <= s_.tolerances.reference_cells);
    }
    if (const auto saddle = known_saddle(s_.map)) {
      const UnstableManifold w = unstable_manifold(map_, *saddle, s_.options.arc_budget);
      const auto pts = manifold_points(w);
      const double d = hausdorff_distance(B, pts) / grid_.cell_diameter();
      res["hausdorff_to_unstable_manifold_cells"] = d;
      res["unstable_eigenvalue"] = w.lambda_u;
      check("birkhoff_vs_unstable_manifold", d, s_.tolerances.reference_cells,
            d <= s_.tolerances.reference_cells);
      for (const auto& br : w.branches) {
        std::vector<AnnulusPoint> p;
        for (const auto& z : br) p.push_back(project(z));
        lines.push_back({p, "#c0392b", 0.8});
      }
    }

    CsvTable sets({"label", "nq", "np", "band", "cells", "every_column"});
    for (const CellSet* c : {&b0_, &sets_.uplus, &sets_.uminus, &sets_.birkhoff}) {
      sets.row({to_string(c->label), std::to_string(grid_.nq), std::to_string(grid_.np),
                fmt(grid_.band), std::to_string(c->count()),
                occupies_every_column(*c) ? "1" : "0"});
      cellsets_[to_string(c->label)] = cellset_json(*c);
    }
    file("cellsets.csv", sets.str());

    if (map_.twist) {
      try {
        const auto [bp, bm] = accessible_sets(B, sets_.uplus, sets_.uminus);
        RotationOptions ro;
        ro.seed = s_.seed;
        const RotationEstimate r =
            rotation_numbers(map_, bp, bm, s_.options.rotation_orbit, s_.options.rotation_boot, ro);
        CsvTable rot({"rho_plus", "rho_minus", "err_bound", "n_orbit", "charpentier_positive"});
        rot.row({fmt(r.rho_plus), fmt(r.rho_minus), fmt(r.err_bound), std::to_string(r.n_orbit),
                 r.charpentier_positive ? "1" : "0"});
        file("rotation.csv", rot.str());
        res["rotation"] = {{"rho_plus", r.rho_plus}, {"rho_minus", r.rho_minus},
                           {"err_bound", r.err_bound}, {"n_orbit", r.n_orbit},
                           {"charpentier_positive", r.charpentier_positive}};
        const double slack = r.rho_minus - r.rho_plus - 2.0 * r.err_bound;
        check("rotation_ordering", slack, 0.0, slack <= 0.0);
      } catch (const Error& e) {
        res["rotation"] = {{"error", e.what()}};
        check("rotation_ordering", 0, 0, false, e.what());
      }
    }
    results_["attractor"] = res;
    file("attractor.svg",
         render_svg(grid_, s_.name + ": B0 (light) and Birkhoff attractor (dark)",
                    {{&b0_, "#9ecae1", 1.0}, {&sets_.birkhoff, "#08306b", 1.0}}, lines));
  }

  void spectral() {
    std::mt19937_64 rng(s_.seed);
    const int nq = s_.options.spectral_nq;
    struct Brane {
      std::string id;
      BraneGF gf;
      std::optional<TrigPoly> poly;
    };
    std::vector<Brane> branes;
    for (int i = 0; i < 2 * s_.options.spectral_pairs; ++i) {
      const TrigPoly t = random_trig(rng, 5, 0.1);
      branes.push_back({"graph" + std::to_string(i), {graph_gf(t.function(), nq), 0.0}, t});
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (int i = 0; i < s_.options.spectral_pairs; ++i)
      pairs.emplace_back(2 * static_cast<std::size_t>(i), 2 * static_cast<std::size_t>(i) + 1);
    if (map_.primitive_step && s_.options.generating_steps > 0) {
      const std::size_t first = branes.size();
      branes.push_back({"zero", {graph_gf([](double) { return 0.0; }, nq), 0.0}, std::nullopt});
      BrokenGeodesicOptions bo;
      bo.nq = nq;
      for (int n = 1; n <= s_.options.generating_steps; ++n) {
        branes.push_back({"psi^" + std::to_string(n),
                          {reduce(broken_geodesic_gf(map_, n, std::nullopt, bo)), 0.0},
                          std::nullopt});
        pairs.emplace_back(branes.size() - 2, branes.size() - 1);
      }
      if (!pairs.empty() && s_.options.spectral_pairs > 0) pairs.emplace_back(0, first + 1);
    }

    CsvTable table({"id1", "id2", "c_minus_raw", "c_minus", "c_plus_raw", "c_plus", "gamma", "c",
                    "method"});
    int ls_violations = 0;
    double worst_duality = 0.0, worst_oracle = 0.0;
    for (const auto& [i, j] : pairs) {
      const Brane& l1 = branes[i];
      const Brane& l2 = branes[j];
      const SpectralPair sp = spectral_pair(l1.gf, l2.gf);
      const SpectralPair back = spectral_pair(l2.gf, l1.gf);
      table.row({l1.id, l2.id, fmt(sp.c_minus_raw), fmt(sp.c_minus), fmt(sp.c_plus_raw),
                 fmt(sp.c_plus), fmt(sp.gamma()), fmt(sp.c()), sp.method});
      if (sp.c_plus < sp.c_minus) ++ls_violations;
      worst_duality = std::max(worst_duality, std::abs(sp.c_plus + back.c_minus));
      if (l1.poly && l2.poly) {
        const TrigPoly f = *l1.poly, g = *l2.poly;
        const double osc = dense_oscillation([&](double q) { return g.value(q) - f.value(q); });
        worst_oracle = std::max(worst_oracle, std::abs(sp.gamma() - osc) / (1.0 + osc));
      }
    }
    file("spectral_pairs.csv", table.str());
    results_["spectral"] = {{"pairs", pairs.size()}, {"ls_violations", ls_violations},
                            {"max_duality_error", worst_duality},
                            {"max_graph_oracle_error", worst_oracle}};
    check("ls_ordering", ls_violations, 0, ls_violations == 0);
    check("duality", worst_duality, s_.tolerances.duality, worst_duality <= s_.tolerances.duality);
    check("graph_oracle", worst_oracle, s_.tolerances.graph_oracle,
          worst_oracle <= s_.tolerances.graph_oracle);
  }

  void fixedpoint() {
    const CompletionElement ce =
        iterate_to_fixed_point(map_, zero_section(), s_.tolerances.fixed_point, s_.options.n_max);
    std::vector<double> gaps;
    std::string gap_note;
    if (map_.primitive_step && s_.options.generating_steps > 0) {
      try {
        BrokenGeodesicOptions bo;
        bo.nq = s_.options.spectral_nq;
        gaps = gamma_gaps(map_, std::min(s_.options.generating_steps, ce.n_used), bo);
      } catch (const Error& e) {
        gap_note = e.what();
      }
    }
    CsvTable table({"n", "vertices", "tail_bound", "area_gap_prev", "gamma_gap"});
    for (int n = 0; n <= ce.n_used; ++n) {
      const auto k = static_cast<std::size_t>(n);
      table.row({std::to_string(n), std::to_string(ce.iterates[k].size()),
                 fmt(ce.tail_bounds[k]),
                 n > 0 ? fmt(area_gap(ce.iterates[k - 1], ce.iterates[k])) : "",
                 k < gaps.size() ? fmt(gaps[k]) : ""});
    }
    file("iterates.csv", table.str());
    results_["fixed_point"] = {{"gamma01", ce.gamma01},   {"a", ce.a},
                               {"n_used", ce.n_used},     {"tail_bound", ce.tail_bound()},
                               {"overflow", ce.overflow}, {"gamma_method", ce.gamma_method}};
    check("tail_bound", ce.tail_bound(), s_.tolerances.fixed_point,
          ce.tail_bound() <= s_.tolerances.fixed_point,
          ce.overflow ? "stopped by the curve vertex budget" : "");
    if (map_.primitive_step && s_.options.generating_steps > 0) {
      double worst = gaps.size() < 2 ? std::numeric_limits<double>::infinity() : 0.0;
      for (std::size_t n = 1; n < gaps.size(); ++n)
        worst = std::max(worst, gaps[n] / (std::pow(map_.a, static_cast<double>(n)) * gaps[0]));
      check("gamma_gap_contraction", worst, 1.02, worst <= 1.02, gap_note);
    }
    std::vector<SvgPolyline> lines;
    const int shown = std::min(ce.n_used, 6);
    for (int n = ce.n_used - shown; n <= ce.n_used; ++n) {
      const double t = shown ? static_cast<double>(n - ce.n_used + shown) / shown : 1.0;
      char color[16];
      std::snprintf(color, sizeof color, "#%02x%02x%02x", static_cast<int>(200 * (1 - t)),
                    static_cast<int>(60 + 60 * t), static_cast<int>(120 + 100 * t));
      lines.push_back({curve_points(ce.iterates[static_cast<std::size_t>(n)]), color, 0.8});
    }
    file("iterates.svg", render_svg(grid_, s_.name + ": curve iterates psi^n(O)", {}, lines));
  }

  void hj() {
    const HJData data = *hj_data(s_.map);
    HJOptions ho;
    ho.n = s_.options.hj_n;
    ho.tol = s_.tolerances.hj;
    const DiscountedSolution sol = solve_discounted(data.V, data.alpha, ho);
    CsvTable table({"q", "u", "du_left", "du_right"});
    for (std::size_t i = 0; i < sol.q.size(); ++i)
      table.row({fmt(sol.q[i]), fmt(sol.u[i]), fmt(sol.du_left[i]), fmt(sol.du_right[i])});
    file("hj_solution.csv", table.str());
    const InclusionReport inc =
        check_graph_in_attractor(sol, sets_.birkhoff, s_.tolerances.inclusion_cells);
    results_["hj"] = {{"alpha", sol.alpha},         {"dt", sol.dt},
                      {"residual", sol.residual},   {"lipschitz", sol.lipschitz},
                      {"lipschitz_bound", sol.lipschitz_bound},
                      {"inclusion_fraction", inc.fraction},
                      {"inclusion_worst_cells", inc.worst_cells}};
    const double target = s_.tolerances.hj * (1.0 - sol.discount);
    check("hj_residual", sol.residual, target, sol.residual <= target);
    check("hj_graph_in_attractor", inc.fraction, 1.0, inc.pass);
    std::vector<AnnulusPoint> graph;
    for (std::size_t i = 0; i < sol.q.size(); ++i) graph.push_back({sol.q[i], sol.du_right[i]});
    file("hj.svg", render_svg(grid_, s_.name + ": graph of du over the Birkhoff attractor",
                              {{&sets_.birkhoff, "#9ecae1", 1.0}}, {{graph, "#d35400", 1.2}}));
  }

  void validate() {
    ValidationOptions vo;
    vo.conley_iterations = s_.options.conley_iterations;
    vo.birkhoff_slack = s_.options.birkhoff_slack;
    vo.tol = s_.tolerances.fixed_point;
    vo.n_max = s_.options.n_max;
    const ValidationReport r =
        validate_equivalence(map_, grid_, s_.tolerances.hausdorff_cells, vo);
    CsvTable table({"gamma01", "a", "n_used", "tail_bound", "hausdorff", "hausdorff_cells",
                    "per_column_max", "pass"});
    table.row({fmt(r.gamma01), fmt(r.a), std::to_string(r.n_used), fmt(r.tail_bound),
               fmt(r.hausdorff), fmt(r.hausdorff_cells), std::to_string(r.per_column_max),
               r.pass ? "1" : "0"});
    file("validation.csv", table.str());
    results_["validation"] = {{"gamma01", r.gamma01},     {"a", r.a},
                              {"n_used", r.n_used},       {"tail_bound", r.tail_bound},
                              {"hausdorff", r.hausdorff}, {"hausdorff_cells", r.hausdorff_cells},
                              {"per_column_max", r.per_column_max}, {"pass", r.pass}};
    cellsets_["BinftyEstimate"] = cellset_json(r.binfty);
    check("binfty_equals_birkhoff", r.hausdorff_cells, s_.tolerances.hausdorff_cells, r.pass);
    check("binfty_every_column", occupies_every_column(r.binfty) ? 1 : 0, 1,
          occupies_every_column(r.binfty));
    file("validation.svg",
         render_svg(grid_, s_.name + ": grid B (light) and B-infinity estimate (dark)",
                    {{&r.birkhoff, "#9ecae1", 1.0}, {&r.binfty, "#08306b", 1.0}}));
  }

  const Scenario& s_;
  fs::path dir_;
  CESMap map_;
  CellGrid grid_;
  CellSet b0_;
  BirkhoffSets sets_;
  RunResult result_;
  json results_ = json::object();
  json cellsets_ = json::object();
  json timings_ = json::object();
  std::vector<std::string> files_;
};

}  // namespace

std::vector<Diagnostic> semantic_problems(const Scenario& s) {
  std::vector<Diagnostic> out;
  CESMap map;
  try {
    map = make_map(s.map);
  } catch (const std::exception& e) {
    out.push_back({"/map", e.what()});
    return out;
  }
  if (s.pipeline == "hj" && !hj_data(s.map))
    out.push_back({"/pipeline", "hj needs a mechanical map (damped_mechanical, damped_pendulum)"});
  if ((s.pipeline == "validate" || s.pipeline == "fixedpoint") && !map.dissipative())
    out.push_back({"/pipeline", s.pipeline + " needs a dissipative map (a < 1)"});
  if (!s.grid.band && !std::isfinite(map.trapping_band))
    out.push_back({"/grid/band", "required for maps without a trapping band"});
  if (s.pipeline == "hj" && s.options.hj_n < s.grid.nq)
    out.push_back({"/options/hj_n", "must be at least grid.nq"});
  return out;
}

RunResult run_scenario(const Scenario& s, const fs::path& dir, std::optional<unsigned> threads) {
  if (auto problems = semantic_problems(s); !problems.empty()) throw SchemaError(problems);
  set_thread_count(threads.value_or(s.threads));
  const fs::path scratch = dir.parent_path() / (dir.filename().string() + ".partial");
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  RunResult result;
  try {
    result = Runner(s, scratch).run();
  } catch (...) {
    fs::remove_all(scratch);
    throw;
  }
  fs::remove_all(dir);
  fs::rename(scratch, dir);
  result.directory = dir;
  return result;
}

}  // namespace birkhoff::tools
