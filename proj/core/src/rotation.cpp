#include "birkhoff/rotation.hpp"

#include "birkhoff/error.hpp"
#include "birkhoff/parallel.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace birkhoff {

std::pair<CellSet, CellSet> accessible_sets(const CellSet& b, const CellSet& uplus,
                                            const CellSet& uminus) {
  const CellGrid& g = b.grid;
  if (!(g == uplus.grid) || !(g == uminus.grid))
    throw Error(ErrorKind::GridMismatch, "accessible_sets: grids differ");
  CellSet top(g, CellLabel::Birkhoff), bottom(g, CellLabel::Birkhoff);
  for (int i = 0; i < g.nq; ++i) {
    const auto extent = b.column_extent(i);
    if (!extent || !uplus.contains(i, g.np - 1) || !uminus.contains(i, 0))
      throw Error(ErrorKind::NonSeparatingInput,
                  "accessible_sets: column " + std::to_string(i) + " is not separated");
    top.insert(g.index(i, extent->second));
    bottom.insert(g.index(i, extent->first));
  }
  return {top, bottom};
}

namespace {

struct OrbitWindows {
  std::vector<double> means;
};

OrbitWindows orbit_windows(const CESMap& map, AnnulusPoint seed, int n_orbit,
                           int windows) {
  const int burn = n_orbit / 10;
  const int len = (n_orbit - burn) / windows;
  LiftedPoint z = lift(seed);
  for (int k = 0; k < burn; ++k) z = map.forward(z);
  OrbitWindows out;
  out.means.reserve(static_cast<std::size_t>(windows));
  for (int w = 0; w < windows; ++w) {
    const double start = z.x;
    for (int k = 0; k < len; ++k) z = map.forward(z);
    out.means.push_back((z.x - start) / len);
  }
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

RotationEstimate rotation_numbers(const CESMap& map, const CellSet& bplus,
                                  const CellSet& bminus, int n_orbit, int n_boot,
                                  const RotationOptions& opts) {
  if (!map.twist)
    throw Error(ErrorKind::TwistRequired, "rotation numbers undefined without twist");
  if (opts.windows < 2 || n_orbit < 10 * opts.windows)
    throw Error(ErrorKind::InvalidArgument, "rotation_numbers: orbit too short");
  const auto plus_seeds = bplus.centers(), minus_seeds = bminus.centers();
  if (plus_seeds.empty() || minus_seeds.empty())
    throw Error(ErrorKind::EmptySet, "rotation_numbers: empty accessible set");

  auto run = [&](const std::vector<AnnulusPoint>& seeds) {
    std::vector<OrbitWindows> out(seeds.size());
    parallel_for(0, seeds.size(), [&](std::size_t k) {
      out[k] = orbit_windows(map, seeds[k], n_orbit, opts.windows);
    });
    return out;
  };
  const auto up = run(plus_seeds), down = run(minus_seeds);

  RotationEstimate est;
  est.n_orbit = n_orbit;
  est.rho_plus = -std::numeric_limits<double>::infinity();
  est.rho_minus = std::numeric_limits<double>::infinity();
  for (const auto& o : up) est.rho_plus = std::max(est.rho_plus, mean(o.means));
  for (const auto& o : down) est.rho_minus = std::min(est.rho_minus, mean(o.means));

  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<int> pick(0, opts.windows - 1);
  std::vector<double> boot_plus, boot_minus;
  auto resampled = [&](const OrbitWindows& o) {
    double s = 0.0;
    for (int k = 0; k < opts.windows; ++k) s += o.means[static_cast<std::size_t>(pick(rng))];
    return s / opts.windows;
  };
  for (int b = 0; b < n_boot; ++b) {
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& o : up) hi = std::max(hi, resampled(o));
    for (const auto& o : down) lo = std::min(lo, resampled(o));
    boot_plus.push_back(hi);
    boot_minus.push_back(lo);
  }
  auto half_width = [](std::vector<double> v) {
    if (v.size() < 2) return 0.0;
    std::sort(v.begin(), v.end());
    const auto at = [&](double f) {
      return v[static_cast<std::size_t>(f * static_cast<double>(v.size() - 1))];
    };
    return 0.5 * (at(0.975) - at(0.025));
  };
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                       (1.0 + std::max(std::abs(est.rho_plus), std::abs(est.rho_minus)));
  est.err_bound = std::max({half_width(boot_plus), half_width(boot_minus), floor});
  est.charpentier_positive = est.rho_plus - est.rho_minus > 2.0 * est.err_bound;
  return est;
}

}  // namespace birkhoff
