#include <algorithm>
#include <cmath>

#include "gldlmom/atlas.hpp"
#include "gldlmom/error.hpp"
#include "gldlmom/fitting.hpp"

namespace gldlmom {

namespace {

struct Seed {
  ShapePair shape;
  double value;
};

// Local minima of the objective over the valid nodes of a coarse grid.
std::vector<Seed> grid_seeds(const FitTarget& target, Region region, const CensusOptions& options) {
  const LambdaGrid g = build_grid(region, {options.seed_resolution, options.seed_resolution});
  const std::size_t n3 = g.n3(), n4 = g.n4();
  std::vector<double> f(n3 * n4, kInvalidShapePenalty);
  for (std::size_t i = 0; i < n3; ++i)
    for (std::size_t j = 0; j < n4; ++j) {
      const ShapePair s = g.node(i, j);
      f[i * n4 + j] = objective(target, s.lambda3, s.lambda4);
    }

  std::vector<Seed> seeds;
  for (std::size_t i = 0; i < n3; ++i)
    for (std::size_t j = 0; j < n4; ++j) {
      const double v = f[i * n4 + j];
      if (v >= kInvalidShapePenalty) continue;
      bool minimum = true;
      for (int di = -1; di <= 1 && minimum; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const auto ii = static_cast<std::ptrdiff_t>(i) + di;
          const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
          if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(n3) || jj >= static_cast<std::ptrdiff_t>(n4)) continue;
          if (f[static_cast<std::size_t>(ii) * n4 + static_cast<std::size_t>(jj)] < v) {
            minimum = false;
            break;
          }
        }
      if (minimum) seeds.push_back({g.node(i, j), v});
    }
  std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.value < b.value; });
  if (seeds.size() > options.max_seeds_per_region) seeds.resize(options.max_seeds_per_region);
  return seeds;
}

// Newton iterations on tau(shape) = target with a forward-difference Jacobian.
ShapePair newton_polish(const FitTarget& target, ShapePair s) {
  double best = objective(target, s.lambda3, s.lambda4);
  for (int it = 0; it < 40 && best > 0.0; ++it) {
    const TauPair t = shape_ratios(s);
    const double r3 = t.tau3 - target.tau3_hat;
    const double r4 = t.tau4 - target.tau4_hat;
    const double h3 = 1e-7 * std::max(1.0, std::abs(s.lambda3));
    const double h4 = 1e-7 * std::max(1.0, std::abs(s.lambda4));
    const TauPair a = shape_ratios({s.lambda3 + h3, s.lambda4});
    const TauPair b = shape_ratios({s.lambda3, s.lambda4 + h4});
    const double j11 = (a.tau3 - t.tau3) / h3, j12 = (b.tau3 - t.tau3) / h4;
    const double j21 = (a.tau4 - t.tau4) / h3, j22 = (b.tau4 - t.tau4) / h4;
    const double det = j11 * j22 - j12 * j21;
    if (!std::isfinite(det) || det == 0.0) break;
    const double d3 = -(j22 * r3 - j12 * r4) / det;
    const double d4 = -(-j21 * r3 + j11 * r4) / det;
    bool improved = false;
    for (double step = 1.0; step > 1e-4; step *= 0.5) {
      const ShapePair trial{s.lambda3 + step * d3, s.lambda4 + step * d4};
      const double v = objective(target, trial.lambda3, trial.lambda4);
      if (v < best) {
        s = trial;
        best = v;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return s;
}

}  // namespace

std::vector<CensusSolution> solution_census(double tau3, double tau4, const CensusOptions& options) {
  if (!feasibility_check(tau3, tau4)) {
    throw Error(ErrorKind::DomainError, "census target is not a feasible (tau3, tau4) pair");
  }
  if (options.seed_resolution < 16 || !(options.dedup_tolerance > 0.0) || !(options.objective_tolerance > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "census options out of range");
  }
  options.nelder_mead.check();

  const FitTarget target{0.0, 1.0, tau3, tau4};
  std::vector<CensusSolution> found;
  for (Region region : options.regions) {
    for (const Seed& seed : grid_seeds(target, region, options)) {
      const auto f = [&](const Vec2& x) { return objective(target, x[0], x[1]); };
      NelderMeadConfig nm = options.nelder_mead;
      nm.initial_scale = 0.02;
      const auto res = nelder_mead(f, {seed.shape.lambda3, seed.shape.lambda4}, nm);
      const ShapePair s = newton_polish(target, {res.point[0], res.point[1]});
      const double v = objective(target, s.lambda3, s.lambda4);
      if (!(v < options.objective_tolerance)) continue;

      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const CensusSolution& c) {
        return std::hypot(c.shape.lambda3 - s.lambda3, c.shape.lambda4 - s.lambda4) < options.dedup_tolerance;
      });
      if (duplicate) continue;

      LocationScale ls{};
      try {
        ls = recover_location_scale(target, s.lambda3, s.lambda4);
      } catch (const Error&) {
        continue;
      }
      CensusSolution c;
      c.shape = s;
      c.standardized = {ls.lambda1, ls.lambda2, s.lambda3, s.lambda4};
      c.region = classify_region(c.standardized).region;
      if (c.region == Region::Invalid) continue;
      c.objective = v;
      c.achieved = shape_ratios(s);
      found.push_back(c);
    }
  }
  std::sort(found.begin(), found.end(), [](const CensusSolution& a, const CensusSolution& b) {
    if (a.region != b.region) return a.region < b.region;
    return a.shape.lambda3 < b.shape.lambda3;
  });
  return found;
}

}  // namespace gldlmom
