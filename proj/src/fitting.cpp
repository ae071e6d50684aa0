#include "gldlmom/fitting.hpp"

#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "gldlmom/error.hpp"

namespace gldlmom {

FitTarget FitTarget::from_lmoments(const LMomentSet& m) {
  return {m.l1, m.l2, m.tau3(), m.tau4()};
}

void FitTarget::check() const {
  if (!(l2_hat > 0.0) || !std::isfinite(l1_hat)) {
    throw Error(ErrorKind::DomainError, "fit target needs finite L1 and L2 > 0");
  }
  if (!feasibility_check(tau3_hat, tau4_hat)) {
    throw Error(ErrorKind::DomainError, "fit target ratios are not feasible L-moment ratios");
  }
}

double objective(const FitTarget& target, double lambda3, double lambda4) {
  if (!std::isfinite(lambda3) || !std::isfinite(lambda4)) return 2.0 * kInvalidShapePenalty;

  double excess = 0.0;
  if (lambda3 <= -1.0) excess += 1.0 + (-1.0 - lambda3);
  if (lambda4 <= -1.0) excess += 1.0 + (-1.0 - lambda4);
  if (excess > 0.0) return kInvalidShapePenalty + excess;
  // Inadmissible pairs have mixed signs; the nearer axis is admissible.
  if (!admissible_shape({lambda3, lambda4})) {
    return kInvalidShapePenalty + std::min(std::abs(lambda3), std::abs(lambda4));
  }

  const TauPair t = shape_ratios({lambda3, lambda4});
  if (std::isnan(t.tau3) || std::isnan(t.tau4)) return kInvalidShapePenalty;
  const double d3 = target.tau3_hat - t.tau3;
  const double d4 = target.tau4_hat - t.tau4;
  return d3 * d3 + d4 * d4;
}

LocationScale recover_location_scale(const FitTarget& target, double lambda3, double lambda4) {
  if (!(lambda3 > -1.0) || !(lambda4 > -1.0)) {
    throw Error(ErrorKind::LMomentsUndefined, "location/scale recovery needs lambda3, lambda4 > -1");
  }
  const double bracket = -1.0 / (1.0 + lambda3) + 2.0 / (2.0 + lambda3) - 1.0 / (1.0 + lambda4) +
                         2.0 / (2.0 + lambda4);
  if (bracket == 0.0 || !std::isfinite(bracket)) {
    throw Error(ErrorKind::DegenerateScale, "L2 equation is degenerate for this shape pair");
  }
  const double lambda2 = bracket / target.l2_hat;
  const double lambda1 = target.l1_hat + (1.0 / (1.0 + lambda4) - 1.0 / (1.0 + lambda3)) / lambda2;
  return {lambda1, lambda2};
}

double ks_statistic(std::span<const double> data, const GldParams& p) {
  require_valid(p);
  if (data.empty()) throw Error(ErrorKind::InsufficientData, "KS statistic needs at least one observation");
  std::vector<double> x(data.begin(), data.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = detail::cdf_unchecked(p, x[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

namespace {

std::vector<ShapePair> collect_starts(const FitTarget& target, const FitStrategy& strategy) {
  std::vector<ShapePair> starts;
  if (strategy.symmetric_starts && target.tau4_hat < 1.0) {
    for (double root : solve_symmetric(target.tau4_hat).roots) starts.push_back({root, root});
  }
  starts.insert(starts.end(), strategy.extra_starts.begin(), strategy.extra_starts.end());
  if (starts.empty()) {
    throw Error(ErrorKind::NoFeasibleStart, "no symmetric solution for this tau4 and no user starts");
  }
  return starts;
}

}  // namespace

std::vector<FitResult> fit_target(const FitTarget& target, const FitStrategy& strategy,
                                  std::span<const double> data) {
  if (!(target.l2_hat > 0.0)) throw Error(ErrorKind::DomainError, "fit target needs L2 > 0");
  strategy.nelder_mead.check();
  const auto starts = collect_starts(target, strategy);

  std::vector<FitResult> results;
  results.reserve(starts.size());
  for (const ShapePair& start : starts) {
    const auto f = [&](const Vec2& x) { return objective(target, x[0], x[1]); };
    const NelderMeadResult nm = nelder_mead(f, {start.lambda3, start.lambda4}, strategy.nelder_mead);
    if (nm.value >= kInvalidShapePenalty) continue;

    const double l3 = nm.point[0];
    const double l4 = nm.point[1];
    LocationScale ls{};
    try {
      ls = recover_location_scale(target, l3, l4);
    } catch (const Error&) {
      continue;
    }

    FitResult r;
    r.params = {ls.lambda1, ls.lambda2, l3, l4};
    r.region = classify_region(r.params).region;
    r.objective = nm.value;
    r.iterations = nm.iterations;
    r.converged = nm.converged && nm.value < strategy.convergence_threshold && r.region != Region::Invalid;
    r.start_point = start;
    if (strategy.compute_ks && !data.empty() && r.region != Region::Invalid) {
      r.ks_statistic = ks_statistic(data, r.params);
    }
    results.push_back(r);
  }

  std::stable_sort(results.begin(), results.end(), [](const FitResult& a, const FitResult& b) {
    if (a.objective != b.objective) return a.objective < b.objective;
    return std::abs(a.params.lambda3) + std::abs(a.params.lambda4) <
           std::abs(b.params.lambda3) + std::abs(b.params.lambda4);
  });
  return results;
}

std::vector<FitResult> fit(std::span<const double> data, const FitStrategy& strategy) {
  if (data.size() < 4) throw Error(ErrorKind::InsufficientData, "fitting needs at least 4 observations");
  const FitTarget target = FitTarget::from_lmoments(sample_lmoments(data, 4));
  return fit_target(target, strategy, data);
}

}  // namespace gldlmom
