#pragma once

// Method of L-moments: match (tau3, tau4) by minimizing the squared distance
// over the shape pair, then solve lambda2 and lambda1 from L2 and L1.

#include <optional>
#include <span>
#include <vector>

#include "gldlmom/gld.hpp"
#include "gldlmom/lmoments.hpp"
#include "gldlmom/nelder_mead.hpp"

namespace gldlmom {

struct FitTarget {
  double l1_hat = 0.0;
  double l2_hat = 1.0;
  double tau3_hat = 0.0;
  double tau4_hat = 0.0;

  static FitTarget from_lmoments(const LMomentSet& m);
  /// Throws DomainError unless l2_hat > 0 and the ratios are feasible.
  void check() const;
};

inline constexpr double kInvalidShapePenalty = 1e10;

/// (tau3_hat - tau3(l3, l4))^2 + (tau4_hat - tau4(l3, l4))^2 for admissible
/// shapes. Elsewhere returns kInvalidShapePenalty plus a distance-like term
/// that points back toward the admissible set.
double objective(const FitTarget& target, double lambda3, double lambda4);

struct LocationScale {
  double lambda1;
  double lambda2;
};

/// lambda2 from the L2 equation, then lambda1 from the L1 equation.
/// Throws DegenerateScale when lambda2 * L2 vanishes for the shape pair.
LocationScale recover_location_scale(const FitTarget& target, double lambda3, double lambda4);

struct FitResult {
  GldParams params;
  Region region = Region::Invalid;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::optional<double> ks_statistic;
  ShapePair start_point;

  friend bool operator==(const FitResult&, const FitResult&) = default;
};

struct FitStrategy {
  bool symmetric_starts = true;          // roots of the symmetric tau4 equation
  std::vector<ShapePair> extra_starts;   // tried after the symmetric ones
  NelderMeadConfig nelder_mead;
  double convergence_threshold = 1e-8;   // objective bound for `converged`
  bool compute_ks = true;
};

/// Fits to a data set. Results are sorted by objective; ties go to the
/// smaller |lambda3| + |lambda4|.
/// Throws InsufficientData for n < 4 and NoFeasibleStart when there is
/// nothing to start from.
std::vector<FitResult> fit(std::span<const double> data, const FitStrategy& strategy = {});

/// Same search against given L-moments; `data` is only used for the KS
/// statistic and may be empty.
std::vector<FitResult> fit_target(const FitTarget& target, const FitStrategy& strategy = {},
                                  std::span<const double> data = {});

/// Kolmogorov-Smirnov distance sup |F_n - F| between the sample and the
/// model, evaluated at the order statistics.
double ks_statistic(std::span<const double> data, const GldParams& p);

}  // namespace gldlmom
