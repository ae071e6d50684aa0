#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gldlmom/gld.hpp"

namespace gldlmom {

/// L1, L2 and the ratios tau_r = L_r / L2 for r = 3..max_order.
struct LMomentSet {
  double l1 = 0.0;
  double l2 = 0.0;
  std::vector<double> tau;  // tau[0] is tau3

  int max_order() const noexcept { return static_cast<int>(tau.size()) + 2; }
  /// tau_r for 3 <= r <= max_order().
  double ratio(int r) const;
  double tau3() const { return ratio(3); }
  double tau4() const { return ratio(4); }

  friend bool operator==(const LMomentSet&, const LMomentSet&) = default;
};

struct TauPair {
  double tau3 = 0.0;
  double tau4 = 0.0;

  friend bool operator==(const TauPair&, const TauPair&) = default;
};

/// Shifted Legendre polynomial P*_n(u) = sum_k c_k u^k with
/// c_k = (-1)^(n-k) C(n, k) C(n+k, k).
class LegendreCoeffs {
 public:
  LegendreCoeffs(int order, std::vector<std::int64_t> coeffs)
      : order_(order), coeffs_(std::move(coeffs)) {}

  int order() const noexcept { return order_; }
  const std::vector<std::int64_t>& coeffs() const noexcept { return coeffs_; }
  double operator()(double u) const;  // Horner

 private:
  int order_;
  std::vector<std::int64_t> coeffs_;
};

/// Exact integer coefficients; throws Overflow when a coefficient does not
/// fit in 64 bits (first happens at order 28).
LegendreCoeffs shifted_legendre(int order);

inline constexpr int kDefaultMaxOrder = 6;

/// Closed-form L-moments of the GLD:
///   lambda2 L_r = sum_{k<r} (-1)^(r-k-1) C(r-1,k) C(r+k-1,k)
///                 [1/(k+1+lambda3) + (-1)^r/(k+1+lambda4)]
/// The sums over k, split into the lambda3 and lambda4 parts, are evaluated
/// in their equivalent product form
///   l (l-1) ... (l-r+2) / ((l+1) ... (l+r)),
/// which stays accurate at any order.
/// Throws LMomentsUndefined unless lambda3, lambda4 > -1.
LMomentSet gld_lmoments(const GldParams& p, int max_order = kDefaultMaxOrder);

/// lambda2 * L_r for a shape pair (r >= 2); the building block of the above.
double scaled_lmoment(ShapePair s, int r);

/// (tau3, tau4) of a shape pair without validity checks; NaN when the
/// L-moments do not exist. Hot path for grids and the fitting objective.
TauPair shape_ratios(ShapePair s) noexcept;

/// Minimum of the symmetric-case L-kurtosis, (12 - 5 sqrt 6) / (12 + 5 sqrt 6),
/// attained at lambda3 = lambda4 = sqrt 6 - 1.
inline constexpr double kSymmetricTau4Argmin = 1.449489742783178;  // sqrt(6) - 1
inline constexpr double kSymmetricTau4Min = -0.010205144336438036;  // -49 + 20 sqrt(6)

/// tau4 of GLD(., ., lambda, lambda): (l^2 - 3l + 2) / (l^2 + 7l + 12).
double symmetric_tau4(double lambda);

struct SymmetricSolution {
  double tau4 = 0.0;
  std::vector<double> roots;  // ascending, all > -1; a double root appears once
};

/// Inverts symmetric_tau4: both roots of (1-t) l^2 - (3+7t) l + (2-12t) = 0
/// that exceed -1. Empty below kSymmetricTau4Min.
SymmetricSolution solve_symmetric(double tau4);

enum class Axis { Lambda3Zero, Lambda4Zero };

/// Ratios on the coordinate axes: lambda3 = 0 with lambda4 = lambda, or
/// lambda4 = 0 with lambda3 = lambda.
TauPair axis_case_ratios(double lambda, Axis axis);

/// Unbiased sample L-moments from the order statistics:
///   b_j = n^-1 sum_i [C(i-1, j) / C(n-1, j)] x_(i),
///   l_{r+1} = sum_j (-1)^(r-j) C(r, j) C(r+j, j) b_j.
/// The binomial ratios are accumulated as products of (i-1-m)/(n-1-m).
LMomentSet sample_lmoments(std::span<const double> data, int max_order = 4);

/// -1 < tau3 < 1 and (5 tau3^2 - 1) / 4 <= tau4 < 1.
bool feasibility_check(double tau3, double tau4) noexcept;

}  // namespace gldlmom
