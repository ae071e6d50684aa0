#pragma once

// Reference computations that share no code with the library: adaptive
// quadrature of the defining integrals, the brute-force U-statistic form of
// sample L-moments, and finite differences.

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numeric>
#include <vector>

#include "gldlmom/gld.hpp"

namespace oracle {

// Q evaluated from u and 1 - u given separately, so values near either end
// keep full relative precision.
inline double quantile(const gldlmom::GldParams& p, double u, double one_minus_u) {
  const double a = p.lambda3 == 0.0 ? 1.0 : std::pow(u, p.lambda3);
  const double b = p.lambda4 == 0.0 ? 1.0 : std::pow(one_minus_u, p.lambda4);
  return p.lambda1 + (a - b) / p.lambda2;
}

// Legendre P_n(2u - 1) by the three-term recurrence.
inline double shifted_legendre(int n, double u) {
  const double x = 2.0 * u - 1.0;
  double prev = 1.0, cur = x;
  if (n == 0) return prev;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// L_r = integral over (0, 1) of Q(u) P*_{r-1}(u) du by tanh-sinh quadrature.
inline double lmoment_by_quadrature(const gldlmom::GldParams& p, int r, double* error_estimate = nullptr) {
  boost::math::quadrature::tanh_sinh<double> integrator(15);
  // For a finite interval Boost passes the signed distance to the nearer end:
  // negative near 0 (u = -xc), positive near 1 (1 - u = xc).
  auto f = [&](double u, double xc) {
    const double lo = xc < 0 ? -xc : u;
    const double hi = xc > 0 ? xc : 1.0 - u;
    return quantile(p, lo, hi) * shifted_legendre(r - 1, lo);
  };
  double err = 0.0, l1 = 0.0;
  const double v = integrator.integrate(f, 0.0, 1.0, 1e-15, &err, &l1);
  if (error_estimate) *error_estimate = err * l1;
  return v;
}

/// Sample L-moment l_r as an average over all r-subsets (Hosking's definition).
inline double lmoment_by_subsets(std::vector<double> x, int r) {
  std::sort(x.begin(), x.end());
  const int n = static_cast<int>(x.size());
  auto choose = [](int a, int b) {
    double c = 1.0;
    for (int i = 1; i <= b; ++i) c = c * (a - b + i) / i;
    return c;
  };
  std::vector<int> idx(static_cast<std::size_t>(r));
  std::iota(idx.begin(), idx.end(), 0);
  double total = 0.0;
  while (true) {
    double term = 0.0;
    for (int k = 0; k < r; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      term += sign * choose(r - 1, k) * x[static_cast<std::size_t>(idx[static_cast<std::size_t>(r - 1 - k)])];
    }
    total += term / r;
    int pos = r - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - r + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int k = pos + 1; k < r; ++k) idx[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k - 1)] + 1;
  }
  return total / choose(n, r);
}

/// Central difference of f at x with step h.
template <class F>
double derivative(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracle
