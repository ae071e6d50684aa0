#include "gldlmom/lmoments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gldlmom/error.hpp"

namespace gldlmom {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Exact C(n, k), or -1 when it does not fit in 64 bits.
std::int64_t binomial_exact(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  __extension__ __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > std::numeric_limits<std::int64_t>::max()) return -1;
  }
  return static_cast<std::int64_t>(c);
}

// Integral of u^l P*_{r-1}(u) over (0, 1), i.e. the weighted sum
// sum_k (-1)^(r-k-1) C(r-1,k) C(r+k-1,k) / (k+1+l). Its partial-fraction
// collapse
//   l (l-1) ... (l-r+2) / ((l+1) (l+2) ... (l+r))
// has no cancellation, whereas the alternating sum loses every digit by
// order 20 or so.
double legendre_power_integral(double l, int r) {
  double v = 1.0 / (l + 1.0);
  for (int j = 1; j < r; ++j) v *= (l - (j - 1)) / (l + j + 1.0);
  return v;
}

// NaN when the L-moment does not exist.
double scaled_lmoment_or_nan(double l3, double l4, int r) {
  if (!(l3 > -1.0) || !(l4 > -1.0)) return kNaN;
  const double parity = r % 2 == 0 ? 1.0 : -1.0;
  return legendre_power_integral(l3, r) + parity * legendre_power_integral(l4, r);
}

}  // namespace

double LMomentSet::ratio(int r) const {
  if (r < 3 || r > max_order()) {
    throw Error(ErrorKind::DomainError, "ratio order " + std::to_string(r) + " not available");
  }
  return tau[static_cast<std::size_t>(r - 3)];
}

double LegendreCoeffs::operator()(double u) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * u + static_cast<double>(*it);
  return acc;
}

LegendreCoeffs shifted_legendre(int order) {
  if (order < 0) throw Error(ErrorKind::DomainError, "Legendre order must be >= 0");
  std::vector<std::int64_t> coeffs;
  coeffs.reserve(order + 1);
  for (int k = 0; k <= order; ++k) {
    const std::int64_t a = binomial_exact(order, k);
    const std::int64_t b = binomial_exact(order + k, k);
    std::int64_t c = 0;
    if (a < 0 || b < 0 || __builtin_mul_overflow(a, b, &c)) {
      throw Error(ErrorKind::Overflow,
                  "shifted Legendre coefficient overflows 64 bits at order " + std::to_string(order));
    }
    coeffs.push_back((order - k) % 2 == 0 ? c : -c);
  }
  return {order, std::move(coeffs)};
}

double scaled_lmoment(ShapePair s, int r) {
  if (r < 2) throw Error(ErrorKind::DomainError, "scaled_lmoment needs r >= 2");
  if (!(s.lambda3 > -1.0) || !(s.lambda4 > -1.0)) {
    throw Error(ErrorKind::LMomentsUndefined, "L-moments need lambda3, lambda4 > -1");
  }
  return scaled_lmoment_or_nan(s.lambda3, s.lambda4, r);
}

TauPair shape_ratios(ShapePair s) noexcept {
  const double l2 = scaled_lmoment_or_nan(s.lambda3, s.lambda4, 2);
  const double l3 = scaled_lmoment_or_nan(s.lambda3, s.lambda4, 3);
  const double l4 = scaled_lmoment_or_nan(s.lambda3, s.lambda4, 4);
  if (std::isnan(l2) || l2 == 0.0) return {kNaN, kNaN};
  return {l3 / l2, l4 / l2};
}

LMomentSet gld_lmoments(const GldParams& p, int max_order) {
  if (max_order < 2) throw Error(ErrorKind::DomainError, "max_order must be >= 2");
  if (!(p.lambda3 > -1.0) || !(p.lambda4 > -1.0)) {
    throw Error(ErrorKind::LMomentsUndefined, "L-moments need lambda3, lambda4 > -1");
  }
  require_valid(p);

  const ShapePair s{p.lambda3, p.lambda4};
  LMomentSet out;
  out.l1 = p.lambda1 - (1.0 / (1.0 + p.lambda4) - 1.0 / (1.0 + p.lambda3)) / p.lambda2;
  const double scaled_l2 = scaled_lmoment(s, 2);
  out.l2 = scaled_l2 / p.lambda2;
  out.tau.reserve(max_order - 2);
  for (int r = 3; r <= max_order; ++r) out.tau.push_back(scaled_lmoment(s, r) / scaled_l2);
  return out;
}

double symmetric_tau4(double lambda) {
  if (!(lambda > -1.0)) throw Error(ErrorKind::DomainError, "symmetric_tau4 needs lambda > -1");
  return (lambda * lambda - 3.0 * lambda + 2.0) / (lambda * lambda + 7.0 * lambda + 12.0);
}

SymmetricSolution solve_symmetric(double tau4) {
  if (!(tau4 < 1.0)) throw Error(ErrorKind::DomainError, "solve_symmetric needs tau4 < 1");
  SymmetricSolution out{tau4, {}};
  if (tau4 < kSymmetricTau4Min) return out;

  // (1 - t) l^2 - (3 + 7t) l + (2 - 12t) = 0, discriminant 1 + 98t + t^2.
  // The larger root comes from the cancellation-free branch and the other
  // from the product of the roots.
  // A discriminant within rounding of zero is the double root at the minimum.
  double disc = 1.0 + 98.0 * tau4 + tau4 * tau4;
  if (disc <= 1e3 * std::numeric_limits<double>::epsilon()) disc = 0.0;
  const double q = 0.5 * ((3.0 + 7.0 * tau4) + std::sqrt(disc));
  const double big = q / (1.0 - tau4);
  if (disc == 0.0) {
    out.roots.push_back(big);
    return out;
  }
  const double small = (2.0 - 12.0 * tau4) / q;
  for (double root : {small, big}) {
    if (root > -1.0) out.roots.push_back(root);
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

TauPair axis_case_ratios(double lambda, Axis axis) {
  if (!(lambda > -1.0)) throw Error(ErrorKind::DomainError, "axis_case_ratios needs lambda > -1");
  const double tau3 = axis == Axis::Lambda3Zero ? (1.0 - lambda) / (lambda + 3.0)
                                                : (lambda - 1.0) / (lambda + 3.0);
  return {tau3, symmetric_tau4(lambda)};
}

LMomentSet sample_lmoments(std::span<const double> data, int max_order) {
  if (max_order < 2) throw Error(ErrorKind::DomainError, "max_order must be >= 2");
  const std::size_t n = data.size();
  if (n < static_cast<std::size_t>(max_order)) {
    throw Error(ErrorKind::InsufficientData, "sample L-moments of order " + std::to_string(max_order) +
                                                 " need at least that many observations");
  }
  std::vector<double> x(data.begin(), data.end());
  if (std::any_of(x.begin(), x.end(), [](double v) { return !std::isfinite(v); })) {
    throw Error(ErrorKind::DomainError, "sample contains non-finite values");
  }
  std::sort(x.begin(), x.end());

  // Probability-weighted moments b_0..b_{R-1}.
  std::vector<double> b(max_order, 0.0);
  const double nm1 = static_cast<double>(n) - 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = 1.0;
    const double before = static_cast<double>(i);  // number of smaller order statistics
    for (int j = 0; j < max_order; ++j) {
      b[j] += w * x[i];
      if (j + 1 < max_order) w *= (before - j) / (nm1 - j);
    }
  }
  for (auto& v : b) v /= static_cast<double>(n);

  auto lmoment = [&](int r) {  // l_r from b_0..b_{r-1}
    const auto p = shifted_legendre(r - 1);
    double sum = 0.0;
    for (int j = 0; j < r; ++j) sum += static_cast<double>(p.coeffs()[j]) * b[j];
    return sum;
  };

  LMomentSet out;
  out.l1 = b[0];
  out.l2 = lmoment(2);
  if (!(out.l2 > 0.0)) throw Error(ErrorKind::DegenerateScale, "sample L-scale is zero");
  for (int r = 3; r <= max_order; ++r) out.tau.push_back(lmoment(r) / out.l2);
  return out;
}

bool feasibility_check(double tau3, double tau4) noexcept {
  return tau3 > -1.0 && tau3 < 1.0 && tau4 >= (5.0 * tau3 * tau3 - 1.0) / 4.0 && tau4 < 1.0;
}

}  // namespace gldlmom
