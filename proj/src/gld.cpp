#include "gldlmom/gld.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "detail.hpp"
#include "gldlmom/error.hpp"
#include "gldlmom/rng.hpp"

namespace gldlmom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// lambda * t^(lambda - 1), the derivative of t^lambda, with the 0 * inf case
// at lambda == 0 resolved to 0.
double power_slope(double lambda, double t) {
  if (lambda == 0.0) return 0.0;
  if (t == 0.0) {
    if (lambda < 1.0) return std::copysign(kInf, lambda);
    return lambda == 1.0 ? 1.0 : 0.0;
  }
  return lambda * std::pow(t, lambda - 1.0);
}

// x log x, continued by 0 at x = 0.
double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

// One exponent negative, the other positive, lambda2 < 0. The density
// numerator neg u^(neg-1) + pos (1-u)^(pos-1) must stay <= 0. For pos > 1 the
// ratio of its two terms peaks at u = (1 - neg) / (pos - neg), which gives
//   pos (pos-1)^(pos-1) (1-neg)^(1-neg) / (pos-neg)^(pos-neg) <= -neg.
// For pos < 1 the positive term blows up at the far end; pos = 1 leaves a
// constant that needs neg <= -1.
bool mixed_sign_valid(double neg, double pos) {
  if (pos < 1.0) return false;
  if (pos == 1.0) return neg <= -1.0;
  const double log_ratio = std::log(pos) + xlogx(pos - 1.0) + xlogx(1.0 - neg) - xlogx(pos - neg) - std::log(-neg);
  return log_ratio <= 1e-12;
}

}  // namespace

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParams: return "invalid-params";
    case ErrorKind::DomainError: return "domain-error";
    case ErrorKind::NoConvergence: return "no-convergence";
    case ErrorKind::LMomentsUndefined: return "lmoments-undefined";
    case ErrorKind::Overflow: return "overflow-error";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::UnknownRegion: return "unknown-region";
    case ErrorKind::AssemblyFailure: return "assembly-failure";
    case ErrorKind::EmptyContour: return "empty-contour";
    case ErrorKind::DegenerateScale: return "degenerate-scale";
    case ErrorKind::NoFeasibleStart: return "no-feasible-start";
    case ErrorKind::ParseError: return "parse-error";
  }
  return "unknown";
}

std::string_view to_string(Region region) noexcept {
  switch (region) {
    case Region::R1: return "R1";
    case Region::R2: return "R2";
    case Region::R3: return "R3";
    case Region::R4: return "R4";
    case Region::R5: return "R5";
    case Region::R6: return "R6";
    case Region::Invalid: return "invalid";
  }
  return "invalid";
}

int region_number(Region region) noexcept {
  switch (region) {
    case Region::R1: return 1;
    case Region::R2: return 2;
    case Region::R3: return 3;
    case Region::R4: return 4;
    case Region::R5: return 5;
    case Region::R6: return 6;
    case Region::Invalid: return 0;
  }
  return 0;
}

Region parse_region(std::string_view text) {
  if (!text.empty() && (text.front() == 'R' || text.front() == 'r')) text.remove_prefix(1);
  if (text == "1") return Region::R1;
  if (text == "2") return Region::R2;
  if (text == "3") return Region::R3;
  if (text == "4") return Region::R4;
  if (text == "5") return Region::R5;
  if (text == "6") return Region::R6;
  if (text == "invalid") return Region::Invalid;
  throw Error(ErrorKind::UnknownRegion, "unknown region '" + std::string(text) + "'");
}

int required_lambda2_sign(ShapePair s) {
  const double l3 = s.lambda3;
  const double l4 = s.lambda4;
  if (!std::isfinite(l3) || !std::isfinite(l4)) return 0;
  if (l3 == 0.0 && l4 == 0.0) return 0;  // point mass
  if (l3 >= 0.0 && l4 >= 0.0) return 1;
  if (l3 <= 0.0 && l4 <= 0.0) return -1;
  // Mixed signs: only lambda2 < 0 can work. The problem is symmetric under
  // u -> 1 - u, which swaps the exponents.
  const bool ok = l3 < 0.0 ? mixed_sign_valid(l3, l4) : mixed_sign_valid(l4, l3);
  return ok ? -1 : 0;
}

bool admissible_shape(ShapePair s) { return required_lambda2_sign(s) != 0; }

bool validate(const GldParams& p) {
  if (!std::isfinite(p.lambda1) || !std::isfinite(p.lambda2) || p.lambda2 == 0.0) return false;
  const int sign = required_lambda2_sign({p.lambda3, p.lambda4});
  return sign != 0 && (sign > 0) == (p.lambda2 > 0.0);
}

void require_valid(const GldParams& p) {
  if (!validate(p)) throw Error(ErrorKind::InvalidParams, "invalid parameters");
}

RegionTag classify_region(const GldParams& p) {
  if (!validate(p)) return {Region::Invalid, false};
  const double l3 = p.lambda3;
  const double l4 = p.lambda4;
  Region r;
  if (l3 >= 0.0 && l4 >= 0.0) {
    r = Region::R3;
  } else if (l3 <= 0.0 && l4 <= 0.0) {
    r = Region::R4;
  } else if (l3 < 0.0) {
    r = l3 <= -1.0 ? Region::R1 : Region::R5;
  } else {
    r = l4 <= -1.0 ? Region::R2 : Region::R6;
  }
  return {r, l3 > -1.0 && l4 > -1.0};
}

namespace detail {

double quantile_unchecked(const GldParams& p, double u) {
  return p.lambda1 + (std::pow(u, p.lambda3) - std::pow(1.0 - u, p.lambda4)) / p.lambda2;
}

double quantile_density_unchecked(const GldParams& p, double u) {
  return (power_slope(p.lambda3, u) + power_slope(p.lambda4, 1.0 - u)) / p.lambda2;
}

double cdf_unchecked(const GldParams& p, double x) {
  if (std::isnan(x)) throw Error(ErrorKind::DomainError, "cdf: x is NaN");
  if (x <= quantile_unchecked(p, 0.0)) return 0.0;
  if (x >= quantile_unchecked(p, 1.0)) return 1.0;

  double lo = 0.0;
  double hi = 1.0;
  double u = 0.5;
  for (int it = 0; it < kCdfMaxIterations; ++it) {
    const double residual = quantile_unchecked(p, u) - x;
    if (residual == 0.0) return u;
    if (residual < 0.0) {
      lo = u;
    } else {
      hi = u;
    }
    if (hi - lo <= kCdfTolerance) return 0.5 * (lo + hi);

    const double slope = quantile_density_unchecked(p, u);
    double next = u - residual / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 0.1 * kCdfTolerance) return next;
    u = next;
  }
  throw Error(ErrorKind::NoConvergence, "cdf: iteration cap reached");
}

}  // namespace detail

double quantile(const GldParams& p, double u) {
  require_valid(p);
  if (!(u >= 0.0 && u <= 1.0)) throw Error(ErrorKind::DomainError, "quantile level outside [0, 1]");
  return detail::quantile_unchecked(p, u);
}

double quantile_density(const GldParams& p, double u) {
  require_valid(p);
  if (!(u >= 0.0 && u <= 1.0)) throw Error(ErrorKind::DomainError, "quantile level outside [0, 1]");
  const double q = detail::quantile_density_unchecked(p, u);
  if (!std::isfinite(q)) throw Error(ErrorKind::DomainError, "quantile density is infinite at this endpoint");
  return q;
}

Support support(const GldParams& p) {
  require_valid(p);
  return {detail::quantile_unchecked(p, 0.0), detail::quantile_unchecked(p, 1.0)};
}

double cdf(const GldParams& p, double x) {
  require_valid(p);
  return detail::cdf_unchecked(p, x);
}

double pdf(const GldParams& p, double x) {
  require_valid(p);
  if (std::isnan(x)) throw Error(ErrorKind::DomainError, "pdf: x is NaN");
  if (x < detail::quantile_unchecked(p, 0.0) || x > detail::quantile_unchecked(p, 1.0)) return 0.0;
  const double q = detail::quantile_density_unchecked(p, detail::cdf_unchecked(p, x));
  return 1.0 / q;
}

std::vector<double> sample_from_uniforms(const GldParams& p, std::span<const double> uniforms) {
  require_valid(p);
  std::vector<double> out;
  out.reserve(uniforms.size());
  for (double u : uniforms) {
    if (!(u >= 0.0 && u <= 1.0)) throw Error(ErrorKind::DomainError, "uniform outside [0, 1]");
    out.push_back(detail::quantile_unchecked(p, u));
  }
  return out;
}

std::vector<double> sample(const GldParams& p, std::size_t n, std::uint64_t seed) {
  require_valid(p);
  if (n == 0) throw Error(ErrorKind::InvalidParams, "sample size must be at least 1");
  UniformStream stream(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = detail::quantile_unchecked(p, stream.next());
  return out;
}

}  // namespace gldlmom
