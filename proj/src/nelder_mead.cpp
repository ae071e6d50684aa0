#include "gldlmom/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gldlmom/error.hpp"

namespace gldlmom {

void NelderMeadConfig::check() const {
  const bool ok = reflection > 0.0 && expansion > 1.0 && contraction > 0.0 && contraction < 1.0 &&
                  shrink > 0.0 && shrink < 1.0 && tol > 0.0 && max_iter > 0 && initial_scale > 0.0;
  if (!ok) throw Error(ErrorKind::InvalidParams, "Nelder-Mead coefficients out of range");
}

namespace {

struct Vertex {
  Vec2 x;
  double f;
};

Vec2 affine(const Vec2& base, const Vec2& toward, double t) {
  return {base[0] + t * (toward[0] - base[0]), base[1] + t * (toward[1] - base[1])};
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Vec2&)>& f, Vec2 start,
                             const NelderMeadConfig& config) {
  config.check();
  if (!std::isfinite(start[0]) || !std::isfinite(start[1])) {
    throw Error(ErrorKind::DomainError, "Nelder-Mead start must be finite");
  }
  auto eval = [&](const Vec2& x) {
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::array<Vertex, 3> s;
  s[0] = {start, eval(start)};
  for (int i = 0; i < 2; ++i) {
    Vec2 x = start;
    x[i] += config.initial_scale * std::max(1.0, std::abs(start[i]));
    s[i + 1] = {x, eval(x)};
  }

  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  NelderMeadResult out;
  int it = 0;
  for (;; ++it) {
    std::sort(s.begin(), s.end(), by_value);
    if (s[2].f - s[0].f < config.tol) {
      out.converged = true;
      break;
    }
    if (it >= config.max_iter) break;

    const Vertex& best = s[0];
    const Vertex& second = s[1];
    Vertex& worst = s[2];
    const Vec2 centroid{0.5 * (best.x[0] + second.x[0]), 0.5 * (best.x[1] + second.x[1])};

    const Vec2 xr = affine(centroid, worst.x, -config.reflection);
    const double fr = eval(xr);
    if (fr < best.f) {
      const Vec2 xe = affine(centroid, xr, config.expansion);
      const double fe = eval(xe);
      worst = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
      continue;
    }
    if (fr < second.f) {
      worst = {xr, fr};
      continue;
    }
    if (fr < worst.f) {
      const Vec2 xc = affine(centroid, xr, config.contraction);
      const double fc = eval(xc);
      if (fc <= fr) {
        worst = {xc, fc};
        continue;
      }
    } else {
      const Vec2 xc = affine(centroid, worst.x, config.contraction);
      const double fc = eval(xc);
      if (fc < worst.f) {
        worst = {xc, fc};
        continue;
      }
    }
    for (int i = 1; i < 3; ++i) {
      s[i].x = affine(s[0].x, s[i].x, config.shrink);
      s[i].f = eval(s[i].x);
    }
  }

  out.point = s[0].x;
  out.value = s[0].f;
  out.iterations = it;
  return out;
}

}  // namespace gldlmom
