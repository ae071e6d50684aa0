#pragma once

#include <array>
#include <functional>

namespace gldlmom {

using Vec2 = std::array<double, 2>;

/// Coefficients and stopping rule of the simplex search. The defaults are
/// the classical Nelder-Mead values.
struct NelderMeadConfig {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double tol = 1e-10;      // stop when max - min vertex value < tol
  int max_iter = 2000;
  double initial_scale = 0.1;  // edge i of the start simplex: scale * max(1, |start_i|)

  /// Throws InvalidParams outside reflection > 0, expansion > 1,
  /// 0 < contraction < 1, 0 < shrink < 1, tol > 0, max_iter > 0.
  void check() const;
};

struct NelderMeadResult {
  Vec2 point{};
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes f over the plane. NaN values are treated as +infinity so the
/// search stays total; callers keep it inside a domain with a penalty.
NelderMeadResult nelder_mead(const std::function<double(const Vec2&)>& f, Vec2 start,
                             const NelderMeadConfig& config = {});

}  // namespace gldlmom
