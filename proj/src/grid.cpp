#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "gldlmom/atlas.hpp"
#include "gldlmom/error.hpp"

namespace gldlmom {

namespace {

constexpr std::size_t kMinNodes = 16;

AxisSpec log_axis(double lo, double hi, double anchor = 0.0) {
  return {Spacing::LogLike, lo, hi, anchor};
}

AxisSpec negative_unit_axis() { return {Spacing::Equal, -1.0 + 1e-10, -1e-10, 0.0}; }

std::vector<double> make_axis(const AxisSpec& a, std::size_t n) {
  if (!(std::isfinite(a.lo) && std::isfinite(a.hi) && a.lo < a.hi)) {
    throw Error(ErrorKind::DomainError, "grid axis needs finite lo < hi");
  }
  std::vector<double> out(n);
  const double last = static_cast<double>(n - 1);
  if (a.spacing == Spacing::Equal) {
    for (std::size_t k = 0; k < n; ++k) out[k] = a.lo + (a.hi - a.lo) * (static_cast<double>(k) / last);
  } else {
    const double lo = a.lo - a.anchor;
    const double hi = a.hi - a.anchor;
    if (!(lo > 0.0)) throw Error(ErrorKind::DomainError, "log-like axis must start above its anchor");
    const double ratio = std::log(hi / lo);
    for (std::size_t k = 0; k < n; ++k) out[k] = a.anchor + lo * std::exp(ratio * (static_cast<double>(k) / last));
  }
  out.front() = a.lo;
  out.back() = a.hi;
  return out;
}

TauPair nan_pair() {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  return {nan, nan};
}

void map_node(const LambdaGrid& g, TauGrid& t, std::size_t i, std::size_t j) {
  const ShapePair s = g.node(i, j);
  const std::size_t k = t.index(i, j);
  if (s.lambda3 > -1.0 && s.lambda4 > -1.0 && admissible_shape(s)) {
    const TauPair tau = shape_ratios(s);
    if (feasibility_check(tau.tau3, tau.tau4)) {
      t.points[k] = tau;
      t.mask[k] = 1;
      return;
    }
  }
  t.points[k] = nan_pair();
  t.mask[k] = 0;
}

TauGrid empty_image(const LambdaGrid& g) {
  TauGrid t;
  t.region = g.region;
  t.n3 = g.n3();
  t.n4 = g.n4();
  t.points.assign(t.n3 * t.n4, nan_pair());
  t.mask.assign(t.n3 * t.n4, 0);
  return t;
}

double cross(TauPair o, TauPair a, TauPair b) {
  return (a.tau3 - o.tau3) * (b.tau4 - o.tau4) - (a.tau4 - o.tau4) * (b.tau3 - o.tau3);
}

bool on_segment(TauPair p, TauPair a, TauPair b) {
  const double scale = std::max({std::abs(a.tau3), std::abs(a.tau4), std::abs(b.tau3), std::abs(b.tau4), 1e-300});
  if (std::abs(cross(a, b, p)) > 1e-14 * scale * scale) return false;
  return std::min(a.tau3, b.tau3) <= p.tau3 && p.tau3 <= std::max(a.tau3, b.tau3) &&
         std::min(a.tau4, b.tau4) <= p.tau4 && p.tau4 <= std::max(a.tau4, b.tau4);
}

// Even-odd test, points on an edge count as inside.
bool inside_quad(TauPair p, const std::array<TauPair, 4>& q) {
  bool in = false;
  for (std::size_t a = 0, b = 3; a < 4; b = a++) {
    if (on_segment(p, q[b], q[a])) return true;
    const bool straddles = (q[a].tau4 > p.tau4) != (q[b].tau4 > p.tau4);
    if (straddles) {
      const double x = q[a].tau3 + (p.tau4 - q[a].tau4) * (q[b].tau3 - q[a].tau3) / (q[b].tau4 - q[a].tau4);
      if (p.tau3 < x) in = !in;
    }
  }
  return in;
}

// Returns true and fills `out` when node (i, j) is a candidate.
bool classify_node(const TauGrid& t, std::size_t i, std::size_t j, BoundaryCandidate& out) {
  if (!t.valid(i, j)) return false;
  out = {i, j, t.at(i, j), false};
  if (i == 0 || j == 0 || i + 1 == t.n3 || j + 1 == t.n4 || !t.valid(i - 1, j) || !t.valid(i + 1, j) ||
      !t.valid(i, j - 1) || !t.valid(i, j + 1)) {
    out.grid_edge = true;
    return true;
  }
  const std::array<TauPair, 4> quad{t.at(i - 1, j), t.at(i, j + 1), t.at(i + 1, j), t.at(i, j - 1)};
  return !inside_quad(t.at(i, j), quad);
}

void check_boundary_input(const TauGrid& t) {
  if (t.n3 < 3 || t.n4 < 3 || t.points.size() != t.n3 * t.n4 || t.mask.size() != t.points.size()) {
    throw Error(ErrorKind::DomainError, "boundary search needs a well-formed grid of at least 3x3 nodes");
  }
}

}  // namespace

GridLimits default_limits(Region region) {
  switch (region) {
    case Region::R3:
      return {log_axis(1e-6, 1e4), log_axis(1e-6, 1e4)};
    case Region::R4:
      return {negative_unit_axis(), negative_unit_axis()};
    case Region::R5:
      return {negative_unit_axis(), log_axis(1.0 + 1e-6, 1.0 + 1e4, 1.0)};
    case Region::R6:
      return {log_axis(1.0 + 1e-6, 1.0 + 1e4, 1.0), negative_unit_axis()};
    default:
      throw Error(ErrorKind::UnknownRegion,
                  "no atlas grid for region " + std::string(to_string(region)) + "; use R3 to R6");
  }
}

LambdaGrid build_grid(Region region, GridResolution resolution, const std::optional<GridLimits>& limits) {
  const GridLimits lim = limits ? *limits : default_limits(region);
  if (limits) default_limits(region);  // still rejects unknown regions
  if (resolution.n3 < kMinNodes || resolution.n4 < kMinNodes) {
    throw Error(ErrorKind::DomainError, "grid resolution must be at least 16 nodes per axis");
  }
  LambdaGrid g;
  g.region = region;
  g.lambda3_axis = make_axis(lim.lambda3, resolution.n3);
  g.lambda4_axis = make_axis(lim.lambda4, resolution.n4);
  g.spacing3 = lim.lambda3.spacing;
  g.spacing4 = lim.lambda4.spacing;
  return g;
}

std::size_t TauGrid::valid_count() const {
  std::size_t n = 0;
  for (auto m : mask) n += m;
  return n;
}

bool identical(const TauGrid& a, const TauGrid& b) {
  return a.region == b.region && a.n3 == b.n3 && a.n4 == b.n4 && a.mask == b.mask &&
         a.points.size() == b.points.size() &&
         std::memcmp(a.points.data(), b.points.data(), a.points.size() * sizeof(TauPair)) == 0;
}

TauGrid map_grid_serial(const LambdaGrid& g) {
  TauGrid t = empty_image(g);
  for (std::size_t i = 0; i < t.n3; ++i) {
    for (std::size_t j = 0; j < t.n4; ++j) map_node(g, t, i, j);
  }
  return t;
}

TauGrid map_grid(const LambdaGrid& g) {
  TauGrid t = empty_image(g);
  const auto n3 = static_cast<std::ptrdiff_t>(t.n3);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n3; ++i) {
    for (std::size_t j = 0; j < t.n4; ++j) map_node(g, t, static_cast<std::size_t>(i), j);
  }
  return t;
}

std::vector<BoundaryCandidate> potential_boundary_points_serial(const TauGrid& t) {
  check_boundary_input(t);
  std::vector<BoundaryCandidate> out;
  BoundaryCandidate c;
  for (std::size_t i = 0; i < t.n3; ++i) {
    for (std::size_t j = 0; j < t.n4; ++j) {
      if (classify_node(t, i, j, c)) out.push_back(c);
    }
  }
  return out;
}

std::vector<BoundaryCandidate> potential_boundary_points(const TauGrid& t) {
  check_boundary_input(t);
  std::vector<std::vector<BoundaryCandidate>> rows(t.n3);
  const auto n3 = static_cast<std::ptrdiff_t>(t.n3);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n3; ++i) {
    BoundaryCandidate c;
    auto& row = rows[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < t.n4; ++j) {
      if (classify_node(t, static_cast<std::size_t>(i), j, c)) row.push_back(c);
    }
  }
  std::vector<BoundaryCandidate> out;
  for (auto& row : rows) out.insert(out.end(), row.begin(), row.end());
  return out;
}

}  // namespace gldlmom
