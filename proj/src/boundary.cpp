#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "gldlmom/atlas.hpp"
#include "gldlmom/error.hpp"

namespace gldlmom {

namespace {

constexpr int kMargin = 4;  // empty pixels around the image bounding box

double segment_distance(TauPair p, TauPair a, TauPair b) {
  const double vx = b.tau3 - a.tau3;
  const double vy = b.tau4 - a.tau4;
  const double len2 = vx * vx + vy * vy;
  double s = 0.0;
  if (len2 > 0.0) s = std::clamp(((p.tau3 - a.tau3) * vx + (p.tau4 - a.tau4) * vy) / len2, 0.0, 1.0);
  return std::hypot(p.tau3 - (a.tau3 + s * vx), p.tau4 - (a.tau4 + s * vy));
}

bool crosses_ray(TauPair p, TauPair a, TauPair b) {
  if ((a.tau4 > p.tau4) == (b.tau4 > p.tau4)) return false;
  const double x = a.tau3 + (p.tau4 - a.tau4) * (b.tau3 - a.tau3) / (b.tau4 - a.tau4);
  return p.tau3 < x;
}

// Edges of a closed polygon bucketed by horizontal band so that bulk
// inside-or-on queries only look at edges near the query height.
class BandIndex {
 public:
  BandIndex(const std::vector<TauPair>& poly, double tolerance) : poly_(poly), tol_(tolerance) {
    lo_ = hi_ = poly.front().tau4;
    for (const auto& v : poly) {
      lo_ = std::min(lo_, v.tau4);
      hi_ = std::max(hi_, v.tau4);
    }
    const std::size_t edges = poly.size() - 1;
    bands_.resize(std::clamp<std::size_t>(edges / 4, 1, 4096));
    width_ = (hi_ - lo_) / static_cast<double>(bands_.size());
    if (!(width_ > 0.0)) width_ = 1.0;
    for (std::size_t e = 0; e < edges; ++e) {
      const double y0 = std::min(poly[e].tau4, poly[e + 1].tau4) - tol_;
      const double y1 = std::max(poly[e].tau4, poly[e + 1].tau4) + tol_;
      for (std::size_t b = band(y0); b <= band(y1); ++b) bands_[b].push_back(e);
    }
  }

  bool inside_or_on(TauPair p) const {
    if (p.tau4 < lo_ - tol_ || p.tau4 > hi_ + tol_) return false;
    bool in = false;
    for (std::size_t e : bands_[band(p.tau4)]) {
      const TauPair a = poly_[e];
      const TauPair b = poly_[e + 1];
      if (segment_distance(p, a, b) <= tol_) return true;
      if (crosses_ray(p, a, b)) in = !in;
    }
    return in;
  }

 private:
  std::size_t band(double y) const {
    const double k = std::floor((y - lo_) / width_);
    return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(bands_.size() - 1)));
  }

  const std::vector<TauPair>& poly_;
  double tol_;
  double lo_ = 0.0, hi_ = 0.0, width_ = 1.0;
  std::vector<std::vector<std::size_t>> bands_;
};

struct Frame {
  double x0, y0;  // tau value at the centre of pixel (kMargin, kMargin)
  double dx, dy;  // pixel size
  int size;

  double px(double tau3) const { return (tau3 - x0) / dx + kMargin + 0.5; }
  double py(double tau4) const { return (tau4 - y0) / dy + kMargin + 0.5; }
  TauPair to_tau(double cx, double cy) const {
    return {x0 + (cx - kMargin - 0.5) * dx, y0 + (cy - kMargin - 0.5) * dy};
  }
};

class Raster {
 public:
  explicit Raster(int size) : n_(size), cells_(static_cast<std::size_t>(size) * size, 0) {}

  int size() const { return n_; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < n_ && y < n_; }
  std::uint8_t& at(int x, int y) { return cells_[static_cast<std::size_t>(y) * n_ + x]; }
  std::uint8_t at(int x, int y) const { return cells_[static_cast<std::size_t>(y) * n_ + x]; }
  bool set(int x, int y) const { return in_bounds(x, y) && at(x, y) != 0; }
  void mark(int x, int y) {
    if (in_bounds(x, y)) at(x, y) = 1;
  }

  // Every pixel the segment passes through (4-connected traversal).
  void draw(double x0, double y0, double x1, double y1) {
    int ix = static_cast<int>(std::floor(x0));
    int iy = static_cast<int>(std::floor(y0));
    const int ex = static_cast<int>(std::floor(x1));
    const int ey = static_cast<int>(std::floor(y1));
    const double vx = x1 - x0;
    const double vy = y1 - y0;
    const int sx = vx > 0 ? 1 : -1;
    const int sy = vy > 0 ? 1 : -1;
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double step_x = vx != 0.0 ? 1.0 / std::abs(vx) : inf;
    const double step_y = vy != 0.0 ? 1.0 / std::abs(vy) : inf;
    double next_x = vx != 0.0 ? (sx > 0 ? (ix + 1 - x0) : (x0 - ix)) * step_x : inf;
    double next_y = vy != 0.0 ? (sy > 0 ? (iy + 1 - y0) : (y0 - iy)) * step_y : inf;
    mark(ix, iy);
    int budget = std::abs(ex - ix) + std::abs(ey - iy);
    while ((ix != ex || iy != ey) && budget-- > 0) {
      if (next_x < next_y) {
        ix += sx;
        next_x += step_x;
      } else {
        iy += sy;
        next_y += step_y;
      }
      mark(ix, iy);
    }
    mark(ex, ey);
  }

 private:
  int n_;
  std::vector<std::uint8_t> cells_;
};

// Pixels not reachable from the border through unset pixels become set.
void fill_enclosed(Raster& r) {
  const int n = r.size();
  Raster outside(n);
  std::vector<std::pair<int, int>> stack;
  auto push = [&](int x, int y) {
    if (r.in_bounds(x, y) && !r.at(x, y) && !outside.at(x, y)) {
      outside.at(x, y) = 1;
      stack.emplace_back(x, y);
    }
  };
  for (int k = 0; k < n; ++k) {
    push(k, 0);
    push(k, n - 1);
    push(0, k);
    push(n - 1, k);
  }
  while (!stack.empty()) {
    const auto [x, y] = stack.back();
    stack.pop_back();
    push(x + 1, y);
    push(x - 1, y);
    push(x, y + 1);
    push(x, y - 1);
  }
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) r.at(x, y) = outside.at(x, y) ? 0 : 1;
}

void dilate(Raster& r) {
  const int n = r.size();
  Raster out(n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      if (!r.at(x, y)) continue;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) out.mark(x + dx, y + dy);
    }
  r = out;
}

// Fills one pixel of every 2x2 block whose set pixels touch only at a corner,
// so that each outline corner has a single outgoing edge.
bool fix_pinches(Raster& r) {
  bool changed = false;
  const int n = r.size();
  for (int y = 0; y + 1 < n; ++y)
    for (int x = 0; x + 1 < n; ++x) {
      const bool a = r.at(x, y), b = r.at(x + 1, y), c = r.at(x, y + 1), d = r.at(x + 1, y + 1);
      if ((a && d && !b && !c) || (b && c && !a && !d)) {
        r.at(a ? x + 1 : x, y) = 1;
        changed = true;
      }
    }
  return changed;
}

// 4-connected component labels; returns the number of components.
int label_components(const Raster& r, std::vector<int>& labels) {
  const int n = r.size();
  labels.assign(static_cast<std::size_t>(n) * n, -1);
  int count = 0;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      if (!r.at(x, y) || labels[static_cast<std::size_t>(y) * n + x] >= 0) continue;
      labels[static_cast<std::size_t>(y) * n + x] = count;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        const int nb[4][2] = {{cx + 1, cy}, {cx - 1, cy}, {cx, cy + 1}, {cx, cy - 1}};
        for (const auto& q : nb) {
          if (!r.set(q[0], q[1])) continue;
          int& l = labels[static_cast<std::size_t>(q[1]) * n + q[0]];
          if (l < 0) {
            l = count;
            stack.emplace_back(q[0], q[1]);
          }
        }
      }
      ++count;
    }
  return count;
}

// Joins every component to the largest one along shortest 4-connected paths.
void bridge_components(Raster& r) {
  std::vector<int> labels;
  const int count = label_components(r, labels);
  if (count <= 1) return;
  const int n = r.size();
  std::vector<std::size_t> sizes(static_cast<std::size_t>(count), 0);
  for (int l : labels)
    if (l >= 0) ++sizes[static_cast<std::size_t>(l)];
  const int main = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

  // Breadth-first search outward from the main component.
  std::vector<int> parent(static_cast<std::size_t>(n) * n, -2);
  std::vector<int> queue;
  for (int k = 0; k < n * n; ++k)
    if (labels[static_cast<std::size_t>(k)] == main) {
      parent[static_cast<std::size_t>(k)] = -1;
      queue.push_back(k);
    }
  std::vector<int> reached(static_cast<std::size_t>(count), -1);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int k = queue[head];
    const int x = k % n, y = k / n;
    const int l = labels[static_cast<std::size_t>(k)];
    if (l >= 0 && l != main && reached[static_cast<std::size_t>(l)] < 0) reached[static_cast<std::size_t>(l)] = k;
    const int nb[4][2] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
    for (const auto& q : nb) {
      if (!r.in_bounds(q[0], q[1])) continue;
      const int m = q[1] * n + q[0];
      if (parent[static_cast<std::size_t>(m)] != -2) continue;
      parent[static_cast<std::size_t>(m)] = k;
      queue.push_back(m);
    }
  }
  for (int l = 0; l < count; ++l) {
    for (int k = reached[static_cast<std::size_t>(l)]; k >= 0; k = parent[static_cast<std::size_t>(k)]) {
      r.at(k % n, k / n) = 1;
    }
  }
}

using Corner = std::pair<int, int>;

// Counterclockwise outline of the set pixels along pixel edges. Expects a
// single hole-free, pinch-free component; returns empty otherwise.
std::vector<Corner> trace_outline(const Raster& r) {
  const int n = r.size();
  const int stride = n + 1;
  std::vector<int> next(static_cast<std::size_t>(stride) * stride, -1);
  std::size_t edges = 0;
  int start = -1;
  auto link = [&](int ax, int ay, int bx, int by) {
    int& slot = next[static_cast<std::size_t>(ay) * stride + ax];
    if (slot >= 0) return false;
    slot = by * stride + bx;
    ++edges;
    if (start < 0) start = ay * stride + ax;
    return true;
  };
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      if (!r.at(x, y)) continue;
      bool ok = true;
      if (!r.set(x, y - 1)) ok &= link(x, y, x + 1, y);
      if (!r.set(x + 1, y)) ok &= link(x + 1, y, x + 1, y + 1);
      if (!r.set(x, y + 1)) ok &= link(x + 1, y + 1, x, y + 1);
      if (!r.set(x - 1, y)) ok &= link(x, y + 1, x, y);
      if (!ok) return {};
    }
  if (start < 0) return {};

  std::vector<Corner> loop;
  int k = start;
  do {
    loop.emplace_back(k % stride, k / stride);
    k = next[static_cast<std::size_t>(k)];
  } while (k >= 0 && k != start && loop.size() <= edges);
  if (k != start || loop.size() != edges) return {};

  // Keep only the corners where the direction changes.
  std::vector<Corner> corners;
  const std::size_t m = loop.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Corner& prev = loop[(i + m - 1) % m];
    const Corner& cur = loop[i];
    const Corner& nxt = loop[(i + 1) % m];
    const bool straight = (cur.first - prev.first == nxt.first - cur.first) &&
                          (cur.second - prev.second == nxt.second - cur.second);
    if (!straight) corners.push_back(cur);
  }
  return corners;
}

struct Pt {
  double x, y;
};

double line_distance(Pt p, Pt a, Pt b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len = std::hypot(vx, vy);
  if (len == 0.0) return std::hypot(p.x - a.x, p.y - a.y);
  return std::abs(vx * (p.y - a.y) - vy * (p.x - a.x)) / len;
}

void douglas_peucker(const std::vector<Pt>& pts, std::size_t lo, std::size_t hi, double eps,
                     std::vector<std::uint8_t>& keep) {
  std::vector<std::pair<std::size_t, std::size_t>> stack{{lo, hi}};
  while (!stack.empty()) {
    const auto [a, b] = stack.back();
    stack.pop_back();
    if (b <= a + 1) continue;
    double worst = -1.0;
    std::size_t at = a;
    for (std::size_t k = a + 1; k < b; ++k) {
      const double d = line_distance(pts[k], pts[a], pts[b]);
      if (d > worst) {
        worst = d;
        at = k;
      }
    }
    if (worst > eps) {
      keep[at] = 1;
      stack.emplace_back(a, at);
      stack.emplace_back(at, b);
    }
  }
}

// Closed-ring simplification: split at vertex 0 and its farthest vertex.
std::vector<Pt> simplify_ring(const std::vector<Pt>& ring, double eps) {
  const std::size_t m = ring.size();
  if (m < 4) return ring;
  std::size_t far = 0;
  double best = -1.0;
  for (std::size_t k = 1; k < m; ++k) {
    const double d = std::hypot(ring[k].x - ring[0].x, ring[k].y - ring[0].y);
    if (d > best) {
      best = d;
      far = k;
    }
  }
  std::vector<Pt> open(ring.begin(), ring.end());
  open.push_back(ring[0]);
  std::vector<std::uint8_t> keep(open.size(), 0);
  keep[0] = keep[far] = keep[m] = 1;
  douglas_peucker(open, 0, far, eps, keep);
  douglas_peucker(open, far, m, eps, keep);
  std::vector<Pt> out;
  for (std::size_t k = 0; k < m; ++k)
    if (keep[k]) out.push_back(open[k]);
  return out;
}

Frame make_frame(const TauGrid& t, int size) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (std::size_t k = 0; k < t.points.size(); ++k) {
    if (!t.mask[k]) continue;
    xmin = std::min(xmin, t.points[k].tau3);
    xmax = std::max(xmax, t.points[k].tau3);
    ymin = std::min(ymin, t.points[k].tau4);
    ymax = std::max(ymax, t.points[k].tau4);
  }
  const double inner = static_cast<double>(size - 2 * kMargin - 1);
  auto pixel = [&](double lo, double hi) {
    const double span = hi - lo;
    return span > 0.0 ? span / inner : std::max(1e-12, 1e-9 * std::abs(lo)) / inner;
  };
  return {xmin, ymin, pixel(xmin, xmax), pixel(ymin, ymax), size};
}

void draw_mesh(const TauGrid& t, const Frame& f, const std::vector<std::uint8_t>& flagged, bool all_edges,
               Raster& r) {
  auto edge = [&](std::size_t a, std::size_t b) {
    if (!t.mask[a] || !t.mask[b]) return;
    if (!all_edges && !flagged[a] && !flagged[b]) return;
    r.draw(f.px(t.points[a].tau3), f.py(t.points[a].tau4), f.px(t.points[b].tau3), f.py(t.points[b].tau4));
  };
  for (std::size_t i = 0; i < t.n3; ++i)
    for (std::size_t j = 0; j < t.n4; ++j) {
      const std::size_t k = t.index(i, j);
      if (!t.mask[k]) continue;
      const TauPair p = t.points[k];
      r.mark(static_cast<int>(std::floor(f.px(p.tau3))), static_cast<int>(std::floor(f.py(p.tau4))));
      if (i + 1 < t.n3) edge(k, t.index(i + 1, j));
      if (j + 1 < t.n4) edge(k, t.index(i, j + 1));
    }
}

std::vector<TauPair> outline(Raster& r, const Frame& f) {
  fill_enclosed(r);
  dilate(r);
  for (int guard = 0; guard < 64; ++guard) {
    fill_enclosed(r);
    if (!fix_pinches(r)) break;
  }
  const auto corners = trace_outline(r);
  if (corners.size() < 3) return {};
  std::vector<Pt> ring;
  ring.reserve(corners.size());
  for (const auto& c : corners) ring.push_back({static_cast<double>(c.first), static_cast<double>(c.second)});
  ring = simplify_ring(ring, 0.5);
  std::vector<TauPair> poly;
  poly.reserve(ring.size() + 1);
  for (const auto& p : ring) poly.push_back(f.to_tau(p.x, p.y));
  poly.push_back(poly.front());
  return poly;
}

bool covers_all(const std::vector<TauPair>& poly, const TauGrid& t) {
  if (poly.size() < 4) return false;
  const BandIndex index(poly, 1e-9);
  for (std::size_t k = 0; k < t.points.size(); ++k) {
    if (t.mask[k] && !index.inside_or_on(t.points[k])) return false;
  }
  return true;
}

}  // namespace

bool BoundaryPolygon::contains(TauPair p, double tolerance) const {
  if (vertices.size() < 4) return false;
  bool in = false;
  for (std::size_t e = 0; e + 1 < vertices.size(); ++e) {
    if (segment_distance(p, vertices[e], vertices[e + 1]) <= tolerance) return true;
    if (crosses_ray(p, vertices[e], vertices[e + 1])) in = !in;
  }
  return in;
}

BoundaryPolygon assemble_boundary(std::span<const BoundaryCandidate> candidates, const TauGrid& t,
                                  const BoundaryOptions& options) {
  if (candidates.empty()) throw Error(ErrorKind::DomainError, "boundary assembly needs at least one candidate");
  if (t.valid_count() == 0) throw Error(ErrorKind::DomainError, "boundary assembly needs valid grid points");
  if (options.raster < 64 || options.raster > 16384) {
    throw Error(ErrorKind::DomainError, "boundary raster must be between 64 and 16384 pixels");
  }
  const int size = static_cast<int>(options.raster);
  const Frame frame = make_frame(t, size);

  std::vector<std::uint8_t> flagged(t.points.size(), 0);
  for (const auto& c : candidates) {
    if (c.i >= t.n3 || c.j >= t.n4) throw Error(ErrorKind::DomainError, "boundary candidate outside the grid");
    flagged[t.index(c.i, c.j)] = 1;
  }

  BoundaryPolygon out;
  out.region = t.region;

  {
    Raster r(size);
    draw_mesh(t, frame, flagged, false, r);
    fill_enclosed(r);
    std::vector<int> labels;
    if (label_components(r, labels) == 1) {
      out.vertices = outline(r, frame);
      out.mode = AssemblyMode::CandidateChain;
      if (covers_all(out.vertices, t)) return out;
    }
  }

  Raster r(size);
  draw_mesh(t, frame, flagged, true, r);
  fill_enclosed(r);
  bridge_components(r);
  out.vertices = outline(r, frame);
  out.mode = AssemblyMode::FullMesh;
  if (!covers_all(out.vertices, t)) {
    throw Error(ErrorKind::AssemblyFailure, "boundary polygon does not enclose every valid grid image");
  }
  return out;
}

}  // namespace gldlmom
