#include <array>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "gldlmom/atlas.hpp"
#include "gldlmom/error.hpp"

namespace gldlmom {

namespace {

double statistic_of(TauPair t, Statistic s) { return s == Statistic::Tau3 ? t.tau3 : t.tau4; }

struct EdgeSolver {
  const LambdaGrid& g;
  Statistic stat;
  double level;

  double eval(ShapePair a, ShapePair b, double s) const {
    const ShapePair p{a.lambda3 + s * (b.lambda3 - a.lambda3), a.lambda4 + s * (b.lambda4 - a.lambda4)};
    return statistic_of(shape_ratios(p), stat) - level;
  }

  // Point on the edge a-b where the statistic crosses the level, given the
  // node values fa = f(a) and fb = f(b) of opposite classification.
  ShapePair solve(ShapePair a, ShapePair b, double fa, double fb) const {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    double lo = 0.0, hi = 1.0, flo = fa, fhi = fb;
    int side = 0;
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
      const double s = (lo * fhi - hi * flo) / (fhi - flo);
      const double fs = eval(a, b, s);
      if (std::isnan(fs)) {
        return lerp(a, b, fa / (fa - fb));
      }
      if (fs == 0.0) return lerp(a, b, s);
      if ((fs > 0.0) == (flo > 0.0)) {
        lo = s;
        flo = fs;
        if (side == -1) fhi *= 0.5;
        side = -1;
      } else {
        hi = s;
        fhi = fs;
        if (side == 1) flo *= 0.5;
        side = 1;
      }
    }
    return lerp(a, b, std::abs(flo) < std::abs(fhi) ? lo : hi);
  }

  static ShapePair lerp(ShapePair a, ShapePair b, double s) {
    return {a.lambda3 + s * (b.lambda3 - a.lambda3), a.lambda4 + s * (b.lambda4 - a.lambda4)};
  }
};

std::vector<Polyline> trace_level(const LambdaGrid& g, const TauGrid& t, Statistic stat, double level) {
  const std::size_t n3 = g.n3(), n4 = g.n4();
  const EdgeSolver solver{g, stat, level};
  std::vector<ShapePair> vertices;
  std::vector<std::array<int, 2>> links;
  std::unordered_map<std::uint64_t, int> by_edge;

  auto value = [&](std::size_t i, std::size_t j) { return statistic_of(t.at(i, j), stat) - level; };
  // Edge (i, j)-(i+1, j) has key 2k, edge (i, j)-(i, j+1) has key 2k+1.
  auto vertex = [&](std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1) {
    const std::uint64_t key = 2 * static_cast<std::uint64_t>(t.index(i0, j0)) + (i1 == i0 ? 1 : 0);
    auto [it, fresh] = by_edge.try_emplace(key, static_cast<int>(vertices.size()));
    if (fresh) {
      vertices.push_back(solver.solve(g.node(i0, j0), g.node(i1, j1), value(i0, j0), value(i1, j1)));
      links.push_back({-1, -1});
    }
    return it->second;
  };
  auto connect = [&](int a, int b) {
    for (auto [u, v] : {std::pair{a, b}, std::pair{b, a}}) {
      auto& l = links[static_cast<std::size_t>(u)];
      (l[0] < 0 ? l[0] : l[1]) = v;
    }
  };

  for (std::size_t i = 0; i + 1 < n3; ++i)
    for (std::size_t j = 0; j + 1 < n4; ++j) {
      if (!t.valid(i, j) || !t.valid(i + 1, j) || !t.valid(i + 1, j + 1) || !t.valid(i, j + 1)) continue;
      // Corners counterclockwise from (i, j); edges e0 bottom, e1 right, e2 top, e3 left.
      const double v0 = value(i, j), v1 = value(i + 1, j), v2 = value(i + 1, j + 1), v3 = value(i, j + 1);
      const bool b0 = v0 >= 0, b1 = v1 >= 0, b2 = v2 >= 0, b3 = v3 >= 0;
      const int mask = b0 | (b1 << 1) | (b2 << 2) | (b3 << 3);
      if (mask == 0 || mask == 15) continue;
      auto e0 = [&] { return vertex(i, j, i + 1, j); };
      auto e1 = [&] { return vertex(i + 1, j, i + 1, j + 1); };
      auto e2 = [&] { return vertex(i, j + 1, i + 1, j + 1); };
      auto e3 = [&] { return vertex(i, j, i, j + 1); };
      switch (mask) {
        case 1: case 14: connect(e0(), e3()); break;
        case 2: case 13: connect(e0(), e1()); break;
        case 4: case 11: connect(e1(), e2()); break;
        case 8: case 7: connect(e2(), e3()); break;
        case 3: case 12: connect(e1(), e3()); break;
        case 6: case 9: connect(e0(), e2()); break;
        case 5: case 10: {
          const bool centre = 0.25 * (v0 + v1 + v2 + v3) >= 0;
          // Centre joins corners 0 and 2 when it matches them.
          if (centre == b0) {
            connect(e0(), e1());
            connect(e2(), e3());
          } else {
            connect(e0(), e3());
            connect(e1(), e2());
          }
          break;
        }
        default: break;
      }
    }

  std::vector<Polyline> out;
  std::vector<std::uint8_t> used(vertices.size(), 0);
  auto walk = [&](int start) {
    Polyline line;
    int prev = -1, cur = start;
    while (cur >= 0 && !used[static_cast<std::size_t>(cur)]) {
      used[static_cast<std::size_t>(cur)] = 1;
      const ShapePair p = vertices[static_cast<std::size_t>(cur)];
      if (line.empty() || !(line.back() == p)) line.push_back(p);
      const auto& l = links[static_cast<std::size_t>(cur)];
      const int nxt = l[0] != prev ? l[0] : l[1];
      prev = cur;
      cur = nxt;
    }
    // Closed loops revisit their start.
    if (cur == start && line.size() > 1) line.push_back(line.front());
    if (line.size() >= 2) out.push_back(std::move(line));
  };
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if (!used[v] && links[v][1] < 0) walk(static_cast<int>(v));
  }
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if (!used[v]) walk(static_cast<int>(v));
  }
  return out;
}

}  // namespace

ContourSet contours(const LambdaGrid& g, Statistic statistic, std::span<const double> levels) {
  if (levels.empty()) throw Error(ErrorKind::DomainError, "contours need at least one level");
  for (double level : levels) {
    const bool ok = statistic == Statistic::Tau3 ? (level > -1.0 && level < 1.0) : (level >= -0.25 && level < 1.0);
    if (!ok) {
      std::ostringstream msg;
      msg << "contour level " << level << " lies outside the feasible ratio range";
      throw Error(ErrorKind::DomainError, msg.str());
    }
  }
  const TauGrid t = map_grid(g);
  ContourSet out;
  out.region = g.region;
  out.statistic = statistic;
  out.levels.assign(levels.begin(), levels.end());
  for (double level : levels) {
    auto lines = trace_level(g, t, statistic, level);
    if (lines.empty()) {
      std::ostringstream msg;
      msg << "no contour at level " << level << " in region " << to_string(g.region);
      throw Error(ErrorKind::EmptyContour, msg.str());
    }
    out.polylines.push_back(std::move(lines));
  }
  return out;
}

}  // namespace gldlmom
