#pragma once

// Vertical-slab decomposition of the arrangement formed by a polygon's edges
// and a set of extra segments lying in the closed polygon. Every slab
// between consecutive event abscissae is cut into trapezoids by the segments
// crossing it; trapezoids inside the polygon are glued across slab walls
// into faces wherever the shared wall is not blocked by a vertical segment.

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "gallery/lattice.hpp"
#include "gallery/polygon.hpp"

namespace gallery {

struct ArrangementSegment {
  Point a, b;  // a < b lexicographically
  bool boundary = false;

  bool vertical() const { return a.x == b.x; }
  Rational y_at(const Rational& x) const { return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x); }
};

struct Trapezoid {
  std::size_t slab;
  std::size_t lower, upper;  // segment indices
  std::size_t face = 0;
};

// Open interval x = X, ylo < y < yhi shared by two glued trapezoids.
struct Connector {
  std::size_t wall;  // index into Arrangement::xs
  Rational ylo, yhi;
  std::size_t face = 0;
};

struct Face {
  std::vector<std::size_t> traps;       // ascending
  std::vector<std::size_t> connectors;  // ascending
};

class Arrangement {
 public:
  std::vector<ArrangementSegment> segments;
  std::vector<Rational> xs;           // slab walls
  std::vector<Trapezoid> traps;       // only those inside the polygon
  std::vector<Connector> connectors;
  std::vector<Face> faces;
  std::vector<Point> vertices;        // sorted, unique
  std::vector<std::vector<Point>> on_segment;  // sorted vertices along each segment

  // A point strictly inside the trapezoid, at fraction f of its height over the slab midline.
  Point trap_point(std::size_t t, const Rational& f = Rational(1, 2)) const {
    return trap_point(t, Rational(1, 2), f);
  }

  // Fractions fx across the slab and fy up the trapezoid, both in (0, 1).
  Point trap_point(std::size_t t, const Rational& fx, const Rational& fy) const {
    const Trapezoid& tr = traps[t];
    Rational x = xs[tr.slab] + (xs[tr.slab + 1] - xs[tr.slab]) * fx;
    Rational lo = segments[tr.lower].y_at(x), hi = segments[tr.upper].y_at(x);
    return {x, lo + (hi - lo) * fy};
  }

  // Deterministic representative of a face: midpoint of its first trapezoid.
  Point face_witness(std::size_t f) const { return trap_point(faces[f].traps.front()); }

  // A lattice point in the open face, if the face contains one.
  std::optional<Point> face_lattice_point(std::size_t f, const Rational& w) const {
    for (std::size_t t : faces[f].traps) {
      const Trapezoid& tr = traps[t];
      const auto& lo = segments[tr.lower];
      const auto& hi = segments[tr.upper];
      if (auto p = lattice::in_open_trapezoid(w, xs[tr.slab], xs[tr.slab + 1], lo.a, lo.b, hi.a, hi.b)) return p;
    }
    for (std::size_t c : faces[f].connectors) {
      const Connector& cn = connectors[c];
      if (auto p = lattice::on_open_vertical(w, xs[cn.wall], cn.ylo, cn.yhi)) return p;
    }
    return std::nullopt;
  }
};

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

inline bool boxes_overlap(const ArrangementSegment& s, const ArrangementSegment& t) {
  // s.a.x <= s.b.x always; y extents need sorting.
  if (t.b.x < s.a.x || s.b.x < t.a.x) return false;
  const Rational& sy0 = std::min(s.a.y, s.b.y);
  const Rational& sy1 = std::max(s.a.y, s.b.y);
  const Rational& ty0 = std::min(t.a.y, t.b.y);
  const Rational& ty1 = std::max(t.a.y, t.b.y);
  return !(ty1 < sy0 || sy1 < ty0);
}

// Open sub-intervals of (lo, hi) not covered by the sorted, merged closed intervals.
inline std::vector<std::pair<Rational, Rational>> uncovered_parts(
    const Rational& lo, const Rational& hi, const std::vector<std::pair<Rational, Rational>>& cover) {
  std::vector<std::pair<Rational, Rational>> out;
  Rational cur = lo;
  for (const auto& [a, b] : cover) {
    if (b <= cur) continue;
    if (a >= hi) break;
    if (a > cur) out.emplace_back(cur, a);
    cur = b;
    if (cur >= hi) return out;
  }
  if (cur < hi) out.emplace_back(cur, hi);
  return out;
}

}  // namespace detail

// The arrangement of the polygon boundary and `extra` segments, which must
// lie in the closed polygon. Faces cover exactly the polygon interior minus
// the union of all segments.
inline Arrangement build_arrangement(const Polygon& poly, const std::vector<std::pair<Point, Point>>& extra) {
  Arrangement arr;
  std::vector<ArrangementSegment> raw;
  poly.for_each_edge([&](std::size_t, std::size_t, const Point& a, const Point& b) {
    raw.push_back({std::min(a, b), std::max(a, b), true});
  });
  for (const auto& [p, q] : extra)
    if (p != q) raw.push_back({std::min(p, q), std::max(p, q), false});
  std::sort(raw.begin(), raw.end(), [](const ArrangementSegment& s, const ArrangementSegment& t) {
    if (s.a != t.a) return s.a < t.a;
    if (s.b != t.b) return s.b < t.b;
    return s.boundary && !t.boundary;
  });
  for (auto& s : raw)
    if (arr.segments.empty() || arr.segments.back().a != s.a || arr.segments.back().b != s.b)
      arr.segments.push_back(std::move(s));
  const std::size_t ns = arr.segments.size();

  // Pairwise intersections, swept by left endpoint.
  arr.on_segment.assign(ns, {});
  for (std::size_t i = 0; i < ns; ++i) {
    arr.on_segment[i].push_back(arr.segments[i].a);
    arr.on_segment[i].push_back(arr.segments[i].b);
  }
  for (std::size_t i = 0; i < ns; ++i) {
    const auto& s = arr.segments[i];
    for (std::size_t j = i + 1; j < ns && arr.segments[j].a.x <= s.b.x; ++j) {
      const auto& t = arr.segments[j];
      if (!detail::boxes_overlap(s, t)) continue;
      SegmentIntersection x = segment_intersection(Segment(s.a, s.b), Segment(t.a, t.b));
      if (auto* p = std::get_if<Point>(&x)) {
        arr.on_segment[i].push_back(*p);
        arr.on_segment[j].push_back(*p);
      } else if (auto* o = std::get_if<Segment>(&x)) {
        for (std::size_t k : {i, j}) {
          arr.on_segment[k].push_back(o->a);
          arr.on_segment[k].push_back(o->b);
        }
      }
    }
  }
  for (auto& pts : arr.on_segment) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    arr.vertices.insert(arr.vertices.end(), pts.begin(), pts.end());
  }
  std::sort(arr.vertices.begin(), arr.vertices.end());
  arr.vertices.erase(std::unique(arr.vertices.begin(), arr.vertices.end()), arr.vertices.end());
  for (const auto& v : arr.vertices)
    if (arr.xs.empty() || arr.xs.back() != v.x) arr.xs.push_back(v.x);
  const std::size_t nx = arr.xs.size();
  if (nx < 2) return arr;

  auto wall_of = [&](const Rational& x) {
    return static_cast<std::size_t>(std::lower_bound(arr.xs.begin(), arr.xs.end(), x) - arr.xs.begin());
  };

  // Vertical segments per wall, merged into disjoint closed intervals.
  std::vector<std::vector<std::pair<Rational, Rational>>> walls(nx);
  for (const auto& s : arr.segments)
    if (s.vertical()) walls[wall_of(s.a.x)].emplace_back(s.a.y, s.b.y);
  for (auto& w : walls) {
    std::sort(w.begin(), w.end());
    std::vector<std::pair<Rational, Rational>> merged;
    for (auto& iv : w) {
      if (!merged.empty() && iv.first <= merged.back().second)
        merged.back().second = std::max(merged.back().second, iv.second);
      else
        merged.push_back(iv);
    }
    w = std::move(merged);
  }

  // Sweep the slabs. Segments do not cross inside a slab, so ordering by the
  // heights on both walls is the order across the whole slab.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < ns; ++i)
    if (!arr.segments[i].vertical()) order.push_back(i);  // already sorted by a
  std::vector<std::pair<std::size_t, Rational>> last_y(ns, {SIZE_MAX, Rational()});
  auto y_on_wall = [&](std::size_t i, std::size_t k) -> const Rational& {
    auto& [wall, y] = last_y[i];
    if (wall != k) {
      const auto& s = arr.segments[i];
      y = arr.xs[k] == s.a.x ? s.a.y : arr.xs[k] == s.b.x ? s.b.y : s.y_at(arr.xs[k]);
      wall = k;
    }
    return y;
  };
  struct Heights {
    Rational lo0, hi0, lo1, hi1;  // on the left and right walls
  };
  std::vector<Heights> heights;
  std::vector<std::size_t> active;
  std::size_t next = 0;
  std::vector<std::size_t> slab_begin(nx, 0);  // first trapezoid of each slab
  struct Entry {
    Rational y0, y1;
    std::size_t seg;
  };
  std::vector<Entry> stack;
  for (std::size_t k = 0; k + 1 < nx; ++k) {
    slab_begin[k] = arr.traps.size();
    const Rational& x0 = arr.xs[k];
    while (next < order.size() && arr.segments[order[next]].a.x <= x0) active.push_back(order[next++]);
    std::erase_if(active, [&](std::size_t i) { return arr.segments[i].b.x <= x0; });
    stack.clear();
    for (std::size_t i : active) {
      Rational y0 = y_on_wall(i, k);
      stack.push_back({std::move(y0), y_on_wall(i, k + 1), i});
    }
    std::sort(stack.begin(), stack.end(), [](const Entry& u, const Entry& v) {
      if (u.y0 != v.y0) return u.y0 < v.y0;
      return u.y1 < v.y1;
    });
    int parity = 0;
    for (std::size_t r = 0; r + 1 < stack.size(); ++r) {
      if (arr.segments[stack[r].seg].boundary) parity ^= 1;
      if (parity && (stack[r].y0 != stack[r + 1].y0 || stack[r].y1 != stack[r + 1].y1)) {
        arr.traps.push_back({k, stack[r].seg, stack[r + 1].seg});
        heights.push_back({stack[r].y0, stack[r + 1].y0, stack[r].y1, stack[r + 1].y1});
      }
    }
  }
  slab_begin[nx - 1] = arr.traps.size();

  // Glue across interior walls.
  detail::UnionFind uf(arr.traps.size());
  struct PendingConnector {
    std::size_t wall, trap;
    Rational lo, hi;
  };
  std::vector<PendingConnector> pending;
  for (std::size_t k = 1; k + 1 < nx; ++k) {
    std::size_t l = slab_begin[k - 1], le = slab_begin[k];
    std::size_t r = slab_begin[k], re = slab_begin[k + 1];
    while (l < le && r < re) {
      const Rational& l_lo = heights[l].lo1;
      const Rational& l_hi = heights[l].hi1;
      const Rational& r_lo = heights[r].lo0;
      const Rational& r_hi = heights[r].hi0;
      const Rational& lo = std::max(l_lo, r_lo);
      const Rational& hi = std::min(l_hi, r_hi);
      if (lo < hi) {
        auto parts = detail::uncovered_parts(lo, hi, walls[k]);
        if (!parts.empty()) {
          uf.unite(l, r);
          for (auto& [a, b] : parts) pending.push_back({k, l, std::move(a), std::move(b)});
        }
      }
      if (l_hi < r_hi)
        ++l;
      else if (r_hi < l_hi)
        ++r;
      else {
        ++l;
        ++r;
      }
    }
  }

  std::vector<std::size_t> face_of_root(arr.traps.size(), SIZE_MAX);
  for (std::size_t t = 0; t < arr.traps.size(); ++t) {
    std::size_t root = uf.find(t);
    if (face_of_root[root] == SIZE_MAX) {
      face_of_root[root] = arr.faces.size();
      arr.faces.emplace_back();
    }
    arr.traps[t].face = face_of_root[root];
    arr.faces[arr.traps[t].face].traps.push_back(t);
  }
  for (auto& pc : pending) {
    std::size_t f = arr.traps[pc.trap].face;
    arr.faces[f].connectors.push_back(arr.connectors.size());
    arr.connectors.push_back({pc.wall, std::move(pc.lo), std::move(pc.hi), f});
  }
  return arr;
}

inline std::vector<std::pair<Point, Point>> ring_segments(const Ring& ring) {
  std::vector<std::pair<Point, Point>> out;
  for (std::size_t i = 0; i < ring.size(); ++i) out.emplace_back(ring[i], ring[(i + 1) % ring.size()]);
  return out;
}

}  // namespace gallery
