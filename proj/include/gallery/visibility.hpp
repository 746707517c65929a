#pragma once

// Exact visibility inside a closed polygon with holes. A guard sees a point
// when the connecting segment has no point in the polygon's exterior, so
// grazing a vertex or running along an edge still counts.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "gallery/polygon.hpp"

namespace gallery {

class VisibilityError : public std::runtime_error {
 public:
  explicit VisibilityError(const std::string& what) : std::runtime_error("PointOutsidePolygon: " + what) {}
};

// ----------------------------------------------------------------------------
// Angular order without trigonometry

struct AngleKey {
  int quadrant;  // 0: [0, pi/2), 1: [pi/2, pi), 2: [pi, 3pi/2), 3: [3pi/2, 2pi)
  Point dir;
};

inline int quadrant_of(const Point& d) {
  int sx = d.x.sign(), sy = d.y.sign();
  if (sx > 0 && sy >= 0) return 0;
  if (sx <= 0 && sy > 0) return 1;
  if (sx < 0 && sy <= 0) return 2;
  return 3;
}

inline AngleKey angle_sort_key(const Point& g, const Point& v) {
  if (g == v) throw std::invalid_argument("angle_sort_key: v coincides with g");
  Point d = v - g;
  return {quadrant_of(d), d};
}

// Strict weak order by counterclockwise angle from the +x axis.
inline bool angle_less(const AngleKey& a, const AngleKey& b) {
  if (a.quadrant != b.quadrant) return a.quadrant < b.quadrant;
  return cross(a.dir, b.dir).sign() > 0;
}

inline bool same_direction(const AngleKey& a, const AngleKey& b) {
  return a.quadrant == b.quadrant && cross(a.dir, b.dir).is_zero();
}

// ----------------------------------------------------------------------------
// Segment containment

namespace detail {

inline bool bbox_disjoint(const Point& a, const Point& b, const Point& c, const Point& d) {
  const Rational& ax = a.x < b.x ? a.x : b.x;
  const Rational& bx = a.x < b.x ? b.x : a.x;
  if (c.x < ax && d.x < ax) return true;
  if (c.x > bx && d.x > bx) return true;
  const Rational& ay = a.y < b.y ? a.y : b.y;
  const Rational& by = a.y < b.y ? b.y : a.y;
  if (c.y < ay && d.y < ay) return true;
  if (c.y > by && d.y > by) return true;
  return false;
}

// Segment gp without the endpoint checks. Splits gp at every polygon vertex
// lying on it; between splits the segment is uniformly interior, boundary
// or exterior, so one midpoint test per piece decides it.
inline bool segment_inside(const Polygon& poly, const Point& g, const Point& p) {
  if (g == p) return true;
  std::vector<Point> splits;
  bool blocked = false;
  poly.for_each_edge([&](std::size_t, std::size_t, const Point& a, const Point& b) {
    if (blocked || bbox_disjoint(g, p, a, b)) return;
    int o1 = orient_sign(g, p, a), o2 = orient_sign(g, p, b);
    if (o1 * o2 < 0) {
      int o3 = orient_sign(a, b, g), o4 = orient_sign(a, b, p);
      if (o3 * o4 < 0) {
        blocked = true;
        return;
      }
    }
    // Only the tail vertex is recorded; each vertex is the tail of exactly one edge.
    if (o1 == 0 && a != g && a != p && within_collinear(a, g, p)) splits.push_back(a);
  });
  if (blocked) return false;
  if (splits.empty()) return point_in_polygon(midpoint(g, p), poly) != Location::Exterior;
  const bool forward = g < p;
  std::sort(splits.begin(), splits.end(), [&](const Point& u, const Point& v) { return forward ? u < v : v < u; });
  Point prev = g;
  for (const auto& s : splits) {
    if (point_in_polygon(midpoint(prev, s), poly) == Location::Exterior) return false;
    prev = s;
  }
  return point_in_polygon(midpoint(prev, p), poly) != Location::Exterior;
}

}  // namespace detail

inline bool sees(const Polygon& poly, const Point& g, const Point& p) {
  if (point_in_polygon(g, poly) == Location::Exterior) throw VisibilityError("guard outside polygon");
  if (point_in_polygon(p, poly) == Location::Exterior) throw VisibilityError("target outside polygon");
  return detail::segment_inside(poly, g, p);
}

// ----------------------------------------------------------------------------
// Visibility polygon

struct VisibilityPolygon {
  Point apex;
  Ring boundary;                // counterclockwise, star-shaped about apex
  std::vector<AngleKey> rays;   // directions from apex to polygon vertices, angle-sorted, unique

  // Exact membership in the visible set. The ring bounds the two-dimensional
  // part; zero-width visible spurs can only run along rays through polygon
  // vertices, and those are settled with a direct segment test.
  bool contains(const Polygon& poly, const Point& p) const {
    if (locate_in_ring(p, boundary) != Location::Exterior) return true;
    if (p == apex) return true;
    AngleKey k = angle_sort_key(apex, p);
    auto it = std::lower_bound(rays.begin(), rays.end(), k, angle_less);
    if (it == rays.end() || !same_direction(*it, k)) return false;
    if (point_in_polygon(p, poly) == Location::Exterior) return false;
    return detail::segment_inside(poly, apex, p);
  }
};

namespace detail {

struct RayHit {
  bool found = false;
  Rational s;  // parameter along the ray direction
  Point a, b;  // the edge hit
};

// First edge hit by the ray apex + s * dir, s > 0. The ray must not pass
// through any polygon vertex other than the apex.
inline RayHit first_hit(const Polygon& poly, const Point& apex, const Point& dir) {
  RayHit best;
  poly.for_each_edge([&](std::size_t, std::size_t, const Point& a, const Point& b) {
    Point e = b - a;
    Rational denom = cross(dir, e);
    if (denom.is_zero()) return;
    Point ga = a - apex;
    Rational s = cross(ga, e) / denom;
    if (s.sign() <= 0) return;
    Rational u = cross(ga, dir) / denom;
    if (u.sign() < 0 || u > Rational(1)) return;
    if (!best.found || s < best.s) best = RayHit{true, s, a, b};
  });
  return best;
}

inline Point ray_meets_line(const Point& apex, const Point& dir, const Point& a, const Point& b) {
  Point e = b - a;
  return apex + (cross(a - apex, e) / cross(dir, e)) * dir;
}

}  // namespace detail

inline VisibilityPolygon visibility_polygon(const Polygon& poly, const Point& g) {
  const Location where = point_in_polygon(g, poly);
  if (where == Location::Exterior) throw VisibilityError("guard outside polygon");

  VisibilityPolygon vp;
  vp.apex = g;
  for (std::size_t r = 0; r < poly.ring_count(); ++r)
    for (const auto& v : poly.ring(r))
      if (v != g) vp.rays.push_back(angle_sort_key(g, v));
  std::sort(vp.rays.begin(), vp.rays.end(), angle_less);
  vp.rays.erase(std::unique(vp.rays.begin(), vp.rays.end(), same_direction), vp.rays.end());

  // Sweep directions: vertex rays plus the axes, so consecutive directions are
  // less than pi apart and their sum lies strictly between them.
  std::vector<AngleKey> dirs = vp.rays;
  for (const Point& axis : {Point{1, 0}, Point{0, 1}, Point{-1, 0}, Point{0, -1}})
    dirs.push_back({quadrant_of(axis), axis});
  std::sort(dirs.begin(), dirs.end(), angle_less);
  dirs.erase(std::unique(dirs.begin(), dirs.end(), same_direction), dirs.end());

  Ring ring;
  const std::size_t m = dirs.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point& d0 = dirs[i].dir;
    const Point& d1 = dirs[(i + 1) % m].dir;
    Point mid = d0 + d1;
    detail::RayHit hit = detail::first_hit(poly, g, mid);
    bool open = hit.found;
    if (open && where == Location::Boundary) {
      // A guard on the boundary may face straight out of the polygon.
      Point probe = g + (hit.s * Rational(1, 2)) * mid;
      open = point_in_polygon(probe, poly) != Location::Exterior;
    }
    if (!open) {
      ring.push_back(g);
      continue;
    }
    ring.push_back(detail::ray_meets_line(g, d0, hit.a, hit.b));
    ring.push_back(detail::ray_meets_line(g, d1, hit.a, hit.b));
  }

  // Drop repeated points and points in the middle of straight runs.
  Ring clean;
  for (const auto& p : ring)
    if (clean.empty() || clean.back() != p) clean.push_back(p);
  while (clean.size() > 1 && clean.front() == clean.back()) clean.pop_back();
  bool changed = true;
  while (changed && clean.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < clean.size() && clean.size() > 3; ++i) {
      const std::size_t n = clean.size();
      const Point& a = clean[(i + n - 1) % n];
      const Point& b = clean[i];
      const Point& c = clean[(i + 1) % n];
      if (orient_sign(a, b, c) == 0 && within_collinear(b, a, c)) {
        clean.erase(clean.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
      }
    }
  }
  vp.boundary = std::move(clean);
  return vp;
}

}  // namespace gallery
