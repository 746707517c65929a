#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gallery/geometry.hpp"

namespace gallery {

using Ring = std::vector<Point>;

// Outer boundary counterclockwise, holes clockwise, so the interior is
// always on the left of every directed edge.
struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
  std::int64_t bound = 1;  // L: all vertices lie in [0, L]^2

  std::size_t ring_count() const { return 1 + holes.size(); }
  const Ring& ring(std::size_t r) const { return r == 0 ? outer : holes[r - 1]; }
  Ring& ring(std::size_t r) { return r == 0 ? outer : holes[r - 1]; }

  std::size_t vertex_count() const {
    std::size_t n = outer.size();
    for (const auto& h : holes) n += h.size();
    return n;
  }
  std::size_t edge_count() const { return vertex_count(); }

  // f(ring index, edge index within ring, tail, head)
  template <typename F>
  void for_each_edge(F&& f) const {
    for (std::size_t r = 0; r < ring_count(); ++r) {
      const Ring& ring_r = ring(r);
      for (std::size_t i = 0; i < ring_r.size(); ++i) f(r, i, ring_r[i], ring_r[(i + 1) % ring_r.size()]);
    }
  }

  std::vector<Point> vertices() const {
    std::vector<Point> out;
    out.reserve(vertex_count());
    for (std::size_t r = 0; r < ring_count(); ++r) out.insert(out.end(), ring(r).begin(), ring(r).end());
    return out;
  }

  friend bool operator==(const Polygon& a, const Polygon& b) {
    return a.bound == b.bound && a.outer == b.outer && a.holes == b.holes;
  }
};

inline Rational twice_signed_area(const Ring& ring) {
  Rational s;
  for (std::size_t i = 0; i < ring.size(); ++i) s += cross(ring[i], ring[(i + 1) % ring.size()]);
  return s;
}

inline Rational signed_area(const Ring& ring) { return twice_signed_area(ring) * Rational(1, 2); }

inline Rational area(const Polygon& p) {
  Rational a = signed_area(p.outer);
  for (const auto& h : p.holes) a += signed_area(h);  // holes are clockwise
  return a;
}

enum class Location { Interior, Boundary, Exterior };

inline const char* to_string(Location l) {
  switch (l) {
    case Location::Interior: return "interior";
    case Location::Boundary: return "boundary";
    case Location::Exterior: return "exterior";
  }
  return "?";
}

// Crossing number against a closed ring; works for any orientation and for
// rings with zero-width spikes as long as p is not on them.
inline Location locate_in_ring(const Point& p, const Ring& ring) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    bool a_above = a.y > p.y;
    bool b_above = b.y > p.y;
    if (a_above != b_above) {
      int o = orient_sign(a, b, p);
      if (o == 0) return Location::Boundary;
      if ((b_above && o > 0) || (a_above && o < 0)) inside = !inside;
    } else if (a.y == p.y || b.y == p.y) {
      // Horizontal edge or vertex at p's height: only boundary contact matters.
      if (on_segment(p, a, b)) return Location::Boundary;
    }
  }
  return inside ? Location::Interior : Location::Exterior;
}

inline Location point_in_polygon(const Point& p, const Polygon& poly) {
  Location outer = locate_in_ring(p, poly.outer);
  if (outer != Location::Interior) return outer;
  for (const auto& h : poly.holes) {
    Location l = locate_in_ring(p, h);
    if (l == Location::Boundary) return Location::Boundary;
    if (l == Location::Interior) return Location::Exterior;
  }
  return Location::Interior;
}

// ----------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  TooFewVertices,
  RepeatedVertex,
  CollinearVertex,
  OuterOrientation,
  HoleOrientation,
  SelfIntersection,
  HoleNotInside,
  HolesOverlap,
  OutOfBounds,
  BadBound,
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::TooFewVertices: return "too few vertices";
    case ViolationKind::RepeatedVertex: return "repeated vertex";
    case ViolationKind::CollinearVertex: return "collinear vertex";
    case ViolationKind::OuterOrientation: return "outer orientation";
    case ViolationKind::HoleOrientation: return "hole orientation";
    case ViolationKind::SelfIntersection: return "self-intersection";
    case ViolationKind::HoleNotInside: return "hole not inside outer ring";
    case ViolationKind::HolesOverlap: return "holes overlap";
    case ViolationKind::OutOfBounds: return "out-of-bounds vertex";
    case ViolationKind::BadBound: return "bound must be a positive integer";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::size_t ring = 0;
  std::size_t first = 0;   // vertex or edge index within `ring`
  std::size_t second = 0;  // second edge index (self-intersection) or other ring index
  std::string describe() const {
    std::ostringstream os;
    os << to_string(kind) << " (ring " << ring;
    switch (kind) {
      case ViolationKind::SelfIntersection: os << ", edges " << first << " and " << second; break;
      case ViolationKind::HolesOverlap: os << " and ring " << second; break;
      case ViolationKind::RepeatedVertex:
      case ViolationKind::CollinearVertex:
      case ViolationKind::OutOfBounds: os << ", vertex " << first; break;
      default: break;
    }
    os << ")";
    return os.str();
  }
};

struct ValidityReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
  bool has(ViolationKind k) const {
    for (const auto& v : violations)
      if (v.kind == k) return true;
    return false;
  }
  std::string describe() const {
    std::string s;
    for (const auto& v : violations) s += v.describe() + "\n";
    return s;
  }
};

namespace detail {

inline bool rings_touch(const Ring& r, const Ring& s) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    Segment e(r[i], r[(i + 1) % r.size()]);
    for (std::size_t j = 0; j < s.size(); ++j) {
      Segment f(s[j], s[(j + 1) % s.size()]);
      if (!std::holds_alternative<NoIntersection>(segment_intersection(e, f))) return true;
    }
  }
  return false;
}

inline void check_ring_shape(const Ring& ring, std::size_t r, ValidityReport& report) {
  const std::size_t n = ring.size();
  if (n < 3) {
    report.violations.push_back({ViolationKind::TooFewVertices, r});
    return;
  }
  bool degenerate = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (ring[i] == ring[(i + 1) % n]) {
      report.violations.push_back({ViolationKind::RepeatedVertex, r, i});
      degenerate = true;
    }
  }
  if (degenerate) return;
  for (std::size_t i = 0; i < n; ++i) {
    if (orient_sign(ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]) == 0)
      report.violations.push_back({ViolationKind::CollinearVertex, r, i});
  }
  for (std::size_t i = 0; i < n; ++i) {
    Segment e(ring[i], ring[(i + 1) % n]);
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the wrap-around
      Segment f(ring[j], ring[(j + 1) % n]);
      if (!std::holds_alternative<NoIntersection>(segment_intersection(e, f)))
        report.violations.push_back({ViolationKind::SelfIntersection, r, i, j});
    }
  }
}

}  // namespace detail

struct ValidateOptions {
  bool check_bounds = true;
};

inline ValidityReport validate_polygon(const Polygon& poly, ValidateOptions opts = {}) {
  ValidityReport report;
  if (poly.bound <= 0) report.violations.push_back({ViolationKind::BadBound, 0});
  const Rational bound(poly.bound);
  std::vector<bool> ring_ok(poly.ring_count(), false);
  for (std::size_t r = 0; r < poly.ring_count(); ++r) {
    const Ring& ring = poly.ring(r);
    for (std::size_t i = 0; opts.check_bounds && i < ring.size(); ++i) {
      const Point& v = ring[i];
      if (v.x.sign() < 0 || v.y.sign() < 0 || v.x > bound || v.y > bound)
        report.violations.push_back({ViolationKind::OutOfBounds, r, i});
    }
    std::size_t before = report.violations.size();
    detail::check_ring_shape(ring, r, report);
    bool shape_ok = report.violations.size() == before;
    ring_ok[r] = shape_ok;
    if (ring.size() >= 3) {
      int s = twice_signed_area(ring).sign();
      if (r == 0 && s <= 0) report.violations.push_back({ViolationKind::OuterOrientation, 0});
      if (r > 0 && s >= 0) report.violations.push_back({ViolationKind::HoleOrientation, r});
    }
    if (r > 0 && shape_ok && ring_ok[0]) {
      bool inside = !detail::rings_touch(ring, poly.outer);
      for (const auto& v : ring) inside = inside && locate_in_ring(v, poly.outer) == Location::Interior;
      if (!inside) report.violations.push_back({ViolationKind::HoleNotInside, r});
    }
  }
  for (std::size_t r = 1; r < poly.ring_count(); ++r) {
    for (std::size_t s = r + 1; s < poly.ring_count(); ++s) {
      const Ring& a = poly.ring(r);
      const Ring& b = poly.ring(s);
      if (!ring_ok[r] || !ring_ok[s]) continue;
      bool overlap = detail::rings_touch(a, b) || locate_in_ring(a[0], b) != Location::Exterior ||
                     locate_in_ring(b[0], a) != Location::Exterior;
      if (overlap) report.violations.push_back({ViolationKind::HolesOverlap, r, 0, s});
    }
  }
  return report;
}

class ValidityError : public std::runtime_error {
 public:
  explicit ValidityError(ValidityReport report)
      : std::runtime_error("invalid polygon: " + report.describe()), report_(std::move(report)) {}
  const ValidityReport& report() const { return report_; }

 private:
  ValidityReport report_;
};

inline const Polygon& require_valid(const Polygon& poly, ValidateOptions opts = {}) {
  ValidityReport r = validate_polygon(poly, opts);
  if (!r.valid()) throw ValidityError(std::move(r));
  return poly;
}

// Axis-aligned bounding box of the outer ring.
struct Box {
  Rational xmin, ymin, xmax, ymax;
};

inline Box bounding_box(const Ring& ring) {
  Box b{ring[0].x, ring[0].y, ring[0].x, ring[0].y};
  for (const auto& p : ring) {
    if (p.x < b.xmin) b.xmin = p.x;
    if (p.x > b.xmax) b.xmax = p.x;
    if (p.y < b.ymin) b.ymin = p.y;
    if (p.y > b.ymax) b.ymax = p.y;
  }
  return b;
}

}  // namespace gallery
