#pragma once

// Exact guard-set verification. Coverage is constant on every face of the
// arrangement of polygon edges and guard visibility rings, so one witness
// per face decides it.

#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "gallery/arrangement.hpp"
#include "gallery/visibility.hpp"

namespace gallery {

struct GuardSet {
  std::vector<Point> guards;

  std::size_t size() const { return guards.size(); }
  friend bool operator==(const GuardSet& a, const GuardSet& b) { return a.guards == b.guards; }
};

class GuardOutsidePolygon : public std::runtime_error {
 public:
  GuardOutsidePolygon(std::size_t index, Point guard)
      : std::runtime_error("GuardOutsidePolygon: guard " + std::to_string(index)), index_(index),
        guard_(std::move(guard)) {}
  std::size_t index() const { return index_; }
  const Point& guard() const { return guard_; }

 private:
  std::size_t index_;
  Point guard_;
};

struct CoverageReport {
  bool covered = false;
  std::optional<Point> uncovered_witness;
  std::size_t faces_checked = 0;
  std::vector<Point> uncovered_witnesses;  // one per uncovered face
};

inline std::vector<VisibilityPolygon> guard_regions(const Polygon& poly, const GuardSet& g) {
  std::vector<VisibilityPolygon> out;
  out.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (point_in_polygon(g.guards[i], poly) == Location::Exterior) throw GuardOutsidePolygon(i, g.guards[i]);
    out.push_back(visibility_polygon(poly, g.guards[i]));
  }
  return out;
}

inline Arrangement region_arrangement(const Polygon& poly, const std::vector<VisibilityPolygon>& regions) {
  std::vector<std::pair<Point, Point>> extra;
  for (const auto& r : regions) {
    auto segs = ring_segments(r.boundary);
    extra.insert(extra.end(), segs.begin(), segs.end());
  }
  return build_arrangement(poly, extra);
}

inline std::vector<Point> witness_points(const Polygon& poly, const std::vector<VisibilityPolygon>& regions) {
  Arrangement arr = region_arrangement(poly, regions);
  std::vector<Point> out;
  out.reserve(arr.faces.size());
  for (std::size_t f = 0; f < arr.faces.size(); ++f) out.push_back(arr.face_witness(f));
  return out;
}

// Face interiors avoid every ring, so ring membership is the two-dimensional
// visibility test here.
inline bool region_covers_face_point(const VisibilityPolygon& r, const Point& p) {
  return locate_in_ring(p, r.boundary) != Location::Exterior;
}

namespace detail {

inline bool seen_by_any(const Polygon& poly, const std::vector<VisibilityPolygon>& regions, const Point& p) {
  for (const auto& r : regions)
    if (r.contains(poly, p)) return true;
  return false;
}

// A point of an uncovered face that no guard sees at all, including along
// zero-width spurs that may cross the face.
inline Point unseen_point_in_face(const Polygon& poly, const Arrangement& arr, std::size_t f,
                                  const std::vector<VisibilityPolygon>& regions) {
  static const Rational fractions[] = {Rational(1, 2), Rational(1, 3), Rational(2, 3), Rational(1, 5),
                                       Rational(4, 7), Rational(5, 11)};
  for (std::size_t t : arr.faces[f].traps)
    for (const auto& fr : fractions) {
      Point p = arr.trap_point(t, fr);
      if (!seen_by_any(poly, regions, p)) return p;
    }
  throw std::logic_error("uncovered face has no unseen sample point");
}

}  // namespace detail

inline CoverageReport verify_with_regions(const Polygon& poly, const std::vector<VisibilityPolygon>& regions) {
  Arrangement arr = region_arrangement(poly, regions);
  CoverageReport rep;
  rep.faces_checked = arr.faces.size();
  for (std::size_t f = 0; f < arr.faces.size(); ++f) {
    Point w = arr.face_witness(f);
    bool seen = false;
    for (const auto& r : regions)
      if (region_covers_face_point(r, w)) {
        seen = true;
        break;
      }
    if (!seen) rep.uncovered_witnesses.push_back(detail::unseen_point_in_face(poly, arr, f, regions));
  }
  rep.covered = rep.uncovered_witnesses.empty();
  if (!rep.covered) rep.uncovered_witness = rep.uncovered_witnesses.front();
  return rep;
}

// Unseen points from every uncovered face, up to `per_face` each: the
// verifier's witness plus points near the face's leftmost and rightmost
// walls. Empty iff G covers P.
inline std::vector<Point> unseen_points(const Polygon& poly, const GuardSet& g, std::size_t per_face) {
  std::vector<VisibilityPolygon> regions = guard_regions(poly, g);
  Arrangement arr = region_arrangement(poly, regions);
  std::vector<Point> out;
  for (std::size_t f = 0; f < arr.faces.size(); ++f) {
    const auto& traps = arr.faces[f].traps;
    Point w = arr.face_witness(f);
    bool seen = false;
    for (const auto& r : regions)
      if (region_covers_face_point(r, w)) {
        seen = true;
        break;
      }
    if (seen) continue;
    const std::size_t before = out.size();
    out.push_back(detail::unseen_point_in_face(poly, arr, f, regions));
    // Points near the face's extreme walls constrain the most.
    const Rational near(1, 64), far(63, 64);
    for (const auto& [t, fx] : {std::pair{traps.front(), near}, std::pair{traps.back(), far}}) {
      if (out.size() >= per_face + before) break;
      Point p = arr.trap_point(t, fx, Rational(1, 2));
      if (!detail::seen_by_any(poly, regions, p)) out.push_back(std::move(p));
    }
  }
  return out;
}

inline CoverageReport verify_guard_set(const Polygon& poly, const GuardSet& g) {
  if (g.guards.empty()) throw std::invalid_argument("verify_guard_set: empty guard set");
  return verify_with_regions(poly, guard_regions(poly, g));
}

// Uniform random interior points with 40 fractional bits inside the bounding
// box, checked against every guard with the direct segment test.
inline bool coverage_sampling_oracle(const Polygon& poly, const GuardSet& g, std::size_t samples,
                                     std::uint64_t seed) {
  for (std::size_t i = 0; i < g.size(); ++i)
    if (point_in_polygon(g.guards[i], poly) == Location::Exterior) throw GuardOutsidePolygon(i, g.guards[i]);
  if (samples == 0) return true;
  Box box = bounding_box(poly.outer);
  std::mt19937_64 rng(seed);
  constexpr int kBits = 40;
  const Rational unit(std::int64_t{1}, std::int64_t{1} << kBits);
  auto draw = [&](const Rational& lo, const Rational& hi) {
    return lo + (hi - lo) * Rational(static_cast<std::int64_t>(rng() >> (64 - kBits))) * unit;
  };
  std::size_t drawn = 0;
  while (drawn < samples) {
    Point p{draw(box.xmin, box.xmax), draw(box.ymin, box.ymax)};
    if (point_in_polygon(p, poly) != Location::Interior) continue;
    ++drawn;
    bool seen = false;
    for (const auto& guard : g.guards)
      if (detail::segment_inside(poly, guard, p)) {
        seen = true;
        break;
      }
    if (!seen) return false;
  }
  return true;
}

}  // namespace gallery
