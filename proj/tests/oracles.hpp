#pragma once

// Test-only reference implementations. These deliberately avoid the
// library's predicates beyond Rational and Point arithmetic.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "gallery/polygon.hpp"

namespace oracle {

using gallery::Point;
using gallery::Polygon;
using gallery::Rational;
using gallery::Ring;

inline Rational cross3(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline bool on_closed_segment(const Point& p, const Point& a, const Point& b) {
  if (!cross3(a, b, p).is_zero()) return false;
  Rational t = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
  Rational len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
  return t.sign() >= 0 && t <= len2;
}

// Winding number of a ring around p (p not on the ring).
inline int winding(const Point& p, const Ring& ring) {
  int wn = 0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % ring.size()];
    if (a.y <= p.y) {
      if (b.y > p.y && cross3(a, b, p).sign() > 0) ++wn;
    } else if (b.y <= p.y && cross3(a, b, p).sign() < 0) {
      --wn;
    }
  }
  return wn;
}

enum class Where { Inside, OnBoundary, Outside };

inline Where locate(const Point& p, const Polygon& poly) {
  for (std::size_t r = 0; r < poly.ring_count(); ++r) {
    const Ring& ring = poly.ring(r);
    for (std::size_t i = 0; i < ring.size(); ++i)
      if (on_closed_segment(p, ring[i], ring[(i + 1) % ring.size()])) return Where::OnBoundary;
  }
  int total = 0;
  for (std::size_t r = 0; r < poly.ring_count(); ++r) total += winding(p, poly.ring(r));
  return total != 0 ? Where::Inside : Where::Outside;
}

// Intersection parameter along ab of segment cd, by Cramer's rule.
// Parallel pairs return nullopt.
inline std::optional<Rational> cramer_param(const Point& a, const Point& b, const Point& c, const Point& d) {
  Rational a11 = b.x - a.x, a12 = c.x - d.x, a21 = b.y - a.y, a22 = c.y - d.y;
  Rational det = a11 * a22 - a12 * a21;
  if (det.is_zero()) return std::nullopt;
  Rational r1 = c.x - a.x, r2 = c.y - a.y;
  Rational s = (r1 * a22 - a12 * r2) / det;
  Rational u = (a11 * r2 - r1 * a21) / det;
  if (s.sign() < 0 || s > Rational(1) || u.sign() < 0 || u > Rational(1)) return std::nullopt;
  return s;
}

inline std::optional<Point> cramer_point(const Point& a, const Point& b, const Point& c, const Point& d) {
  auto s = cramer_param(a, b, c, d);
  if (!s) return std::nullopt;
  return Point{a.x + *s * (b.x - a.x), a.y + *s * (b.y - a.y)};
}

// Segment gp lies in the closed polygon: split it at every parameter where
// it meets the boundary and test each piece's midpoint by winding number.
inline bool segment_in_closed(const Polygon& poly, const Point& g, const Point& p) {
  if (locate(g, poly) == Where::Outside || locate(p, poly) == Where::Outside) return false;
  if (g == p) return true;
  std::vector<Rational> ts{Rational(0), Rational(1)};
  Point d{p.x - g.x, p.y - g.y};
  Rational len2 = d.x * d.x + d.y * d.y;
  auto param_of = [&](const Point& q) { return ((q.x - g.x) * d.x + (q.y - g.y) * d.y) / len2; };
  for (std::size_t r = 0; r < poly.ring_count(); ++r) {
    const Ring& ring = poly.ring(r);
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Point& a = ring[i];
      const Point& b = ring[(i + 1) % ring.size()];
      if (auto s = cramer_param(g, p, a, b)) ts.push_back(*s);
      for (const Point& v : {a, b})
        if (on_closed_segment(v, g, p)) ts.push_back(param_of(v));
    }
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    Rational m = (ts[i] + ts[i + 1]) * Rational(1, 2);
    Point q{g.x + m * d.x, g.y + m * d.y};
    if (locate(q, poly) == Where::Outside) return false;
  }
  return true;
}

// Smallest number of rows whose union is every column, by enumerating
// subsets in increasing size. nullopt if no subset covers.
inline std::optional<std::size_t> min_cover_size(const std::vector<std::vector<bool>>& rows, std::size_t columns) {
  const std::size_t n = rows.size();
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      bool all = true;
      for (std::size_t c = 0; c < columns && all; ++c) {
        bool hit = false;
        for (std::size_t i : idx) hit = hit || rows[i][c];
        all = hit;
      }
      if (all) return k;
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return std::nullopt;
}

// Interior angle at each vertex in radians, via atan2 in double precision.
inline std::vector<double> corner_angles(const Ring& ring) {
  std::vector<double> out;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& u = ring[(i + n - 1) % n];
    const Point& v = ring[i];
    const Point& w = ring[(i + 1) % n];
    double ax = (u.x - v.x).to_double(), ay = (u.y - v.y).to_double();
    double bx = (w.x - v.x).to_double(), by = (w.y - v.y).to_double();
    double ang = std::atan2(ax * by - ay * bx, ax * bx + ay * by);
    out.push_back(std::fabs(ang));
  }
  return out;
}

// Random rational with `bits` fractional bits in [lo, hi].
inline Rational random_rational(std::mt19937_64& rng, const Rational& lo, const Rational& hi, int bits = 12) {
  const std::int64_t den = std::int64_t{1} << bits;
  auto k = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(den + 1));
  return lo + (hi - lo) * Rational(k, den);
}

inline Point random_point_in(std::mt19937_64& rng, const Polygon& poly, bool allow_boundary = true, int bits = 12) {
  Rational xmin = poly.outer[0].x, xmax = xmin, ymin = poly.outer[0].y, ymax = ymin;
  for (const auto& p : poly.outer) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  while (true) {
    Point p{random_rational(rng, xmin, xmax, bits), random_rational(rng, ymin, ymax, bits)};
    Where w = locate(p, poly);
    if (w == Where::Inside || (allow_boundary && w == Where::OnBoundary)) return p;
  }
}

}  // namespace oracle
