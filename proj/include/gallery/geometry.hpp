#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <variant>

#include "gallery/rational.hpp"

namespace gallery {

struct Point {
  Rational x;
  Rational y;

  friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
  // Lexicographic (x, then y).
  friend bool operator<(const Point& a, const Point& b) {
    int c = compare(a.x, b.x);
    return c != 0 ? c < 0 : a.y < b.y;
  }
  friend Point operator+(const Point& a, const Point& b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(const Rational& s, const Point& p) { return {s * p.x, s * p.y}; }
  friend std::ostream& operator<<(std::ostream& os, const Point& p) { return os << "(" << p.x << ", " << p.y << ")"; }
};

inline Rational cross(const Point& u, const Point& v) { return u.x * v.y - u.y * v.x; }
inline Rational dot(const Point& u, const Point& v) { return u.x * v.x + u.y * v.y; }
inline Rational squared_norm(const Point& u) { return dot(u, u); }
inline Rational squared_distance(const Point& a, const Point& b) { return squared_norm(a - b); }
inline Point midpoint(const Point& a, const Point& b) { return Rational(1, 2) * (a + b); }

enum class Orientation { Right = -1, Collinear = 0, Left = 1 };

// Sign of (q - p) x (r - p).
inline Orientation orientation(const Point& p, const Point& q, const Point& r) {
  return static_cast<Orientation>(cross(q - p, r - p).sign());
}

inline int orient_sign(const Point& p, const Point& q, const Point& r) { return cross(q - p, r - p).sign(); }

struct Segment {
  Point a;
  Point b;

  Segment() = default;
  Segment(Point a_, Point b_) : a(std::move(a_)), b(std::move(b_)) {
    if (a == b) throw std::invalid_argument("degenerate segment");
  }
  friend bool operator==(const Segment& s, const Segment& t) { return s.a == t.a && s.b == t.b; }
};

// Assumes p, a, b collinear. True if p lies on the closed segment ab.
inline bool within_collinear(const Point& p, const Point& a, const Point& b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

inline bool on_segment(const Point& p, const Point& a, const Point& b) {
  return orient_sign(a, b, p) == 0 && within_collinear(p, a, b);
}

struct NoIntersection {
  friend bool operator==(const NoIntersection&, const NoIntersection&) { return true; }
};

using SegmentIntersection = std::variant<NoIntersection, Point, Segment>;

// Intersection of two closed segments, exact.
inline SegmentIntersection segment_intersection(const Segment& s, const Segment& t) {
  int o1 = orient_sign(s.a, s.b, t.a);
  int o2 = orient_sign(s.a, s.b, t.b);
  int o3 = orient_sign(t.a, t.b, s.a);
  int o4 = orient_sign(t.a, t.b, s.b);

  if (o1 == 0 && o2 == 0) {
    // Collinear: order endpoints along the common line.
    Point lo1 = std::min(s.a, s.b), hi1 = std::max(s.a, s.b);
    Point lo2 = std::min(t.a, t.b), hi2 = std::max(t.a, t.b);
    Point lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
    if (hi < lo) return NoIntersection{};
    if (lo == hi) return lo;
    return Segment(lo, hi);
  }
  if (o1 * o2 > 0 || o3 * o4 > 0) return NoIntersection{};
  if (o1 == 0) return t.a;
  if (o2 == 0) return t.b;
  if (o3 == 0) return s.a;
  if (o4 == 0) return s.b;
  // Proper crossing: s.a + u (s.b - s.a) with u = cross(t.a - s.a, dt) / cross(ds, dt).
  Point ds = s.b - s.a, dt = t.b - t.a;
  Rational u = cross(t.a - s.a, dt) / cross(ds, dt);
  return s.a + u * ds;
}

// True if the open interiors of the two segments cross at a single point.
inline bool properly_cross(const Point& a, const Point& b, const Point& c, const Point& d) {
  int o1 = orient_sign(a, b, c), o2 = orient_sign(a, b, d);
  if (o1 * o2 >= 0) return false;
  int o3 = orient_sign(c, d, a), o4 = orient_sign(c, d, b);
  return o3 * o4 < 0;
}

// a*x + b*y = c, normalized: integer coefficients with gcd 1 and the leading
// nonzero coefficient of (a, b) positive.
struct Line {
  Rational a;
  Rational b;
  Rational c;

  Line(Rational a_, Rational b_, Rational c_) : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {
    if (a.is_zero() && b.is_zero()) throw std::invalid_argument("degenerate line");
    normalize();
  }

  static Line through(const Point& p, const Point& q) {
    if (p == q) throw std::invalid_argument("line through coincident points");
    Rational a = q.y - p.y;
    Rational b = p.x - q.x;
    return Line(a, b, a * p.x + b * p.y);
  }

  Rational eval(const Point& p) const { return a * p.x + b * p.y - c; }
  bool contains(const Point& p) const { return eval(p).is_zero(); }

  friend bool operator==(const Line& l, const Line& m) { return l.a == m.a && l.b == m.b && l.c == m.c; }
  friend std::ostream& operator<<(std::ostream& os, const Line& l) {
    return os << l.a << "x + " << l.b << "y = " << l.c;
  }

 private:
  void normalize() {
    mpz_class l = lcm_den();
    mpz_class ia = (a * Rational(l)).numerator();
    mpz_class ib = (b * Rational(l)).numerator();
    mpz_class ic = (c * Rational(l)).numerator();
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), ia.get_mpz_t(), ib.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ic.get_mpz_t());
    if (ia < 0 || (ia == 0 && ib < 0)) g = -g;
    a = Rational(mpz_class(ia / g));
    b = Rational(mpz_class(ib / g));
    c = Rational(mpz_class(ic / g));
  }
  mpz_class lcm_den() const {
    mpz_class l = a.denominator();
    mpz_class db = b.denominator(), dc = c.denominator();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), db.get_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), dc.get_mpz_t());
    return l;
  }
};

// Unique intersection of two non-parallel lines (Cramer's rule).
inline std::optional<Point> line_intersection(const Line& l, const Line& m) {
  Rational det = l.a * m.b - l.b * m.a;
  if (det.is_zero()) return std::nullopt;
  return Point{(l.c * m.b - l.b * m.c) / det, (l.a * m.c - l.c * m.a) / det};
}

}  // namespace gallery
