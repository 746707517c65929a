#pragma once

// Points of the lattice w*Z^2 inside simple regions: open trapezoid slabs,
// open vertical intervals and open segments. Everything is exact; the
// trapezoid search counts lattice points with floor sums, so thin slivers
// spanning many columns cost O(log) big-integer steps.

#include <optional>
#include <utility>

#include "gallery/geometry.hpp"

namespace gallery::lattice {

inline mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline mpz_class mod_floor(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

// sum_{i=0}^{n-1} floor((a*i + b) / m) for n >= 0, m > 0.
inline mpz_class floor_sum(mpz_class n, mpz_class m, mpz_class a, mpz_class b) {
  mpz_class ans = 0;
  if (n <= 0) return ans;
  if (a < 0 || a >= m) {
    mpz_class q = floor_div(a, m);
    ans += n * (n - 1) / 2 * q;
    a -= q * m;
  }
  if (b < 0 || b >= m) {
    mpz_class q = floor_div(b, m);
    ans += n * q;
    b -= q * m;
  }
  while (true) {
    if (a >= m) {
      ans += n * (n - 1) / 2 * (a / m);
      a %= m;
    }
    if (b >= m) {
      ans += n * (b / m);
      b %= m;
    }
    mpz_class y_max = a * n + b;
    if (y_max < m) break;
    n = y_max / m;
    b = y_max % m;
    std::swap(m, a);
  }
  return ans;
}

// The integer in [lo, hi] with the most trailing zero bits (0 if present).
inline mpz_class simplest_integer(const mpz_class& lo, const mpz_class& hi) {
  if (lo <= 0 && hi >= 0) return 0;
  if (hi < 0) return -simplest_integer(-hi, -lo);
  for (std::size_t k = mpz_sizeinbase(hi.get_mpz_t(), 2);; --k) {
    mpz_class step = mpz_class(1) << k;
    mpz_class m = hi - mod_floor(hi, step);
    if (m >= lo) return m;
    if (k == 0) break;
  }
  return lo;
}

// (A*i + B) / C with C > 0: a line evaluated at lattice column i, in units of w.
struct ColumnFn {
  mpz_class A, B, C;

  Rational at(const mpz_class& i) const { return Rational(mpz_class(A * i + B), C); }
};

// y = y_a + (y_b - y_a)(x - x_a)/(x_b - x_a) along a non-vertical segment,
// rescaled to lattice units.
inline ColumnFn column_fn(const Point& a, const Point& b, const Rational& w) {
  Rational slope = (b.y - a.y) / (b.x - a.x);
  Rational offset = (a.y - slope * a.x) / w;
  mpz_class sn = slope.numerator(), sd = slope.denominator();
  mpz_class cn = offset.numerator(), cd = offset.denominator();
  return {sn * cd, cn * sd, sd * cd};
}

// Number of lattice points with lo(i) < v < hi(i) over columns i0..i0+n-1,
// assuming hi > lo on those columns.
inline mpz_class count_between(const ColumnFn& lo, const ColumnFn& hi, const mpz_class& i0, const mpz_class& n) {
  // ceil(h) = -floor(-h)
  mpz_class ceil_hi = -floor_sum(n, hi.C, -hi.A, -(hi.A * i0 + hi.B));
  mpz_class floor_lo = floor_sum(n, lo.C, lo.A, lo.A * i0 + lo.B);
  return ceil_hi - floor_lo - n;
}

inline mpz_class open_floor_plus_one(const Rational& v) { return v.floor() + 1; }
inline mpz_class open_ceil_minus_one(const Rational& v) { return v.ceil() - 1; }

inline Point to_point(const mpz_class& i, const mpz_class& j, const Rational& w) {
  return {Rational(i) * w, Rational(j) * w};
}

inline bool is_lattice_point(const Point& p, const Rational& w) {
  return (p.x / w).is_integer() && (p.y / w).is_integer();
}

// A lattice point with X1 < x < X2 strictly between the two segments
// (which must not cross on that range, lower below upper).
inline std::optional<Point> in_open_trapezoid(const Rational& w, const Rational& x1, const Rational& x2,
                                              const Point& lo_a, const Point& lo_b, const Point& hi_a,
                                              const Point& hi_b) {
  mpz_class first = open_floor_plus_one(x1 / w);
  mpz_class last = open_ceil_minus_one(x2 / w);
  if (first > last) return std::nullopt;
  ColumnFn lo = column_fn(lo_a, lo_b, w);
  ColumnFn hi = column_fn(hi_a, hi_b, w);
  auto rows = [&](const mpz_class& i) -> std::pair<mpz_class, mpz_class> {
    return {open_floor_plus_one(lo.at(i)), open_ceil_minus_one(hi.at(i))};
  };
  mpz_class col = simplest_integer(first, last);
  auto [r0, r1] = rows(col);
  if (r0 > r1) {
    mpz_class n = last - first + 1;
    if (count_between(lo, hi, first, n) <= 0) return std::nullopt;
    // Smallest k with a point among the first k columns.
    mpz_class lo_k = 1, hi_k = n;
    while (lo_k < hi_k) {
      mpz_class mid = (lo_k + hi_k) / 2;
      if (count_between(lo, hi, first, mid) > 0)
        hi_k = mid;
      else
        lo_k = mid + 1;
    }
    col = first + lo_k - 1;
    std::tie(r0, r1) = rows(col);
  }
  return to_point(col, simplest_integer(r0, r1), w);
}

// A lattice point on the vertical line x = X with ylo < y < yhi.
inline std::optional<Point> on_open_vertical(const Rational& w, const Rational& x, const Rational& ylo,
                                             const Rational& yhi) {
  Rational u = x / w;
  if (!u.is_integer()) return std::nullopt;
  mpz_class r0 = open_floor_plus_one(ylo / w), r1 = open_ceil_minus_one(yhi / w);
  if (r0 > r1) return std::nullopt;
  return to_point(u.numerator(), simplest_integer(r0, r1), w);
}

// A lattice point in the relative interior of segment pq.
inline std::optional<Point> on_open_segment(const Rational& w, const Point& p, const Point& q) {
  if (p.x == q.x) return on_open_vertical(w, p.x, std::min(p.y, q.y), std::max(p.y, q.y));
  if (p.y == q.y) {
    auto t = on_open_vertical(w, p.y, std::min(p.x, q.x), std::max(p.x, q.x));
    if (!t) return std::nullopt;
    return Point{t->y, t->x};
  }
  // a*x + b*y = c  ->  A*u + B*v = C in lattice units.
  Line line = Line::through(p, q);
  mpz_class wn = w.numerator(), wd = w.denominator();
  mpz_class A = line.a.numerator() * wn, B = line.b.numerator() * wn, C = line.c.numerator() * wd;
  mpz_class g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());
  if (mod_floor(C, g) != 0) return std::nullopt;
  mpz_class u0 = s * (C / g), v0 = t * (C / g);
  mpz_class du = B / g, dv = -(A / g);  // u = u0 + du*k, v = v0 + dv*k
  Rational pu = p.x / w, qu = q.x / w;
  Rational umin = std::min(pu, qu), umax = std::max(pu, qu);
  // umin < u0 + du*k < umax
  Rational k_a = (umin - Rational(u0)) / Rational(du);
  Rational k_b = (umax - Rational(u0)) / Rational(du);
  Rational klo = std::min(k_a, k_b), khi = std::max(k_a, k_b);
  mpz_class k0 = open_floor_plus_one(klo), k1 = open_ceil_minus_one(khi);
  if (k0 > k1) return std::nullopt;
  mpz_class k = simplest_integer(k0, k1);
  return to_point(mpz_class(u0 + du * k), mpz_class(v0 + dv * k), w);
}

}  // namespace gallery::lattice
