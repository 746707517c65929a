#pragma once

// Polygon families for tests and experiments.

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gallery/perturb.hpp"
#include "gallery/visibility.hpp"

namespace gallery {

class GenerationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Family { Convex, Comb, StaircaseL, WithHoles, Pinwheel };

struct GenSpec {
  Family family = Family::Convex;
  int n = 4;  // vertex count (outer ring for WithHoles), prong count for Comb
  int h = 0;  // holes

  std::string str() const {
    switch (family) {
      case Family::Convex: return "Convex " + std::to_string(n);
      case Family::Comb: return "Comb " + std::to_string(n);
      case Family::StaircaseL: return "StaircaseL " + std::to_string(n);
      case Family::WithHoles: return "WithHoles " + std::to_string(n) + " " + std::to_string(h);
      case Family::Pinwheel: return "Pinwheel";
    }
    return "?";
  }

  // "Convex 6", "Comb 3", "StaircaseL 8", "WithHoles 4 1", "Pinwheel"
  static GenSpec parse(const std::string& text) {
    std::istringstream is(text);
    std::string name;
    is >> name;
    GenSpec g;
    if (name == "Convex") g.family = Family::Convex;
    else if (name == "Comb") g.family = Family::Comb;
    else if (name == "StaircaseL") g.family = Family::StaircaseL;
    else if (name == "WithHoles") g.family = Family::WithHoles;
    else if (name == "Pinwheel") {
      g.family = Family::Pinwheel;
      g.n = 12;
      return g;
    } else
      throw std::invalid_argument("unknown polygon family '" + name + "'");
    if (!(is >> g.n)) throw std::invalid_argument("missing size in '" + text + "'");
    if (g.family == Family::WithHoles && !(is >> g.h)) throw std::invalid_argument("missing hole count in '" + text + "'");
    std::string rest;
    if (is >> rest) throw std::invalid_argument("trailing text in '" + text + "'");
    return g;
  }
};

// ----------------------------------------------------------------------------
// Fixed shapes

inline Point pt(std::int64_t x, std::int64_t y) { return {Rational(x), Rational(y)}; }

inline Polygon unit_square() { return Polygon{{pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)}, {}, 1}; }

// [0,2]^2 minus the open upper-right unit square.
inline Polygon l_polygon() { return Polygon{{pt(0, 0), pt(2, 0), pt(2, 1), pt(1, 1), pt(1, 2), pt(0, 2)}, {}, 2}; }

inline Polygon square_with_hole() {
  Polygon p = unit_square();
  const Rational a(1, 4), b(3, 4);
  p.holes.push_back({{a, a}, {a, b}, {b, b}, {b, a}});
  return p;
}

// k rectangular prongs [2i, 2i+1] x [1, 3] on the base [0, 2k-1] x [0, 1];
// 4k vertices, and no point sees two whole prongs.
inline Polygon comb(int k) {
  if (k < 1 || k > 12) throw std::invalid_argument("comb: k must be in [1, 12]");
  // The rightmost prong shares its right side with the base.
  Ring r{pt(0, 0), pt(2 * k - 1, 0)};
  for (int i = k - 1; i >= 0; --i) {
    r.push_back(pt(2 * i + 1, 3));
    r.push_back(pt(2 * i, 3));
    if (i > 0) {
      r.push_back(pt(2 * i, 1));
      r.push_back(pt(2 * i - 1, 1));
    }
  }
  return Polygon{r, {}, std::max<std::int64_t>(2 * k - 1, 3)};
}

// Twelve-vertex windmill whose kernel is the vertical segment x = 4,
// 11/2 <= y <= 13/2. With L = 12 the abscissa 4 = L/3 sits a third of a cell
// away from every dyadic grid line, so after inflating by t the cheapest
// single guard needs about log2(1/t) bits in x while y stays coarse.
inline Polygon pinwheel() {
  const Rational cx(4), cy(6);
  auto at = [&](const Rational& x, const Rational& y) { return Point{cx + x, cy + y}; };
  const Rational h(1, 2);
  Ring r{at(1, -4), at(1, -h), at(4, -h), at(4, 1),  at(0, 1),  at(0, 4),
         at(-1, 4), at(-1, h), at(-4, h), at(-4, -1), at(0, -1), at(0, -4)};
  return Polygon{r, {}, 12};
}

// ----------------------------------------------------------------------------
// Random families

// Integer directions with integer length: the axes plus (a, b) from the
// first `triples` primitive Pythagorean triples, in all eight symmetric forms.
inline std::vector<Point> pythagorean_directions(int triples) {
  std::vector<std::pair<int, int>> legs;
  for (int m = 2; static_cast<int>(legs.size()) < triples; ++m)
    for (int k = 1; k < m && static_cast<int>(legs.size()) < triples; ++k)
      if ((m - k) % 2 == 1 && std::gcd(m, k) == 1) legs.emplace_back(m * m - k * k, 2 * m * k);
  std::vector<Point> dirs{pt(1, 0), pt(0, 1), pt(-1, 0), pt(0, -1)};
  for (auto [a, b] : legs)
    for (int sa : {1, -1})
      for (int sb : {1, -1}) {
        dirs.push_back(pt(sa * a, sb * b));
        dirs.push_back(pt(sa * b, sb * a));
      }
  return dirs;
}

inline std::vector<Point> small_integer_directions(int radius) {
  std::vector<Point> dirs;
  for (int x = -radius; x <= radius; ++x)
    for (int y = -radius; y <= radius; ++y)
      if ((x || y) && std::gcd(x, y) == 1) dirs.push_back(pt(x, y));
  return dirs;
}

namespace detail {

inline bool angle_before(const Point& a, const Point& b) {
  int qa = quadrant_of(a), qb = quadrant_of(b);
  if (qa != qb) return qa < qb;
  return cross(a, b).sign() > 0;
}

// Shift so the minimum coordinates are `margin` and pick L just above the extent.
inline Polygon place(Ring ring, std::vector<Ring> holes, std::int64_t margin) {
  Box b = bounding_box(ring);
  Point shift{Rational(margin) - b.xmin, Rational(margin) - b.ymin};
  for (auto& p : ring) p = p + shift;
  for (auto& h : holes)
    for (auto& p : h) p = p + shift;
  Rational extent = std::max(b.xmax - b.xmin, b.ymax - b.ymin) + Rational(2 * margin);
  return Polygon{std::move(ring), std::move(holes), detail::mpz_to_i64(extent.ceil())};
}

// Closed convex ring with the given angle-sorted directions, random integer
// lengths, and a correction along the two directions bracketing the
// residual so every length stays positive.
inline std::optional<Ring> convex_from_directions(const std::vector<Point>& dirs, DyadicRng& rng) {
  const std::size_t n = dirs.size();
  for (std::size_t i = 0; i < n; ++i)
    if (cross(dirs[i], dirs[(i + 1) % n]).sign() <= 0) return std::nullopt;  // a gap of pi or more
  std::vector<Rational> len(n);
  Point sum{0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    len[i] = Rational(static_cast<std::int64_t>(1 + rng.below(3)));
    sum = sum + len[i] * dirs[i];
  }
  Point need{-sum.x, -sum.y};
  if (need != Point{0, 0}) {
    for (std::size_t i = 0; i < n; ++i) {
      const Point& d0 = dirs[i];
      const Point& d1 = dirs[(i + 1) % n];
      Rational det = cross(d0, d1);
      Rational a = cross(need, d1) / det, b = cross(d0, need) / det;
      if (a.sign() >= 0 && b.sign() >= 0) {
        len[i] += a;
        len[(i + 1) % n] += b;
        break;
      }
    }
  }
  Ring ring;
  Point cur{0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    ring.push_back(cur);
    cur = cur + len[i] * dirs[i];
  }
  if (cur != Point{0, 0}) return std::nullopt;
  // Scale away denominators so coordinates stay integral.
  mpz_class l = 1;
  for (const auto& p : ring) {
    mpz_class dx = p.x.denominator(), dy = p.y.denominator();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), dx.get_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), dy.get_mpz_t());
  }
  for (auto& p : ring) p = Rational(l) * p;
  return ring;
}

inline Ring random_convex(int n, bool pythagorean, DyadicRng& rng, int retry_limit) {
  std::vector<Point> pool;
  if (pythagorean) {
    int triples = 1;
    while (4 + 8 * triples < 2 * n) ++triples;
    pool = pythagorean_directions(triples);
  } else {
    int radius = 2;
    while (static_cast<int>(small_integer_directions(radius).size()) < 2 * n) ++radius;
    pool = small_integer_directions(radius);
  }
  if (static_cast<int>(pool.size()) < n) throw GenerationFailed("not enough directions");
  for (int attempt = 0; attempt < retry_limit; ++attempt) {
    std::vector<Point> dirs = pool;
    for (std::size_t i = dirs.size(); i > 1; --i) std::swap(dirs[i - 1], dirs[rng.below(i)]);
    dirs.resize(static_cast<std::size_t>(n));
    std::sort(dirs.begin(), dirs.end(), angle_before);
    if (auto r = convex_from_directions(dirs, rng)) return *r;
  }
  throw GenerationFailed("convex generator exhausted its retries");
}

}  // namespace detail

inline Polygon gen_polygon(const GenSpec& spec, bool pythagorean, std::uint64_t seed, int retry_limit = 64) {
  DyadicRng rng(mix_seed(seed, 0x9e1));
  switch (spec.family) {
    case Family::Convex: {
      if (spec.n < 3 || spec.n > 200) throw std::invalid_argument("Convex: n must be in [3, 200]");
      Polygon p = detail::place(detail::random_convex(spec.n, pythagorean, rng, retry_limit), {}, 0);
      require_valid(p);
      return p;
    }
    case Family::Comb: return comb(spec.n);
    case Family::Pinwheel: return pinwheel();
    case Family::StaircaseL: {
      if (spec.n < 6 || spec.n > 200 || spec.n % 2) throw std::invalid_argument("StaircaseL: n must be even in [6, 200]");
      const int s = (spec.n - 2) / 2;
      std::vector<std::int64_t> xs{0}, ys{0};  // step boundaries
      for (int i = 0; i < s; ++i) {
        xs.push_back(xs.back() + 1 + static_cast<std::int64_t>(rng.below(2)));
        ys.push_back(ys.back() + 1 + static_cast<std::int64_t>(rng.below(2)));
      }
      Ring r{pt(0, 0)};
      for (int i = 0; i < s; ++i) {
        r.push_back(pt(xs[s - i], ys[i]));
        r.push_back(pt(xs[s - i], ys[i + 1]));
      }
      r.push_back(pt(0, ys[s]));
      Polygon p = detail::place(std::move(r), {}, 0);
      require_valid(p);
      return p;
    }
    case Family::WithHoles: {
      if (spec.h < 0 || spec.h > 4) throw std::invalid_argument("WithHoles: h must be in [0, 4]");
      if (spec.n < 3 || spec.n > 200) throw std::invalid_argument("WithHoles: n must be in [3, 200]");
      for (int attempt = 0; attempt < retry_limit; ++attempt) {
        Ring outer = spec.n == 4 ? Ring{pt(0, 0), pt(8, 0), pt(8, 8), pt(0, 8)}
                                 : detail::random_convex(spec.n, pythagorean, rng, retry_limit);
        Box b = bounding_box(outer);
        Polygon p{outer, {}, 1};
        std::vector<Ring> holes;
        for (int tries = 0; static_cast<int>(holes.size()) < spec.h && tries < 200; ++tries) {
          Rational w = b.xmax - b.xmin, hgt = b.ymax - b.ymin;
          Rational side = std::min(w, hgt) * Rational(1, 8);
          Rational x = b.xmin + (w - side) * rng.unit();
          Rational y = b.ymin + (hgt - side) * rng.unit();
          // Snap to multiples of side/4 to keep coordinates short.
          Rational q = side * Rational(1, 4);
          x = Rational((x / q).floor()) * q;
          y = Rational((y / q).floor()) * q;
          Ring hole{{x, y}, {x, y + side}, {x + side, y + side}, {x + side, y}};
          Polygon trial = p;
          trial.holes = holes;
          trial.holes.push_back(hole);
          // Keep a gap of one side length to other holes and the boundary.
          bool ok = true;
          for (const Point& c : {Point{x - side, y - side}, Point{x + 2 * side, y - side},
                                 Point{x + 2 * side, y + 2 * side}, Point{x - side, y + 2 * side}})
            ok = ok && locate_in_ring(c, outer) == Location::Interior;
          for (const auto& o : holes) {
            Box ob = bounding_box(o);
            bool apart = x + 2 * side <= ob.xmin || ob.xmax + side <= x || y + 2 * side <= ob.ymin ||
                         ob.ymax + side <= y;
            ok = ok && apart;
          }
          if (ok && validate_polygon(trial, {false}).valid()) holes.push_back(std::move(hole));
        }
        if (static_cast<int>(holes.size()) < spec.h) continue;
        Polygon out = detail::place(std::move(outer), std::move(holes), 0);
        require_valid(out);
        return out;
      }
      throw GenerationFailed("hole placement exhausted its retries");
    }
  }
  throw std::invalid_argument("unknown family");
}

// True if every edge direction has rational length.
inline bool all_edges_pythagorean(const Polygon& poly) {
  bool ok = true;
  poly.for_each_edge([&](std::size_t, std::size_t, const Point& a, const Point& b) {
    ok = ok && exact_sqrt(squared_norm(b - a)).has_value();
  });
  return ok;
}

}  // namespace gallery
