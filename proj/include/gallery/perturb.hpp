#pragma once

// Perturbation models: edge inflation, edge perturbation and vertex
// perturbation as exact polygon-to-polygon transforms, their seeded
// samplers, and the pointedness bound.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gallery/polygon.hpp"

namespace gallery {

enum class PerturbErrorKind { NonPythagoreanEdge, ZeroLengthEdge, InvalidResult, OffsetTooLarge, BadSpec };

inline const char* to_string(PerturbErrorKind k) {
  switch (k) {
    case PerturbErrorKind::NonPythagoreanEdge: return "NonPythagoreanEdge";
    case PerturbErrorKind::ZeroLengthEdge: return "ZeroLengthEdge";
    case PerturbErrorKind::InvalidResult: return "InvalidResult";
    case PerturbErrorKind::OffsetTooLarge: return "OffsetTooLarge";
    case PerturbErrorKind::BadSpec: return "BadSpec";
  }
  return "?";
}

class PerturbError : public std::runtime_error {
 public:
  PerturbError(PerturbErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  PerturbErrorKind kind() const { return kind_; }

 private:
  PerturbErrorKind kind_;
};

// Exact mode requires every edge length to be rational. Approximate mode
// replaces the length by a rational upper bound with relative error below
// 2^-precision, so shifts are never smaller than requested.
struct OffsetOptions {
  bool exact = true;
  unsigned precision = 64;
};

// ----------------------------------------------------------------------------
// Square roots of rationals

inline std::optional<Rational> exact_sqrt(const Rational& q) {
  if (q.sign() < 0) return std::nullopt;
  mpz_class n = q.numerator(), d = q.denominator();
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0 || mpz_perfect_square_p(d.get_mpz_t()) == 0) return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return Rational(rn, rd);
}

// Rational bounds lo <= sqrt(q) <= hi with hi - lo <= 2^-precision * sqrt(q).
struct SqrtBounds {
  Rational lo;
  Rational hi;
};

inline SqrtBounds sqrt_bounds(const Rational& q, unsigned precision) {
  if (q.sign() < 0) throw std::domain_error("sqrt of negative rational");
  if (auto e = exact_sqrt(q)) return {*e, *e};
  // sqrt(n/d) = sqrt(n*d) / d, scaled by 2^precision.
  mpz_class n = q.numerator(), d = q.denominator();
  mpz_class radicand = n * d;
  mpz_mul_2exp(radicand.get_mpz_t(), radicand.get_mpz_t(), 2 * precision);
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
  mpz_class scale = d;
  mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), precision);
  return {Rational(root, scale), Rational(mpz_class(root + 1), scale)};
}

// ----------------------------------------------------------------------------
// Line offsets

enum class Side { Outside, Inside };

// Outside is the right-hand side of `edge_direction`; with the polygon's
// ring orientation convention that is away from the interior.
inline Line offset_line(const Line& line, const Point& edge_direction, const Rational& t, Side side,
                        OffsetOptions opts = {}) {
  if (edge_direction.x.is_zero() && edge_direction.y.is_zero())
    throw PerturbError(PerturbErrorKind::ZeroLengthEdge, "edge direction is zero");
  if (t.is_zero()) return line;
  Rational norm2 = line.a * line.a + line.b * line.b;
  Rational norm;
  if (auto e = exact_sqrt(norm2)) {
    norm = *e;
  } else if (opts.exact) {
    throw PerturbError(PerturbErrorKind::NonPythagoreanEdge,
                       "edge direction (" + edge_direction.x.str() + ", " + edge_direction.y.str() +
                           ") has irrational length");
  } else {
    norm = sqrt_bounds(norm2, opts.precision).hi;
  }
  // Moving by +t along the right normal (dy, -dx) / |d| changes a*x + b*y by
  // t * (a*dy - b*dx) / |d| = +-t * |(a, b)|.
  int s = (line.a * edge_direction.y - line.b * edge_direction.x).sign();
  if (side == Side::Inside) s = -s;
  Rational shift = t * norm;
  return Line(line.a, line.b, s > 0 ? line.c + shift : line.c - shift);
}

namespace detail {

// The input bound, raised to cover any vertex that left [0, L]^2 in magnitude.
inline std::int64_t bound_for(const Polygon& p, std::int64_t original) {
  Rational m(original);
  for (const auto& v : p.vertices()) {
    if (v.x.abs() > m) m = v.x.abs();
    if (v.y.abs() > m) m = v.y.abs();
  }
  return mpz_get_si(m.ceil().get_mpz_t());
}

inline void require_structurally_valid(const Polygon& p) {
  ValidityReport r = validate_polygon(p, {.check_bounds = false});
  if (!r.valid()) throw PerturbError(PerturbErrorKind::InvalidResult, r.describe());
}

}  // namespace detail

// Shifts every edge's supporting line by its own signed amount (positive is
// outward) and re-derives each vertex as the meet of its two adjacent lines.
// `shifts` is indexed by global edge order: outer ring first, then holes.
inline Polygon edge_perturb(const Polygon& poly, const std::vector<Rational>& shifts, OffsetOptions opts = {}) {
  if (shifts.size() != poly.edge_count())
    throw PerturbError(PerturbErrorKind::BadSpec, "expected one shift per edge");
  Polygon out;
  out.holes.resize(poly.holes.size());
  std::size_t base = 0;
  for (std::size_t r = 0; r < poly.ring_count(); ++r) {
    const Ring& ring = poly.ring(r);
    const std::size_t n = ring.size();
    std::vector<Line> lines;
    lines.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Point& a = ring[i];
      const Point& b = ring[(i + 1) % n];
      if (a == b) throw PerturbError(PerturbErrorKind::ZeroLengthEdge, "edge " + std::to_string(base + i));
      const Rational& s = shifts[base + i];
      lines.push_back(offset_line(Line::through(a, b), b - a, s.abs(), s.sign() >= 0 ? Side::Outside : Side::Inside, opts));
    }
    Ring& target = out.ring(r);
    target.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto v = line_intersection(lines[(i + n - 1) % n], lines[i]);
      if (!v) throw PerturbError(PerturbErrorKind::InvalidResult, "adjacent edges are parallel");
      target.push_back(*v);
    }
    // An edge that flips direction has collapsed past zero length.
    for (std::size_t i = 0; i < n; ++i) {
      Point before = ring[(i + 1) % n] - ring[i];
      Point after = target[(i + 1) % n] - target[i];
      if (dot(before, after).sign() <= 0)
        throw PerturbError(PerturbErrorKind::InvalidResult, "edge " + std::to_string(base + i) + " collapsed");
    }
    base += n;
  }
  out.bound = detail::bound_for(out, poly.bound);
  detail::require_structurally_valid(out);
  return out;
}

inline Polygon edge_inflate(const Polygon& poly, const Rational& t, OffsetOptions opts = {}) {
  if (t.sign() < 0) throw PerturbError(PerturbErrorKind::BadSpec, "inflation must be non-negative");
  if (t.is_zero()) return poly;
  return edge_perturb(poly, std::vector<Rational>(poly.edge_count(), t), opts);
}

// Translates every vertex by its own offset; with `delta` set, each offset
// must lie in the closed disk of that radius.
inline Polygon vertex_perturb(const Polygon& poly, const std::vector<Point>& offsets,
                              const std::optional<Rational>& delta = std::nullopt) {
  if (offsets.size() != poly.vertex_count())
    throw PerturbError(PerturbErrorKind::BadSpec, "expected one offset per vertex");
  if (delta) {
    Rational d2 = *delta * *delta;
    for (std::size_t i = 0; i < offsets.size(); ++i)
      if (squared_norm(offsets[i]) > d2)
        throw PerturbError(PerturbErrorKind::OffsetTooLarge, "offset " + std::to_string(i) + " exceeds delta");
  }
  Polygon out = poly;
  std::size_t k = 0;
  for (std::size_t r = 0; r < out.ring_count(); ++r)
    for (auto& v : out.ring(r)) v = v + offsets[k++];
  out.bound = detail::bound_for(out, poly.bound);
  detail::require_structurally_valid(out);
  return out;
}

// ----------------------------------------------------------------------------
// Sampling

enum class PerturbModel { EdgeInflate, EdgePerturb, VertexPerturb };

inline const char* to_string(PerturbModel m) {
  switch (m) {
    case PerturbModel::EdgeInflate: return "edge-inflate";
    case PerturbModel::EdgePerturb: return "edge-perturb";
    case PerturbModel::VertexPerturb: return "vertex-perturb";
  }
  return "?";
}

inline PerturbModel parse_model(const std::string& s) {
  if (s == "edge-inflate") return PerturbModel::EdgeInflate;
  if (s == "edge-perturb") return PerturbModel::EdgePerturb;
  if (s == "vertex-perturb") return PerturbModel::VertexPerturb;
  throw std::invalid_argument("unknown perturbation model: " + s);
}

struct PerturbationSpec {
  PerturbModel model = PerturbModel::EdgeInflate;
  Rational delta = 1;
  std::optional<std::int64_t> granularity;  // q: discrete mode, edge inflation only
  std::uint64_t seed = 0;
  OffsetOptions offsets;
  int retry_limit = 16;

  void check() const {
    if (delta.sign() <= 0) throw PerturbError(PerturbErrorKind::BadSpec, "delta must be positive");
    if (granularity) {
      if (model != PerturbModel::EdgeInflate)
        throw PerturbError(PerturbErrorKind::BadSpec, "granularity requires edge inflation");
      if (*granularity <= 0) throw PerturbError(PerturbErrorKind::BadSpec, "granularity must be positive");
    }
    if (retry_limit < 1) throw PerturbError(PerturbErrorKind::BadSpec, "retry limit must be at least 1");
  }
};

struct SampleRecord {
  PerturbModel model = PerturbModel::EdgeInflate;
  std::uint64_t seed = 0;  // seed of the accepted attempt
  int attempts = 0;
  Rational inflation;                      // edge inflation
  std::optional<std::int64_t> discrete_index;  // i with t = i * delta / q
  std::vector<Rational> shifts;            // edge perturbation
  std::vector<Point> offsets;              // vertex perturbation
};

// splitmix64; used to derive independent seeds from (seed, index) pairs.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform draws with platform-independent results (std distributions are
// implementation-defined, so they are avoided here).
class DyadicRng {
 public:
  explicit DyadicRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform in [0, 1) with 64 fractional bits.
  Rational unit() {
    mpz_class n;
    std::uint64_t r = engine_();
    mpz_import(n.get_mpz_t(), 1, -1, sizeof(r), 0, 0, &r);
    return Rational(n, mpz_class(1) << 64);
  }

  // Uniform in [lo, hi).
  Rational uniform(const Rational& lo, const Rational& hi) { return lo + (hi - lo) * unit(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do r = engine_();
    while (r >= limit);
    return r % n;
  }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

inline Polygon sample_once(const Polygon& poly, const PerturbationSpec& spec, std::uint64_t seed, SampleRecord& rec) {
  DyadicRng rng(seed);
  rec = SampleRecord{};
  rec.model = spec.model;
  rec.seed = seed;
  switch (spec.model) {
    case PerturbModel::EdgeInflate: {
      if (spec.granularity) {
        auto i = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(*spec.granularity)));
        rec.discrete_index = i;
        rec.inflation = spec.delta * Rational(i, *spec.granularity);
      } else {
        rec.inflation = spec.delta * rng.unit();
      }
      return edge_inflate(poly, rec.inflation, spec.offsets);
    }
    case PerturbModel::EdgePerturb: {
      for (std::size_t i = 0; i < poly.edge_count(); ++i) rec.shifts.push_back(rng.uniform(-spec.delta, spec.delta));
      return edge_perturb(poly, rec.shifts, spec.offsets);
    }
    case PerturbModel::VertexPerturb: {
      const Rational d2 = spec.delta * spec.delta;
      for (std::size_t i = 0; i < poly.vertex_count(); ++i) {
        Point u;
        do u = Point{rng.uniform(-spec.delta, spec.delta), rng.uniform(-spec.delta, spec.delta)};
        while (squared_norm(u) > d2);
        rec.offsets.push_back(u);
      }
      return vertex_perturb(poly, rec.offsets, spec.delta);
    }
  }
  throw PerturbError(PerturbErrorKind::BadSpec, "unknown model");
}

}  // namespace detail

// Deterministic in spec.seed. Attempts whose result is not a valid polygon
// are redrawn with a derived seed, up to spec.retry_limit attempts.
inline std::pair<Polygon, SampleRecord> sample(const Polygon& poly, const PerturbationSpec& spec) {
  spec.check();
  SampleRecord rec;
  std::string last_error;
  for (int attempt = 0; attempt < spec.retry_limit; ++attempt) {
    std::uint64_t seed = attempt == 0 ? spec.seed : mix_seed(spec.seed, static_cast<std::uint64_t>(attempt));
    try {
      Polygon out = detail::sample_once(poly, spec, seed, rec);
      rec.attempts = attempt + 1;
      return {std::move(out), std::move(rec)};
    } catch (const PerturbError& e) {
      if (e.kind() != PerturbErrorKind::InvalidResult) throw;
      last_error = e.what();
    }
  }
  throw PerturbError(PerturbErrorKind::InvalidResult,
                     "retry limit " + std::to_string(spec.retry_limit) + " exhausted; last: " + last_error);
}

// ----------------------------------------------------------------------------
// Pointedness

struct Pointedness {
  Rational beta;             // 8 * beta <= smallest interior/exterior angle
  std::size_t witness = 0;   // global vertex index attaining the minimum angle
};

namespace detail {

// The non-reflex angle at v between its two edges, as (dot, |a|^2 |b|^2).
struct CornerCosine {
  Rational dot;
  Rational norms;  // product of squared edge lengths
};

// True if the angle of c1 is strictly smaller than the angle of c2.
inline bool sharper(const CornerCosine& c1, const CornerCosine& c2) {
  int s1 = c1.dot.sign(), s2 = c2.dot.sign();
  if (s1 != s2) return s1 > s2;  // larger cosine means smaller angle
  Rational q1 = c1.dot * c1.dot / c1.norms;
  Rational q2 = c2.dot * c2.dot / c2.norms;
  return s1 >= 0 ? q1 > q2 : q1 < q2;
}

}  // namespace detail

// beta = s / 4 where s is a certified rational lower bound on sin(alpha / 2);
// since sin(x) <= x this gives 8 * beta <= 2 * sin(alpha / 2) <= alpha.
inline Pointedness pointedness(const Polygon& poly, unsigned precision = 64) {
  std::optional<detail::CornerCosine> best;
  std::size_t best_index = 0, k = 0;
  for (std::size_t r = 0; r < poly.ring_count(); ++r) {
    const Ring& ring = poly.ring(r);
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i, ++k) {
      Point a = ring[(i + n - 1) % n] - ring[i];
      Point b = ring[(i + 1) % n] - ring[i];
      detail::CornerCosine c{dot(a, b), squared_norm(a) * squared_norm(b)};
      if (!best || detail::sharper(c, *best)) {
        best = c;
        best_index = k;
      }
    }
  }
  if (!best) throw std::invalid_argument("empty polygon");
  for (unsigned p = precision;; p *= 2) {
    SqrtBounds root = sqrt_bounds(best->norms, p);
    Rational cos_hi = best->dot.sign() >= 0 ? best->dot / root.lo : best->dot / root.hi;
    Rational half_sin2_lo = (Rational(1) - cos_hi) * Rational(1, 2);
    if (half_sin2_lo.sign() > 0) {
      Rational s = sqrt_bounds(half_sin2_lo, p).lo;
      if (s.sign() > 0) return {s * Rational(1, 4), best_index};
    }
    if (p > 4096) throw std::runtime_error("pointedness: angle too small to certify");
  }
}

// Composed perturbation check: a vertex perturbation of magnitude delta0
// followed by an edge inflation of gamma moves no vertex farther than delta
// whenever gamma <= beta * (delta - delta0).
struct PointednessLemmaReport {
  bool passed = false;
  bool within_bound = false;       // gamma <= beta * (delta - delta0)
  Rational beta;
  Rational max_squared_displacement;
  std::size_t worst_vertex = 0;
  std::size_t failures = 0;        // vertices farther than delta
  SampleRecord perturbation;
  double max_displacement() const { return std::sqrt(max_squared_displacement.to_double()); }
};

inline PointednessLemmaReport check_pointedness_lemma(const Polygon& poly, const Rational& delta,
                                                      const Rational& delta0, const Rational& gamma,
                                                      std::uint64_t seed, OffsetOptions inflate_opts = {false, 64}) {
  if (!(delta0 < delta) || delta0.sign() <= 0)
    throw PerturbError(PerturbErrorKind::BadSpec, "need 0 < delta0 < delta");
  if (gamma.sign() < 0) throw PerturbError(PerturbErrorKind::BadSpec, "gamma must be non-negative");
  PointednessLemmaReport rep;
  rep.beta = pointedness(poly).beta;
  rep.within_bound = gamma <= rep.beta * (delta - delta0);

  PerturbationSpec spec;
  spec.model = PerturbModel::VertexPerturb;
  spec.delta = delta0;
  spec.seed = seed;
  auto [moved, rec] = sample(poly, spec);
  rep.perturbation = rec;
  Polygon q = edge_inflate(moved, gamma, inflate_opts);

  const std::vector<Point> before = poly.vertices();
  const std::vector<Point> after = q.vertices();
  const Rational d2 = delta * delta;
  for (std::size_t i = 0; i < before.size(); ++i) {
    Rational s = squared_distance(before[i], after[i]);
    if (i == 0 || s > rep.max_squared_displacement) {
      rep.max_squared_displacement = s;
      rep.worst_vertex = i;
    }
    if (s > d2) ++rep.failures;
  }
  rep.passed = rep.failures == 0;
  return rep;
}

}  // namespace gallery
