#pragma once

// Grid-restricted guarding: rounding to a grid, cover instances, the
// grid-optimal solver and the iterative-deepening search over dyadic grids.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gallery/cover.hpp"
#include "gallery/perturb.hpp"

namespace gallery {

// ----------------------------------------------------------------------------
// Grids and rounding

struct CandidateGrid {
  Rational width;

  // Lattice points of width*Z^2 in the closed polygon, row-major from the
  // lower left. Throws std::length_error past `limit` points.
  std::vector<Point> points(const Polygon& poly, std::size_t limit = 1'000'000) const {
    if (width.sign() <= 0) throw std::invalid_argument("grid width must be positive");
    Box box = bounding_box(poly.outer);
    mpz_class i0 = (box.xmin / width).ceil(), i1 = (box.xmax / width).floor();
    mpz_class j0 = (box.ymin / width).ceil(), j1 = (box.ymax / width).floor();
    std::vector<Point> out;
    for (mpz_class j = j0; j <= j1; ++j)
      for (mpz_class i = i0; i <= i1; ++i) {
        Point p = lattice::to_point(i, j, width);
        if (point_in_polygon(p, poly) == Location::Exterior) continue;
        if (out.size() == limit) throw std::length_error("grid has too many points");
        out.push_back(std::move(p));
      }
    return out;
  }
};

// Nearest multiple of w; halves go toward negative infinity.
inline Rational round_to_multiple(const Rational& v, const Rational& w) {
  return Rational((v / w - Rational(1, 2)).ceil()) * w;
}

inline GuardSet round_to_grid(const GuardSet& g, const Rational& w) {
  if (w.sign() <= 0) throw std::invalid_argument("round_to_grid: w must be positive");
  GuardSet out;
  out.guards.reserve(g.size());
  for (const auto& p : g.guards) out.guards.push_back({round_to_multiple(p.x, w), round_to_multiple(p.y, w)});
  return out;
}

struct LemmaReport {
  bool precondition_met = false;  // G covers P
  bool passed = false;            // rounded G covers the inflated polygon
  Polygon inflated;
  GuardSet rounded;
  std::optional<Point> failure_witness;
};

// Rounding a cover of P to the w-grid yields a cover of P inflated by t >= w.
inline LemmaReport check_rounding_lemma(const Polygon& poly, const GuardSet& g, const Rational& t, const Rational& w) {
  if (w.sign() <= 0 || t.sign() <= 0 || t < w) throw std::invalid_argument("check_rounding_lemma: need 0 < w <= t");
  LemmaReport rep;
  CoverageReport base = verify_guard_set(poly, g);
  rep.precondition_met = base.covered;
  if (!base.covered) {
    rep.failure_witness = base.uncovered_witness;
    return rep;
  }
  rep.inflated = edge_inflate(poly, t, OffsetOptions{true, 64});
  rep.rounded = round_to_grid(g, w);
  CoverageReport after = verify_guard_set(rep.inflated, rep.rounded);
  rep.passed = after.covered;
  rep.failure_witness = after.uncovered_witness;
  return rep;
}

// ----------------------------------------------------------------------------
// Cover instances

// Witnesses from the arrangement of P and every candidate's visibility ring.
inline CoverInstance build_cover_instance(const Polygon& poly, const std::vector<Point>& candidates) {
  if (candidates.empty()) throw InfeasibleCandidates(std::nullopt);
  GuardSet g{candidates};
  std::vector<VisibilityPolygon> regions = guard_regions(poly, g);
  std::vector<Point> witnesses = witness_points(poly, regions);
  CoverInstance inst = make_instance(poly, candidates, std::move(witnesses), regions);
  require_feasible(inst);
  return inst;
}

inline CoverInstance build_cover_instance(const Polygon& poly, const CandidateGrid& grid) {
  return build_cover_instance(poly, grid.points(poly));
}

// ----------------------------------------------------------------------------
// Grid-optimal solver

// Interior points just inside each convex corner; every guard set has to
// see all of them.
inline std::vector<Point> corner_witnesses(const Polygon& poly) {
  std::vector<Point> out;
  for (std::size_t r = 0; r < poly.ring_count(); ++r) {
    const Ring& ring = poly.ring(r);
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& u = ring[(i + n - 1) % n];
      const Point& v = ring[i];
      const Point& x = ring[(i + 1) % n];
      if (orient_sign(u, v, x) <= 0) continue;
      Point dir = (u - v) + (x - v);
      Rational eps(1, 37);
      for (int k = 0; k < 64; ++k, eps = eps * Rational(1, 2)) {
        Point p = v + eps * dir;
        if (point_in_polygon(p, poly) == Location::Interior) {
          out.push_back(std::move(p));
          break;
        }
      }
    }
  }
  return out;
}

struct GridSolveOptions {
  std::uint64_t node_limit = kDefaultNodeLimit;
  bool include_vertices = true;
  std::size_t max_rounds = 500;
  std::size_t alternatives = 8;       // optimal covers of W tried per round
  std::size_t witnesses_per_face = 3;  // unseen points taken per uncovered face
};

struct GridSolveResult {
  GuardSet guards;
  CoverInstance instance;  // final witness set against the representative candidates
  std::size_t rounds = 0;
};

// A witness set W that grows lazily. Visibility polygons, the arrangement
// of their boundaries and candidate incidence rows are cached; the
// arrangement is rebuilt only after W grows.
class WitnessPool {
 public:
  explicit WitnessPool(const Polygon& poly) : poly_(&poly) {}

  void add(const Point& w) {
    if (!seen_.emplace(w, points_.size()).second) return;
    points_.push_back(w);
    regions_.push_back(visibility_polygon(*poly_, w));
  }
  void add_all(const std::vector<Point>& ws) {
    for (const auto& w : ws) add(w);
  }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<VisibilityPolygon>& regions() const { return regions_; }
  std::size_t size() const { return points_.size(); }

  const Arrangement& arrangement() {
    if (!arr_ || arr_size_ != size()) {
      std::vector<std::pair<Point, Point>> extra;
      for (const auto& r : regions_) {
        auto segs = ring_segments(r.boundary);
        extra.insert(extra.end(), segs.begin(), segs.end());
      }
      arr_ = build_arrangement(*poly_, extra);
      arr_size_ = size();
    }
    return *arr_;
  }

  // Which witnesses see candidate c (visibility is symmetric).
  Bitset row(const Point& c) {
    std::vector<bool>& r = rows_[c];
    for (std::size_t i = r.size(); i < size(); ++i) r.push_back(regions_[i].contains(*poly_, c));
    Bitset out(size());
    for (std::size_t i = 0; i < size(); ++i)
      if (r[i]) out.set(i);
    return out;
  }

 private:
  const Polygon* poly_;
  std::map<Point, std::size_t> seen_;
  std::vector<Point> points_;
  std::vector<VisibilityPolygon> regions_;
  std::optional<Arrangement> arr_;
  std::size_t arr_size_ = 0;
  std::map<Point, std::vector<bool>> rows_;
};

// One lattice point per cell (face, open edge piece, vertex) of the
// arrangement of the witnesses' visibility polygons. Visibility to every
// witness is constant on a cell, so these points realize every coverage
// pattern a grid point can have.
inline std::vector<Point> cell_representatives(const Arrangement& arr, const Rational& w) {
  std::vector<Point> out;
  for (std::size_t f = 0; f < arr.faces.size(); ++f)
    if (auto p = arr.face_lattice_point(f, w)) out.push_back(std::move(*p));
  for (const auto& pts : arr.on_segment)
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      if (auto p = lattice::on_open_segment(w, pts[i], pts[i + 1])) out.push_back(std::move(*p));
  for (const auto& v : arr.vertices)
    if (lattice::is_lattice_point(v, w)) out.push_back(v);
  return out;
}

// Minimum guard set on the grid w*Z^2 (plus the polygon vertices when
// requested), found by alternating exact set cover against a witness set
// with exact verification that adds the witnesses it finds unseen.
inline GridSolveResult solve_on_grid(const Polygon& poly, const Rational& w, WitnessPool& pool,
                                     const GridSolveOptions& opts = {}) {
  if (pool.size() == 0) pool.add_all(corner_witnesses(poly));
  GridSolveResult res;
  for (res.rounds = 1; res.rounds <= opts.max_rounds; ++res.rounds) {
    const Arrangement& arr = pool.arrangement();
    std::vector<Point> cands = cell_representatives(arr, w);
    if (opts.include_vertices) {
      auto vs = poly.vertices();
      cands.insert(cands.end(), vs.begin(), vs.end());
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    CoverInstance inst;
    inst.candidates = std::move(cands);
    inst.witnesses = pool.points();
    inst.incidence.reserve(inst.candidates.size());
    for (const auto& c : inst.candidates) inst.incidence.push_back(pool.row(c));

    // Any cover of W of optimal size that also covers P is grid-optimal.
    // Failed covers are banned one guard at a time to harvest more unseen
    // witnesses per round.
    CoverSolution sol = exact_cover(inst, opts.node_limit);
    const std::size_t opt = sol.chosen.size();
    std::vector<Point> unseen;
    CoverInstance alt;
    for (std::size_t attempt = 0;; ++attempt) {
      GuardSet g = guards_of(inst, sol);
      CoverageReport rep = verify_guard_set(poly, g);
      if (rep.covered) {
        res.guards = std::move(g);
        res.instance = std::move(inst);
        return res;
      }
      auto more = unseen_points(poly, g, opts.witnesses_per_face);
      unseen.insert(unseen.end(), more.begin(), more.end());
      if (attempt + 1 >= opts.alternatives) break;
      if (attempt == 0) alt = inst;
      alt.incidence[sol.chosen[attempt % opt]] = Bitset(alt.witnesses.size());
      if (!alt.feasible()) break;
      CoverSolution next = exact_cover(alt, opts.node_limit);
      if (next.chosen.size() != opt) break;
      sol = std::move(next);
    }
    pool.add_all(unseen);
  }
  throw std::runtime_error("solve_on_grid: witness refinement did not converge");
}

inline GridSolveResult solve_on_grid(const Polygon& poly, const Rational& w, const GridSolveOptions& opts = {}) {
  WitnessPool pool(poly);
  return solve_on_grid(poly, w, pool, opts);
}

// ----------------------------------------------------------------------------
// Bit cost

struct BitCost {
  std::vector<std::size_t> per_guard;
  std::size_t max_per_guard = 0;
  std::size_t total = 0;
};

// ceil(log2 den) + ceil(log2(|num| + 1)), at least one bit.
inline std::size_t coordinate_bits(const Rational& v) {
  mpz_class num = abs(v.numerator());
  mpz_class den = v.denominator();
  std::size_t bits = ceil_log2(den) + ceil_log2(mpz_class(num + 1));
  return std::max<std::size_t>(bits, 1);
}

inline std::size_t point_bits(const Point& p) { return coordinate_bits(p.x) + coordinate_bits(p.y) + 2; }

inline BitCost guard_bits(const GuardSet& g) {
  BitCost b;
  for (const auto& p : g.guards) {
    std::size_t c = point_bits(p);
    b.per_guard.push_back(c);
    b.max_per_guard = std::max(b.max_per_guard, c);
    b.total += c;
  }
  return b;
}

// ----------------------------------------------------------------------------
// Iterative deepening over dyadic grids

struct NaiveOptions {
  GridSolveOptions grid;
};

struct NaiveResult {
  bool exhausted = true;
  GuardSet guards;
  BitCost bits;
  int level = -1;                                 // grid exponent j of the returned solution
  std::vector<std::optional<std::size_t>> opt;    // optimum per level, nullopt if infeasible
};

inline NaiveResult naive_algorithm(const Polygon& poly, std::size_t max_bits, const NaiveOptions& opts = {}) {
  require_valid(poly, ValidateOptions{false});  // perturbed polygons may leave [0, L]^2
  NaiveResult out;
  WitnessPool pool(poly);
  std::optional<GridSolveResult> prev;
  for (std::size_t j = 0; j <= max_bits; ++j) {
    Rational w = Rational(poly.bound) * Rational::pow2(-static_cast<long>(j));
    std::optional<GridSolveResult> cur;
    try {
      cur = solve_on_grid(poly, w, pool, opts.grid);
    } catch (const InfeasibleCandidates&) {
    }
    out.opt.push_back(cur ? std::optional<std::size_t>(cur->guards.size()) : std::nullopt);
    if (cur && prev && cur->guards.size() == prev->guards.size()) {
      BitCost bits = guard_bits(prev->guards);
      if (bits.max_per_guard > max_bits) return out;
      out.exhausted = false;
      out.guards = prev->guards;
      out.bits = std::move(bits);
      out.level = static_cast<int>(j) - 1;
      return out;
    }
    prev = std::move(cur);
  }
  return out;
}

}  // namespace gallery
