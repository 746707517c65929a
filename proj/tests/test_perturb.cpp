#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gallery/corpus.hpp"
#include "oracles.hpp"
#include "test_corpus.hpp"

using namespace gallery;

namespace {

Point Q(const char* x, const char* y) { return {Rational::parse(x), Rational::parse(y)}; }

// Intersection of a1 x + b1 y = c1 and a2 x + b2 y = c2 by elimination.
Point solve2(Rational a1, Rational b1, Rational c1, Rational a2, Rational b2, Rational c2) {
  if (a1.is_zero()) {
    std::swap(a1, a2);
    std::swap(b1, b2);
    std::swap(c1, c2);
  }
  Rational f = a2 / a1;
  Rational y = (c2 - f * c1) / (b2 - f * b1);
  return {(c1 - b1 * y) / a1, y};
}

}  // namespace

TEST(OffsetLine, AxisParallel) {
  Line y0(0, 1, 0);
  Line out = offset_line(y0, pt(1, 0), Rational(1, 2), Side::Outside);
  EXPECT_EQ(out, Line(0, 1, Rational(-1, 2)));
  Line in = offset_line(y0, pt(1, 0), Rational(1, 2), Side::Inside);
  EXPECT_EQ(in, Line(0, 1, Rational(1, 2)));
}

TEST(OffsetLine, PythagoreanDirection) {
  Line l(3, 4, 12);
  Line out = offset_line(l, pt(-4, 3), Rational(1), Side::Outside);
  EXPECT_EQ(out, Line(3, 4, 17));
  // Distance between the parallel lines is |17 - 12| / 5.
  EXPECT_EQ((out.c - l.c) / Rational(5), Rational(1));
}

TEST(OffsetLine, IrrationalNormRejectedInExactMode) {
  Line l(1, 1, 1);
  try {
    offset_line(l, pt(-1, 1), Rational(1, 4), Side::Outside);
    FAIL() << "expected NonPythagoreanEdge";
  } catch (const PerturbError& e) {
    EXPECT_EQ(e.kind(), PerturbErrorKind::NonPythagoreanEdge);
  }
}

TEST(OffsetLine, ApproximateModeOvershootsSlightly) {
  Line l(1, 1, 1);
  Line out = offset_line(l, pt(-1, 1), Rational(1, 4), Side::Outside, OffsetOptions{false, 64});
  // Shift is at least t * sqrt(2) and within 2^-60 of it.
  double shift = (out.c / out.a - Rational(1)).to_double();
  EXPECT_GE(shift, 0.25 * std::numbers::sqrt2 - 1e-15);
  EXPECT_NEAR(shift, 0.25 * std::numbers::sqrt2, 1e-12);
  Rational s = out.c / out.a - Rational(1);
  EXPECT_GE(s * s, Rational(1, 8));
}

TEST(OffsetLine, ZeroDirection) {
  try {
    offset_line(Line(0, 1, 0), pt(0, 0), Rational(1), Side::Outside);
    FAIL();
  } catch (const PerturbError& e) {
    EXPECT_EQ(e.kind(), PerturbErrorKind::ZeroLengthEdge);
  }
}

TEST(EdgeInflate, UnitSquare) {
  Polygon p = edge_inflate(unit_square(), Rational(1, 2));
  Ring want{Q("-1/2", "-1/2"), Q("3/2", "-1/2"), Q("3/2", "3/2"), Q("-1/2", "3/2")};
  EXPECT_EQ(p.outer, want);
}

TEST(EdgeInflate, RightTriangle) {
  Polygon p = edge_inflate(testing_corpus::right_triangle(), Rational(1));
  // Offset supporting lines: y = -1, 3x + 4y = 17, x = -1.
  Point v0 = solve2(1, 0, -1, 0, 1, -1);
  Point v1 = solve2(0, 1, -1, 3, 4, 17);
  Point v2 = solve2(3, 4, 17, 1, 0, -1);
  EXPECT_EQ(v0, pt(-1, -1));
  EXPECT_EQ(v1, pt(7, -1));
  ASSERT_EQ(p.outer.size(), 3u);
  EXPECT_EQ(p.outer[0], v0);
  EXPECT_EQ(p.outer[1], v1);
  EXPECT_EQ(p.outer[2], v2);
}

TEST(EdgeInflate, ZeroIsIdentity) {
  for (const auto& [name, poly] : testing_corpus::small_corpus())
    EXPECT_EQ(edge_inflate(poly, Rational(0)), poly) << name;
}

TEST(EdgeInflate, HolesShrink) {
  Polygon p = edge_inflate(square_with_hole(), Rational(1, 8));
  ASSERT_EQ(p.holes.size(), 1u);
  for (const auto& v : p.holes[0]) {
    EXPECT_TRUE(v.x == Rational(3, 8) || v.x == Rational(5, 8));
    EXPECT_TRUE(v.y == Rational(3, 8) || v.y == Rational(5, 8));
  }
  EXPECT_TRUE(validate_polygon(p, {false}).valid());
}

TEST(EdgeInflate, TooLargeIsInvalidResult) {
  try {
    edge_inflate(square_with_hole(), Rational(1, 2));
    FAIL();
  } catch (const PerturbError& e) {
    EXPECT_EQ(e.kind(), PerturbErrorKind::InvalidResult);
  }
}

TEST(EdgeInflate, NonPythagoreanPolygon) {
  Polygon tri{{pt(0, 0), pt(1, 0), pt(0, 1)}, {}, 1};
  EXPECT_THROW(edge_inflate(tri, Rational(1, 4)), PerturbError);
  Polygon approx = edge_inflate(tri, Rational(1, 4), OffsetOptions{false, 64});
  EXPECT_TRUE(validate_polygon(approx, {false}).valid());
}

TEST(EdgeInflate, ComposesAdditively) {
  for (const auto& [name, poly] : testing_corpus::small_corpus()) {
    Rational s(1, 32), t(3, 64);
    EXPECT_EQ(edge_inflate(edge_inflate(poly, s), t), edge_inflate(poly, s + t)) << name;
  }
}

TEST(EdgeInflate, ContainmentMonotone) {
  std::mt19937_64 rng(9);
  for (const auto& [name, poly] : testing_corpus::small_corpus()) {
    Polygon ps = edge_inflate(poly, Rational(1, 32));
    Polygon pt_ = edge_inflate(poly, Rational(1, 16));
    for (const auto& v : ps.vertices()) EXPECT_NE(point_in_polygon(v, pt_), Location::Exterior) << name;
    for (int i = 0; i < 200; ++i) {
      Point p = oracle::random_point_in(rng, poly);
      EXPECT_NE(point_in_polygon(p, ps), Location::Exterior) << name;
      EXPECT_NE(point_in_polygon(p, pt_), Location::Exterior) << name;
    }
  }
}

TEST(EdgePerturb, SingleShift) {
  Polygon p = edge_perturb(unit_square(), {Rational(1, 4), 0, 0, 0});
  Ring want{Q("0", "-1/4"), Q("1", "-1/4"), Q("1", "1"), Q("0", "1")};
  EXPECT_EQ(p.outer, want);
}

TEST(EdgePerturb, UniformDeflation) {
  Rational d(-1, 4);
  Polygon p = edge_perturb(unit_square(), {d, d, d, d});
  Ring want{Q("1/4", "1/4"), Q("3/4", "1/4"), Q("3/4", "3/4"), Q("1/4", "3/4")};
  EXPECT_EQ(p.outer, want);
}

TEST(EdgePerturb, UniformShiftEqualsInflate) {
  for (const auto& [name, poly] : testing_corpus::small_corpus()) {
    Rational t(1, 40);
    EXPECT_EQ(edge_perturb(poly, std::vector<Rational>(poly.edge_count(), t)), edge_inflate(poly, t)) << name;
  }
}

TEST(EdgePerturb, WrongShiftCount) {
  EXPECT_THROW(edge_perturb(unit_square(), {Rational(1)}), PerturbError);
}

TEST(EdgePerturb, CollapsedEdgeIsInvalid) {
  // Pushing both sides of a thin prong inward past each other.
  Polygon c = comb(2);
  std::vector<Rational> shifts(c.edge_count(), Rational(-1, 2));
  try {
    edge_perturb(c, shifts);
    FAIL();
  } catch (const PerturbError& e) {
    EXPECT_EQ(e.kind(), PerturbErrorKind::InvalidResult);
  }
}

TEST(VertexPerturb, Examples) {
  std::vector<Point> zeros(4, pt(0, 0));
  EXPECT_EQ(vertex_perturb(unit_square(), zeros), unit_square());

  std::vector<Point> one{Q("1/10", "0"), pt(0, 0), pt(0, 0), pt(0, 0)};
  Polygon p = vertex_perturb(unit_square(), one);
  EXPECT_EQ(p.outer[0], Q("1/10", "0"));
  EXPECT_EQ(p.outer[1], pt(1, 0));

  Rational delta(1, 8);
  std::vector<Point> edge{Point{Rational(3, 5) * delta, Rational(4, 5) * delta}, pt(0, 0), pt(0, 0), pt(0, 0)};
  EXPECT_NO_THROW(vertex_perturb(unit_square(), edge, delta));
  edge[0].x = edge[0].x + Rational(1, 1'000'000);
  try {
    vertex_perturb(unit_square(), edge, delta);
    FAIL();
  } catch (const PerturbError& e) {
    EXPECT_EQ(e.kind(), PerturbErrorKind::OffsetTooLarge);
  }
}

TEST(Sample, DiscreteInflationValues) {
  PerturbationSpec spec;
  spec.model = PerturbModel::EdgeInflate;
  spec.delta = 1;
  spec.granularity = 4;
  std::set<Rational> seen;
  for (std::uint64_t s = 0; s < 64; ++s) {
    spec.seed = s;
    auto [poly, rec] = sample(unit_square(), spec);
    ASSERT_TRUE(rec.discrete_index);
    EXPECT_EQ(rec.inflation, Rational(*rec.discrete_index, 4));
    seen.insert(rec.inflation);
  }
  std::set<Rational> want{Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  EXPECT_EQ(seen, want);
}

TEST(Sample, Deterministic) {
  for (auto model : {PerturbModel::EdgeInflate, PerturbModel::EdgePerturb, PerturbModel::VertexPerturb}) {
    PerturbationSpec spec;
    spec.model = model;
    spec.delta = Rational(1, 16);
    spec.seed = 42;
    auto [a, ra] = sample(l_polygon(), spec);
    auto [b, rb] = sample(l_polygon(), spec);
    EXPECT_EQ(a, b) << to_string(model);
    EXPECT_EQ(ra.seed, rb.seed);
  }
}

TEST(Sample, ContinuousInflationHas64FractionalBits) {
  PerturbationSpec spec;
  spec.delta = 1;
  for (std::uint64_t s = 0; s < 20; ++s) {
    spec.seed = s;
    auto [poly, rec] = sample(unit_square(), spec);
    EXPECT_GE(rec.inflation.sign(), 0);
    EXPECT_LT(rec.inflation, Rational(1));
    mpz_class two64 = mpz_class(1) << 64;
    EXPECT_EQ(mpz_class(two64 % rec.inflation.denominator()), 0);
  }
}

TEST(Sample, VertexOffsetsInsideDisk) {
  PerturbationSpec spec;
  spec.model = PerturbModel::VertexPerturb;
  spec.delta = Rational(1, 10);
  for (std::uint64_t s = 0; s < 50; ++s) {
    spec.seed = s;
    auto [poly, rec] = sample(comb(3), spec);
    ASSERT_EQ(rec.offsets.size(), 12u);
    for (const auto& u : rec.offsets) EXPECT_LE(squared_norm(u), spec.delta * spec.delta);
  }
}

TEST(Sample, EdgeShiftsInRange) {
  PerturbationSpec spec;
  spec.model = PerturbModel::EdgePerturb;
  spec.delta = Rational(1, 10);
  spec.seed = 5;
  auto [poly, rec] = sample(l_polygon(), spec);
  ASSERT_EQ(rec.shifts.size(), 6u);
  for (const auto& s : rec.shifts) EXPECT_LE(s.abs(), spec.delta);
}

TEST(Sample, RetryLimitExhausted) {
  PerturbationSpec spec;
  spec.delta = 4;  // far too large for the holed square
  spec.granularity = 2;
  spec.retry_limit = 3;
  bool saw_skip = false;
  for (std::uint64_t s = 0; s < 20 && !saw_skip; ++s) {
    spec.seed = s;
    try {
      sample(square_with_hole(), spec);
    } catch (const PerturbError& e) {
      EXPECT_EQ(e.kind(), PerturbErrorKind::InvalidResult);
      saw_skip = true;
    }
  }
  EXPECT_TRUE(saw_skip);
}

TEST(Sample, BadSpecs) {
  PerturbationSpec spec;
  spec.model = PerturbModel::VertexPerturb;
  spec.granularity = 3;
  EXPECT_THROW(sample(unit_square(), spec), PerturbError);
  spec = {};
  spec.delta = 0;
  EXPECT_THROW(sample(unit_square(), spec), PerturbError);
}

TEST(Pointedness, UnitSquare) {
  Pointedness p = pointedness(unit_square());
  double beta = p.beta.to_double();
  EXPECT_GT(beta, 0);
  EXPECT_LE(8 * beta, std::numbers::pi / 2);
  EXPECT_LE(beta, std::numbers::pi / 16);
  // Tight up to the sine bound: sin(pi/4) / 4.
  EXPECT_NEAR(beta, std::sin(std::numbers::pi / 4) / 4, 1e-12);
}

TEST(Pointedness, TriangleWitness) {
  Polygon tri = testing_corpus::right_triangle();
  std::vector<double> angles = oracle::corner_angles(tri.outer);
  std::size_t smallest = static_cast<std::size_t>(std::min_element(angles.begin(), angles.end()) - angles.begin());
  EXPECT_EQ(smallest, 1u);
  EXPECT_NEAR(angles[1], std::atan2(3.0, 4.0), 1e-12);
  Pointedness p = pointedness(tri);
  EXPECT_EQ(p.witness, 1u);
  EXPECT_LE(8 * p.beta.to_double(), angles[1]);
}

TEST(Pointedness, ExteriorAnglesCount) {
  // Every reflex corner of the comb has exterior angle pi/2; sharpest is still pi/2.
  Pointedness p = pointedness(comb(3));
  EXPECT_LE(8 * p.beta.to_double(), std::numbers::pi / 2);
}

TEST(Pointedness, NearCollinearStaysPositive) {
  Polygon sliver{{pt(0, 0), pt(1000, 1), pt(0, 1)}, {}, 1000};
  ASSERT_TRUE(validate_polygon(sliver).valid());
  Pointedness p = pointedness(sliver);
  EXPECT_GT(p.beta.sign(), 0);
  EXPECT_LE(8 * p.beta.to_double(), std::atan2(1.0, 1000.0));
  EXPECT_EQ(p.witness, 1u);
}

TEST(PointednessLemma, GammaZeroIsVertexPerturbation) {
  Rational delta(1, 4), delta0(1, 8);
  auto rep = check_pointedness_lemma(l_polygon(), delta, delta0, Rational(0), 17);
  EXPECT_TRUE(rep.passed);
  EXPECT_LE(rep.max_squared_displacement, delta0 * delta0);
}

TEST(PointednessLemma, UnitSquareAtBound) {
  Rational delta(1, 4), delta0 = delta * Rational(1, 2);
  Rational gamma = pointedness(unit_square()).beta * (delta - delta0);
  auto rep = check_pointedness_lemma(unit_square(), delta, delta0, gamma, 1);
  EXPECT_TRUE(rep.within_bound);
  EXPECT_TRUE(rep.passed);
  EXPECT_LE(rep.max_squared_displacement, delta * delta);
}

TEST(PointednessLemma, AboveBoundOnSharpWedgeCanFail) {
  Polygon wedge{{pt(0, 0), pt(8, 1), pt(0, 1)}, {}, 8};
  Rational delta(1), delta0(1, 2);
  Rational bound = pointedness(wedge).beta * (delta - delta0);
  Rational gamma(1, 8);
  ASSERT_GT(gamma, bound);
  auto rep = check_pointedness_lemma(wedge, delta, delta0, gamma, 3);
  EXPECT_FALSE(rep.within_bound);
  EXPECT_FALSE(rep.passed);
  EXPECT_GT(rep.max_displacement(), 1.0);
}

TEST(PointednessLemma, RandomDrawsPass) {
  std::mt19937_64 rng(21);
  auto corpus = testing_corpus::small_corpus();
  for (int i = 0; i < 30; ++i) {
    const auto& [name, poly] = corpus[rng() % corpus.size()];
    Rational delta(1, 1 << (2 + rng() % 4));
    Rational delta0 = delta * Rational(1 + static_cast<std::int64_t>(rng() % 7), 8);
    Rational gamma = pointedness(poly).beta * (delta - delta0);
    auto rep = check_pointedness_lemma(poly, delta, delta0, gamma, rng());
    EXPECT_TRUE(rep.passed) << name << " delta=" << delta << " delta0=" << delta0;
  }
}
