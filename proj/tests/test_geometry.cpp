#include <gtest/gtest.h>

#include <random>

#include "gallery/corpus.hpp"
#include "oracles.hpp"
#include "test_corpus.hpp"

using namespace gallery;

namespace {

Point P(std::int64_t x, std::int64_t y) { return pt(x, y); }
Point Q(const char* x, const char* y) { return {Rational::parse(x), Rational::parse(y)}; }

}  // namespace

TEST(Rational, LowestTermsAndSign) {
  Rational r(6, -4);
  EXPECT_EQ(r.numerator(), -3);
  EXPECT_EQ(r.denominator(), 2);
  EXPECT_EQ(Rational::parse("10/4").str(), "5/2");
  EXPECT_EQ(Rational(0, 7).fraction_str(), "0/1");
  EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rational, FloorCeil) {
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational(-7, 2).ceil(), -3);
  EXPECT_EQ(Rational(7, 2).floor(), 3);
  EXPECT_EQ(Rational(4).ceil(), 4);
}

// The 64-bit fast path hands over to GMP without changing results.
TEST(Rational, OverflowMatchesMpq) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    auto draw = [&] {
      auto n = static_cast<std::int64_t>(rng()) >> (rng() % 40);
      auto d = static_cast<std::int64_t>(rng() >> (1 + rng() % 40)) + 1;
      return std::pair{n, d};
    };
    auto [an, ad] = draw();
    auto [bn, bd] = draw();
    Rational a(an, ad), b(bn, bd);
    mpq_class qa(mpz_class(std::to_string(an)), mpz_class(std::to_string(ad)));
    mpq_class qb(mpz_class(std::to_string(bn)), mpz_class(std::to_string(bd)));
    qa.canonicalize();
    qb.canonicalize();
    EXPECT_EQ((a + b).to_mpq(), mpq_class(qa + qb));
    EXPECT_EQ((a - b).to_mpq(), mpq_class(qa - qb));
    EXPECT_EQ((a * b).to_mpq(), mpq_class(qa * qb));
    if (bn != 0) EXPECT_EQ((a / b).to_mpq(), mpq_class(qa / qb));
    EXPECT_EQ(a < b, qa < qb);
  }
}

TEST(Orientation, Examples) {
  EXPECT_EQ(orientation(P(0, 0), P(1, 0), P(0, 1)), Orientation::Left);
  EXPECT_EQ(orientation(P(0, 0), P(1, 0), P(2, 0)), Orientation::Collinear);
  EXPECT_EQ(orientation(P(0, 0), P(0, 1), P(1, 0)), Orientation::Right);
}

TEST(Orientation, AntisymmetricProperty) {
  std::mt19937_64 rng(11);
  Polygon box{{P(0, 0), P(8, 0), P(8, 8), P(0, 8)}, {}, 8};
  for (int i = 0; i < 500; ++i) {
    Point a = oracle::random_point_in(rng, box, true, 3), b = oracle::random_point_in(rng, box, true, 3),
          c = oracle::random_point_in(rng, box, true, 3);
    Orientation o = orientation(a, b, c);
    Orientation s = orientation(a, c, b);
    if (o == Orientation::Collinear)
      EXPECT_EQ(s, Orientation::Collinear);
    else
      EXPECT_EQ(static_cast<int>(o), -static_cast<int>(s));
  }
}

TEST(SegmentIntersection, Examples) {
  auto x = segment_intersection(Segment(P(0, 0), P(2, 2)), Segment(P(0, 2), P(2, 0)));
  ASSERT_TRUE(std::holds_alternative<Point>(x));
  EXPECT_EQ(std::get<Point>(x), P(1, 1));

  auto none = segment_intersection(Segment(P(0, 0), P(1, 0)), Segment(P(0, 1), P(1, 1)));
  EXPECT_TRUE(std::holds_alternative<NoIntersection>(none));

  auto overlap = segment_intersection(Segment(P(0, 0), P(2, 0)), Segment(P(1, 0), P(3, 0)));
  ASSERT_TRUE(std::holds_alternative<Segment>(overlap));
  EXPECT_EQ(std::get<Segment>(overlap), Segment(P(1, 0), P(2, 0)));
}

TEST(SegmentIntersection, EndpointTouch) {
  auto x = segment_intersection(Segment(P(0, 0), P(1, 1)), Segment(P(1, 1), P(2, 0)));
  ASSERT_TRUE(std::holds_alternative<Point>(x));
  EXPECT_EQ(std::get<Point>(x), P(1, 1));
}

TEST(SegmentIntersection, SymmetricAndMatchesCramer) {
  std::mt19937_64 rng(3);
  Polygon box{{P(0, 0), P(4, 0), P(4, 4), P(0, 4)}, {}, 4};
  for (int i = 0; i < 1000; ++i) {
    Point a = oracle::random_point_in(rng, box, true, 2), b = oracle::random_point_in(rng, box, true, 2);
    Point c = oracle::random_point_in(rng, box, true, 2), d = oracle::random_point_in(rng, box, true, 2);
    if (a == b || c == d) continue;
    auto st = segment_intersection(Segment(a, b), Segment(c, d));
    auto ts = segment_intersection(Segment(c, d), Segment(a, b));
    EXPECT_EQ(st.index(), ts.index());
    if (auto* p = std::get_if<Point>(&st)) EXPECT_EQ(*p, std::get<Point>(ts));
    if (auto* s = std::get_if<Segment>(&st)) EXPECT_EQ(*s, std::get<Segment>(ts));
    auto ref = oracle::cramer_point(a, b, c, d);
    if (ref) {
      ASSERT_TRUE(std::holds_alternative<Point>(st));
      EXPECT_EQ(std::get<Point>(st), *ref);
    } else if (!oracle::cross3(a, b, c).is_zero() || !oracle::cross3(a, b, d).is_zero()) {
      EXPECT_TRUE(std::holds_alternative<NoIntersection>(st));
    }
  }
}

TEST(PointInPolygon, Examples) {
  EXPECT_EQ(point_in_polygon(Q("1/2", "1/2"), unit_square()), Location::Interior);
  EXPECT_EQ(point_in_polygon(Q("0", "1/2"), unit_square()), Location::Boundary);
  Polygon holed{unit_square().outer, {{Q("1/4", "1/4"), Q("1/4", "3/4"), Q("3/4", "3/4"), Q("3/4", "1/4")}}, 1};
  EXPECT_EQ(point_in_polygon(Q("1/2", "1/2"), holed), Location::Exterior);
  EXPECT_EQ(point_in_polygon(Q("1/4", "1/2"), holed), Location::Boundary);
  EXPECT_EQ(point_in_polygon(Q("1/8", "1/2"), holed), Location::Interior);
}

// Crossing number against an independent winding-number implementation.
TEST(PointInPolygon, AgreesWithWindingNumber) {
  std::mt19937_64 rng(5);
  for (const auto& [name, poly] : testing_corpus::small_corpus()) {
    Box b = bounding_box(poly.outer);
    for (int i = 0; i < 1000; ++i) {
      // Coarse and fine draws so boundary hits actually happen.
      int bits = i % 2 ? 2 : 10;
      Point p{oracle::random_rational(rng, b.xmin - 1, b.xmax + 1, bits),
              oracle::random_rational(rng, b.ymin - 1, b.ymax + 1, bits)};
      Location got = point_in_polygon(p, poly);
      oracle::Where want = oracle::locate(p, poly);
      Location expect = want == oracle::Where::Inside     ? Location::Interior
                        : want == oracle::Where::Outside ? Location::Exterior
                                                          : Location::Boundary;
      ASSERT_EQ(got, expect) << name << " at " << p;
    }
  }
}

TEST(ValidatePolygon, Examples) {
  EXPECT_TRUE(validate_polygon(unit_square()).valid());

  Polygon cw = unit_square();
  std::reverse(cw.outer.begin(), cw.outer.end());
  ValidityReport r = validate_polygon(cw);
  EXPECT_TRUE(r.has(ViolationKind::OuterOrientation));

  Polygon bowtie{{P(0, 0), P(2, 2), P(2, 0), P(0, 2)}, {}, 2};
  ValidityReport b = validate_polygon(bowtie);
  ASSERT_TRUE(b.has(ViolationKind::SelfIntersection));
  bool found = false;
  for (const auto& v : b.violations)
    if (v.kind == ViolationKind::SelfIntersection && v.first == 0 && v.second == 2) found = true;
  EXPECT_TRUE(found) << b.describe();
}

// Brute force over every non-adjacent edge pair agrees with the report.
TEST(ValidatePolygon, BowtieBruteForce) {
  Ring r{P(0, 0), P(2, 2), P(2, 0), P(0, 2)};
  std::vector<std::pair<std::size_t, std::size_t>> crossing;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 2; j < 4; ++j) {
      if (i == 0 && j == 3) continue;
      if (oracle::cramer_point(r[i], r[(i + 1) % 4], r[j], r[(j + 1) % 4])) crossing.emplace_back(i, j);
    }
  ASSERT_EQ(crossing.size(), 1u);
  EXPECT_EQ(crossing[0], std::make_pair(std::size_t{0}, std::size_t{2}));
}

TEST(ValidatePolygon, OtherViolations) {
  Polygon collinear{{P(0, 0), P(1, 0), P(2, 0), P(2, 2), P(0, 2)}, {}, 2};
  EXPECT_TRUE(validate_polygon(collinear).has(ViolationKind::CollinearVertex));

  Polygon out_of_bounds{{P(0, 0), P(3, 0), P(3, 3), P(0, 3)}, {}, 2};
  EXPECT_TRUE(validate_polygon(out_of_bounds).has(ViolationKind::OutOfBounds));

  Polygon ccw_hole = square_with_hole();
  std::reverse(ccw_hole.holes[0].begin(), ccw_hole.holes[0].end());
  EXPECT_TRUE(validate_polygon(ccw_hole).has(ViolationKind::HoleOrientation));

  Polygon escaping = square_with_hole();
  escaping.holes[0] = {Q("1/2", "1/2"), Q("1/2", "3/2"), Q("3/2", "3/2"), Q("3/2", "1/2")};
  EXPECT_FALSE(validate_polygon(escaping).valid());

  Polygon two{unit_square().outer,
              {{Q("1/8", "1/8"), Q("1/8", "1/2"), Q("1/2", "1/2"), Q("1/2", "1/8")},
               {Q("1/4", "1/4"), Q("1/4", "3/4"), Q("3/4", "3/4"), Q("3/4", "1/4")}},
              1};
  EXPECT_FALSE(validate_polygon(two).valid());

  Polygon tiny{{P(0, 0), P(1, 0)}, {}, 1};
  EXPECT_TRUE(validate_polygon(tiny).has(ViolationKind::TooFewVertices));
}

TEST(ValidatePolygon, CorpusIsValid) {
  for (const auto& [name, poly] : testing_corpus::small_corpus())
    EXPECT_TRUE(validate_polygon(poly).valid()) << name << ": " << validate_polygon(poly).describe();
}

TEST(Line, NormalizedIntegerCoefficients) {
  Line l = Line::through(Q("0", "3"), Q("4", "0"));  // 3x + 4y = 12
  EXPECT_EQ(l.a, Rational(3));
  EXPECT_EQ(l.b, Rational(4));
  EXPECT_EQ(l.c, Rational(12));
  Line m = Line::through(Q("4", "0"), Q("0", "3"));
  EXPECT_EQ(l.a, m.a);
  EXPECT_EQ(l.c, m.c);
  Line v = Line::through(Q("1/2", "0"), Q("1/2", "1"));
  EXPECT_EQ(v.a, Rational(2));
  EXPECT_EQ(v.b, Rational(0));
  EXPECT_EQ(v.c, Rational(1));
}

TEST(Line, IntersectionMatchesCramer) {
  Line l = Line::through(P(0, 0), P(2, 2));
  Line m = Line::through(P(0, 2), P(2, 0));
  auto p = line_intersection(l, m);
  ASSERT_TRUE(p);
  EXPECT_EQ(*p, *oracle::cramer_point(P(0, 0), P(2, 2), P(0, 2), P(2, 0)));
  EXPECT_FALSE(line_intersection(l, Line::through(P(0, 1), P(1, 2))));
}
