// Inflate a comb by t, snap a covering guard set to the grid of width t,
// and check the snapped guards still cover the inflated comb. Then draw a
// few random inflations and compare the bit cost of their cheapest
// covers.

#include <iostream>

#include "gallery/gallery.hpp"

using namespace gallery;

int main() {
  const Polygon comb = gen_polygon(GenSpec::parse("Comb 3"), true, 0);
  std::cout << emit_polygon(comb);

  DyadicRng rng(2024);
  GuardSet cover = random_cover(comb, rng);
  std::cout << "random cover:";
  for (const auto& g : cover.guards) std::cout << " " << point_str(g);
  std::cout << "\n";

  for (const Rational& t : {Rational(1, 4), Rational(1, 8), Rational(1, 16)}) {
    LemmaReport rep = check_rounding_lemma(comb, cover, t, t);
    std::cout << "t = " << t.fraction_str() << ": rounded to";
    for (const auto& g : rep.rounded.guards) std::cout << " " << point_str(g);
    std::cout << " -> " << (rep.passed ? "covers" : "fails") << " the inflated comb\n";
  }

  PerturbationSpec spec;
  spec.model = PerturbModel::EdgeInflate;
  spec.delta = Rational(1, 8);
  spec.granularity = 16;  // t is a multiple of delta/16
  for (std::uint64_t s = 0; s < 3; ++s) {
    spec.seed = s;
    auto [moved, rec] = sample(comb, spec);
    NaiveResult r = naive_algorithm(moved, 32);
    if (r.exhausted) {
      std::cout << "sample " << s << ": no plateau within 32 bits\n";
      continue;
    }
    std::cout << "sample " << s << " (t = " << rec.inflation.fraction_str() << "): " << r.guards.size() << " guards at level " << r.level << ", "
              << r.bits.max_per_guard << " bits per guard\n";
  }
}
