// Guard an L-shaped room: visibility from a corner, exact verification,
// and the cheapest grid solution.

#include <fstream>
#include <iostream>

#include "gallery/gallery.hpp"

using namespace gallery;

int main() {
  const Polygon room = parse_polygon(
      "L 2\n"
      "outer 6\n"
      "0 0\n2 0\n2 1\n1 1\n1 2\n0 2\n"
      "holes 0\n");

  // The reflex corner sees everything.
  const Point corner{Rational(1), Rational(1)};
  VisibilityPolygon vis = visibility_polygon(room, corner);
  std::cout << "area " << area(room).fraction_str() << ", visible from 1,1: "
            << signed_area(vis.boundary).fraction_str() << "\n";
  std::cout << "corner guard: " << (verify_guard_set(room, GuardSet{{corner}}).covered ? "covered" : "not covered")
            << "\n";

  // A guard at the far end of one arm misses the other arm.
  CoverageReport rep = verify_guard_set(room, GuardSet{{{Rational(7, 4), Rational(1, 4)}}});
  if (!rep.covered) std::cout << "guard 7/4,1/4 misses " << point_str(*rep.uncovered_witness) << "\n";

  NaiveResult best = naive_algorithm(room, 16);
  std::cout << "optimal guards " << best.guards.size() << " at level " << best.level << ":";
  for (const auto& g : best.guards.guards) std::cout << " " << point_str(g);
  std::cout << " (" << best.bits.max_per_guard << " bits per guard)\n";

  SvgOverlays ov;
  ov.guards = best.guards.guards;
  ov.visibility.push_back(vis);
  std::ofstream("l_polygon.svg") << emit_svg(room, ov);
  std::cout << "wrote l_polygon.svg\n";
}
