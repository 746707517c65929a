#pragma once

// SVG 1.1 scenes. Coordinates are printed as decimals rounded to 1e-9;
// that rounding happens here only and never feeds back into computation.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gallery/solve.hpp"

namespace gallery {

struct SvgOverlays {
  std::vector<Point> guards;
  std::vector<VisibilityPolygon> visibility;
  std::optional<Rational> grid;  // lattice width
  std::vector<Point> witnesses;
  std::optional<Polygon> inflated;
};

// Exact decimal rendering of v rounded to 9 places, halves away from zero.
inline std::string svg_number(const Rational& v) {
  static const mpz_class scale("1000000000");
  Rational scaled = v.abs() * Rational(scale);
  mpz_class n = (scaled + Rational(1, 2)).floor();
  mpz_class ip = n / scale, fp = n % scale;
  std::string frac = fp.get_str();
  frac.insert(0, 9 - frac.size(), '0');
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  std::string s = (v.sign() < 0 && n != 0 ? "-" : "") + ip.get_str();
  if (!frac.empty()) s += "." + frac;
  return s;
}

namespace detail {

inline std::string svg_ring_path(const Ring& r) {
  std::string d;
  for (std::size_t i = 0; i < r.size(); ++i)
    d += (i ? " L " : "M ") + svg_number(r[i].x) + " " + svg_number(r[i].y);
  return d + " Z";
}

inline std::string svg_polygon_path(const Polygon& p) {
  std::string d = svg_ring_path(p.outer);
  for (const auto& h : p.holes) d += " " + svg_ring_path(h);
  return d;
}

}  // namespace detail

inline std::string emit_svg(const Polygon& poly, const SvgOverlays& ov = {}) {
  Box b = bounding_box(ov.inflated ? ov.inflated->outer : poly.outer);
  Rational extent = std::max(b.xmax - b.xmin, b.ymax - b.ymin);
  Rational margin = extent * Rational(1, 20);
  Rational x0 = b.xmin - margin, y0 = b.ymin - margin;
  Rational size = extent + 2 * margin;
  Rational stroke = extent * Rational(1, 250);
  Rational dot = extent * Rational(1, 80);
  const std::string sw = svg_number(stroke);

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"600\" height=\"600\" viewBox=\""
     << svg_number(x0) << " " << svg_number(y0) << " " << svg_number(size) << " " << svg_number(size) << "\">\n";
  os << "<!-- coordinates rounded to 1e-9 for display -->\n";
  // Flip y about the box center so the scene reads with y upward.
  os << "<g transform=\"translate(0 " << svg_number(2 * y0 + size) << ") scale(1 -1)\">\n";
  if (ov.inflated)
    os << "<path id=\"inflated\" d=\"" << detail::svg_polygon_path(*ov.inflated)
       << "\" fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"" << sw << " " << sw << "\" stroke-width=\"" << sw
       << "\"/>\n";
  os << "<path id=\"polygon\" d=\"" << detail::svg_polygon_path(poly)
     << "\" fill=\"#f4f1e8\" fill-rule=\"evenodd\" stroke=\"#222222\" stroke-width=\"" << sw << "\"/>\n";
  for (std::size_t i = 0; i < ov.visibility.size(); ++i)
    os << "<path class=\"visibility\" d=\"" << detail::svg_ring_path(ov.visibility[i].boundary)
       << "\" fill=\"#4a90d9\" fill-opacity=\"0.25\" stroke=\"#4a90d9\" stroke-width=\"" << sw << "\"/>\n";
  if (ov.grid) {
    std::vector<Point> pts;
    try {
      pts = CandidateGrid{*ov.grid}.points(poly, 20000);
    } catch (const std::length_error&) {
    }
    for (const auto& p : pts)
      os << "<circle class=\"grid\" cx=\"" << svg_number(p.x) << "\" cy=\"" << svg_number(p.y) << "\" r=\""
         << svg_number(dot * Rational(1, 4)) << "\" fill=\"#999999\"/>\n";
  }
  for (const auto& p : ov.witnesses)
    os << "<circle class=\"witness\" cx=\"" << svg_number(p.x) << "\" cy=\"" << svg_number(p.y) << "\" r=\""
       << svg_number(dot * Rational(1, 2)) << "\" fill=\"#2e8b57\"/>\n";
  for (const auto& p : ov.guards)
    os << "<circle class=\"guard\" cx=\"" << svg_number(p.x) << "\" cy=\"" << svg_number(p.y) << "\" r=\""
       << svg_number(dot) << "\" fill=\"#c0392b\"/>\n";
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace gallery
