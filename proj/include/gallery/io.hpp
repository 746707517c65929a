#pragma once

// Text formats: polygon files, guard lists and rational literals.
//
//   L <int>
//   outer <n>
//   <num>/<den> <num>/<den>      (n lines)
//   holes <h>
//   hole <m>                     (h blocks, each followed by m coordinate lines)
//
// '#' starts a comment; blank lines are ignored. Floats are rejected.

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gallery/coverage.hpp"

namespace gallery {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::size_t line, const std::string& msg)
      : std::runtime_error("SyntaxError: line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline bool is_int_literal(std::string_view s) {
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace detail

// "a/b" or "a" with decimal integers; line is used for diagnostics only.
inline Rational parse_rational(std::string_view text, std::size_t line = 0) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!detail::is_int_literal(num) || !detail::is_int_literal(den))
    throw SyntaxError(line, "malformed rational '" + std::string(text) + "'");
  mpz_class n(std::string(num[0] == '+' ? num.substr(1) : num)), d(std::string(den[0] == '+' ? den.substr(1) : den));
  if (d == 0) throw SyntaxError(line, "zero denominator in '" + std::string(text) + "'");
  return Rational(n, d);
}

namespace detail {

struct LineReader {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> lines;
  std::size_t pos = 0;

  explicit LineReader(std::string_view text) {
    std::size_t no = 0, start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view raw = text.substr(start, end - start);
      ++no;
      if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      std::istringstream is{std::string(raw)};
      std::vector<std::string> tok;
      for (std::string t; is >> t;) tok.push_back(t);
      if (!tok.empty()) lines.emplace_back(no, std::move(tok));
      start = end + 1;
    }
  }

  std::size_t last_line() const { return lines.empty() ? 1 : lines.back().first; }

  const std::pair<std::size_t, std::vector<std::string>>& next(const char* what) {
    if (pos == lines.size()) throw SyntaxError(last_line(), std::string("unexpected end of input, expected ") + what);
    return lines[pos++];
  }

  std::int64_t keyword_count(const char* keyword) {
    const auto& [no, tok] = next(keyword);
    if (tok.size() != 2 || tok[0] != keyword) throw SyntaxError(no, std::string("expected '") + keyword + " <count>'");
    if (!is_int_literal(tok[1]) || tok[1][0] == '-') throw SyntaxError(no, "count must be a non-negative integer");
    try {
      return std::stoll(tok[1]);
    } catch (const std::out_of_range&) {
      throw SyntaxError(no, "count out of range");
    }
  }

  Ring ring(std::int64_t n) {
    Ring r;
    for (std::int64_t i = 0; i < n; ++i) {
      const auto& [no, tok] = next("coordinate line");
      if (tok.size() != 2) throw SyntaxError(no, "expected two coordinates");
      r.push_back({parse_rational(tok[0], no), parse_rational(tok[1], no)});
    }
    return r;
  }
};

}  // namespace detail

// Parses without validating.
inline Polygon parse_polygon_unchecked(std::string_view text) {
  detail::LineReader in(text);
  Polygon poly;
  {
    const auto& [no, tok] = in.next("'L <int>'");
    if (tok.size() != 2 || tok[0] != "L" || !detail::is_int_literal(tok[1])) throw SyntaxError(no, "expected 'L <int>'");
    try {
      poly.bound = std::stoll(tok[1]);
    } catch (const std::out_of_range&) {
      throw SyntaxError(no, "bound out of range");
    }
  }
  poly.outer = in.ring(in.keyword_count("outer"));
  std::int64_t h = in.keyword_count("holes");
  for (std::int64_t i = 0; i < h; ++i) poly.holes.push_back(in.ring(in.keyword_count("hole")));
  if (in.pos != in.lines.size()) throw SyntaxError(in.lines[in.pos].first, "trailing content");
  return poly;
}

inline Polygon parse_polygon(std::string_view text) {
  Polygon poly = parse_polygon_unchecked(text);
  require_valid(poly);
  return poly;
}

inline std::string emit_polygon(const Polygon& poly) {
  std::ostringstream os;
  auto ring = [&](const Ring& r) {
    for (const auto& p : r) os << p.x.fraction_str() << ' ' << p.y.fraction_str() << '\n';
  };
  os << "L " << poly.bound << '\n' << "outer " << poly.outer.size() << '\n';
  ring(poly.outer);
  os << "holes " << poly.holes.size() << '\n';
  for (const auto& h : poly.holes) {
    os << "hole " << h.size() << '\n';
    ring(h);
  }
  return os.str();
}

// "x1/d1,y1/d1 x2/d2,y2/d2 ..."
inline GuardSet parse_guards(std::string_view text) {
  GuardSet g;
  std::istringstream is{std::string(text)};
  for (std::string tok; is >> tok;) {
    auto comma = tok.find(',');
    if (comma == std::string::npos || tok.find(',', comma + 1) != std::string::npos)
      throw SyntaxError(1, "guard '" + tok + "' must be x,y");
    g.guards.push_back({parse_rational(std::string_view(tok).substr(0, comma), 1),
                        parse_rational(std::string_view(tok).substr(comma + 1), 1)});
  }
  return g;
}

inline std::string point_str(const Point& p) { return p.x.fraction_str() + "," + p.y.fraction_str(); }

inline std::string emit_guards(const GuardSet& g) {
  std::string s;
  for (const auto& p : g.guards) {
    if (!s.empty()) s += ' ';
    s += point_str(p);
  }
  return s;
}

}  // namespace gallery
