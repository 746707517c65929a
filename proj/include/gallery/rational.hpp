#pragma once

// Exact rational numbers. Values whose numerator and denominator fit in
// int64 are kept inline and use 128-bit intermediates; everything else
// falls back to GMP. The representation is canonical: a value is stored
// inline if and only if it fits, so equality never needs a normalization
// pass.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace gallery {

namespace detail {

using i128 = __int128;
using u128 = unsigned __int128;

inline u128 uabs128(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

inline u128 gcd128(u128 a, u128 b) {
  if (a == 0) return b;
  if (b == 0) return a;
  int shift = 0;
  while (((a | b) & 1) == 0) {
    a >>= 1;
    b >>= 1;
    ++shift;
  }
  while ((a & 1) == 0) a >>= 1;
  do {
    while ((b & 1) == 0) b >>= 1;
    if (a > b) std::swap(a, b);
    b -= a;
  } while (b != 0);
  return a << shift;
}

inline std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) {
  if (a == 0) return b;
  if (b == 0) return a;
  int shift = __builtin_ctzll(a | b);
  a >>= __builtin_ctzll(a);
  do {
    b >>= __builtin_ctzll(b);
    if (a > b) std::swap(a, b);
    b -= a;
  } while (b != 0);
  return a << shift;
}

inline bool fits64(i128 v) { return v >= INT64_MIN && v <= INT64_MAX; }

inline mpz_class mpz_from_i128(i128 v) {
  u128 mag = uabs128(v);
  mpz_class out;
  std::uint64_t limbs[2] = {static_cast<std::uint64_t>(mag), static_cast<std::uint64_t>(mag >> 64)};
  mpz_import(out.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, limbs);
  if (v < 0) out = -out;
  return out;
}

inline mpz_class mpz_from_i64(std::int64_t v) { return mpz_from_i128(v); }

inline bool mpz_fits_i64(const mpz_class& z) { return mpz_fits_slong_p(z.get_mpz_t()) != 0; }

inline std::int64_t mpz_to_i64(const mpz_class& z) { return mpz_get_si(z.get_mpz_t()); }

}  // namespace detail

class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : rep_(Small{n, 1}) {}  // NOLINT(google-explicit-constructor)
  Rational(int n) : rep_(Small{n, 1}) {}           // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den) { *this = from_i128(num, den); }

  explicit Rational(const mpz_class& z) { assign_big(mpq_class(z)); }
  explicit Rational(mpq_class q) {
    q.canonicalize();
    assign_big(std::move(q));
  }
  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::domain_error("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    assign_big(std::move(q));
  }

  // Accepts "a", "a/b" with optional leading '-'.
  static Rational parse(std::string_view text) {
    std::string s(text);
    auto slash = s.find('/');
    mpz_class num, den(1);
    if (num.set_str(s.substr(0, slash), 10) != 0) throw std::invalid_argument("bad rational: " + s);
    if (slash != std::string::npos) {
      if (den.set_str(s.substr(slash + 1), 10) != 0) throw std::invalid_argument("bad rational: " + s);
      if (den == 0) throw std::domain_error("zero denominator in " + s);
    }
    return Rational(num, den);
  }

  // 2^k for any integer k.
  static Rational pow2(long k) {
    mpz_class p(1);
    if (k >= 0) {
      mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
      return Rational(p);
    }
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-k));
    return Rational(mpz_class(1), p);
  }

  bool is_small() const { return std::holds_alternative<Small>(rep_); }

  int sign() const {
    if (auto s = std::get_if<Small>(&rep_)) return (s->num > 0) - (s->num < 0);
    return sgn(std::get<mpq_class>(rep_));
  }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const {
    if (auto s = std::get_if<Small>(&rep_)) return s->den == 1;
    return std::get<mpq_class>(rep_).get_den() == 1;
  }

  mpz_class numerator() const {
    if (auto s = std::get_if<Small>(&rep_)) return detail::mpz_from_i64(s->num);
    return std::get<mpq_class>(rep_).get_num();
  }
  mpz_class denominator() const {
    if (auto s = std::get_if<Small>(&rep_)) return detail::mpz_from_i64(s->den);
    return std::get<mpq_class>(rep_).get_den();
  }

  mpq_class to_mpq() const {
    if (auto s = std::get_if<Small>(&rep_)) {
      return mpq_class(detail::mpz_from_i64(s->num), detail::mpz_from_i64(s->den));
    }
    return std::get<mpq_class>(rep_);
  }

  double to_double() const {
    if (auto s = std::get_if<Small>(&rep_)) return static_cast<double>(s->num) / static_cast<double>(s->den);
    return std::get<mpq_class>(rep_).get_d();
  }

  std::string str() const {
    if (auto s = std::get_if<Small>(&rep_)) {
      return s->den == 1 ? std::to_string(s->num) : std::to_string(s->num) + "/" + std::to_string(s->den);
    }
    return std::get<mpq_class>(rep_).get_str();
  }

  // Always "num/den", as used by the polygon file format.
  std::string fraction_str() const { return numerator().get_str() + "/" + denominator().get_str(); }

  mpz_class floor() const {
    mpz_class out;
    mpz_class n = numerator(), d = denominator();
    mpz_fdiv_q(out.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    return out;
  }
  mpz_class ceil() const {
    mpz_class out;
    mpz_class n = numerator(), d = denominator();
    mpz_cdiv_q(out.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    return out;
  }

  Rational abs() const { return sign() < 0 ? -*this : *this; }

  Rational operator-() const {
    if (auto s = std::get_if<Small>(&rep_)) {
      if (s->num != INT64_MIN) return Rational(Small{-s->num, s->den});
    }
    return Rational(mpq_class(-to_mpq()));
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    auto sa = std::get_if<Small>(&a.rep_);
    auto sb = std::get_if<Small>(&b.rep_);
    if (sa && sb) {
      if (sa->den == sb->den) return from_i128(detail::i128(sa->num) + sb->num, sa->den);
      return from_i128(detail::i128(sa->num) * sb->den + detail::i128(sb->num) * sa->den,
                       detail::i128(sa->den) * sb->den);
    }
    return Rational(mpq_class(a.to_mpq() + b.to_mpq()));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    auto sa = std::get_if<Small>(&a.rep_);
    auto sb = std::get_if<Small>(&b.rep_);
    if (sa && sb) {
      if (sa->den == sb->den) return from_i128(detail::i128(sa->num) - sb->num, sa->den);
      return from_i128(detail::i128(sa->num) * sb->den - detail::i128(sb->num) * sa->den,
                       detail::i128(sa->den) * sb->den);
    }
    return Rational(mpq_class(a.to_mpq() - b.to_mpq()));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    auto sa = std::get_if<Small>(&a.rep_);
    auto sb = std::get_if<Small>(&b.rep_);
    if (sa && sb) {
      if (sa->num == 0 || sb->num == 0) return Rational();
      // Cross-cancel first so the product is already reduced.
      auto g1 = static_cast<std::int64_t>(detail::gcd64(detail::uabs128(sa->num), static_cast<std::uint64_t>(sb->den)));
      auto g2 = static_cast<std::int64_t>(detail::gcd64(detail::uabs128(sb->num), static_cast<std::uint64_t>(sa->den)));
      detail::i128 n = detail::i128(sa->num / g1) * (sb->num / g2);
      detail::i128 d = detail::i128(sa->den / g2) * (sb->den / g1);
      if (detail::fits64(n) && detail::fits64(d)) return Rational(Small{static_cast<std::int64_t>(n), static_cast<std::int64_t>(d)});
      return Rational(mpq_class(detail::mpz_from_i128(n), detail::mpz_from_i128(d)));
    }
    return Rational(mpq_class(a.to_mpq() * b.to_mpq()));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    return a * b.reciprocal();
  }

  Rational reciprocal() const {
    if (auto s = std::get_if<Small>(&rep_)) {
      if (s->num == 0) throw std::domain_error("division by zero");
      if (s->num != INT64_MIN) return s->num < 0 ? Rational(Small{-s->den, -s->num}) : Rational(Small{s->den, s->num});
    }
    mpq_class q = to_mpq();
    mpq_inv(q.get_mpq_t(), q.get_mpq_t());
    return Rational(std::move(q));
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend int compare(const Rational& a, const Rational& b) {
    auto sa = std::get_if<Small>(&a.rep_);
    auto sb = std::get_if<Small>(&b.rep_);
    if (sa && sb) {
      if (sa->den == sb->den) return (sa->num > sb->num) - (sa->num < sb->num);
      detail::i128 l = detail::i128(sa->num) * sb->den;
      detail::i128 r = detail::i128(sb->num) * sa->den;
      return (l > r) - (l < r);
    }
    int c = cmp(a.to_mpq(), b.to_mpq());
    return (c > 0) - (c < 0);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    auto sa = std::get_if<Small>(&a.rep_);
    auto sb = std::get_if<Small>(&b.rep_);
    if (sa && sb) return sa->num == sb->num && sa->den == sb->den;
    if (sa || sb) return false;  // canonical form: mixed representations differ
    return std::get<mpq_class>(a.rep_) == std::get<mpq_class>(b.rep_);
  }
  friend bool operator<(const Rational& a, const Rational& b) { return compare(a, b) < 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return compare(a, b) > 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return compare(a, b) >= 0; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  std::size_t hash() const {
    if (auto s = std::get_if<Small>(&rep_)) {
      return std::hash<std::int64_t>{}(s->num) * 31 + std::hash<std::int64_t>{}(s->den);
    }
    return std::hash<std::string>{}(str());
  }

 private:
  struct Small {
    std::int64_t num = 0;
    std::int64_t den = 1;
  };

  explicit Rational(Small s) : rep_(s) {}

  static Rational from_i128(detail::i128 n, detail::i128 d) {
    if (d == 0) throw std::domain_error("zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (n == 0) return Rational();
    detail::u128 g = detail::gcd128(detail::uabs128(n), detail::u128(d));
    if (g != 1) {
      n /= static_cast<detail::i128>(g);
      d /= static_cast<detail::i128>(g);
    }
    if (detail::fits64(n) && detail::fits64(d)) return Rational(Small{static_cast<std::int64_t>(n), static_cast<std::int64_t>(d)});
    return Rational(mpq_class(detail::mpz_from_i128(n), detail::mpz_from_i128(d)));
  }

  void assign_big(mpq_class q) {
    const mpz_class& n = q.get_num();
    const mpz_class& d = q.get_den();
    if (detail::mpz_fits_i64(n) && detail::mpz_fits_i64(d)) {
      rep_ = Small{detail::mpz_to_i64(n), detail::mpz_to_i64(d)};
    } else {
      rep_ = std::move(q);
    }
  }

  std::variant<Small, mpq_class> rep_{Small{}};
};

// ceil(log2(v)) for v >= 1, and 0 for v <= 1.
inline std::size_t ceil_log2(const mpz_class& v) {
  if (v <= 1) return 0;
  mpz_class m = v - 1;
  return mpz_sizeinbase(m.get_mpz_t(), 2);
}

}  // namespace gallery

template <>
struct std::hash<gallery::Rational> {
  std::size_t operator()(const gallery::Rational& r) const noexcept { return r.hash(); }
};
