#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "error.hpp"

namespace l1renorm {

/// Exact arbitrary precision rational number.
///
/// Thin value type over GMP's mpq_class. Always canonical: the fraction is
/// reduced and the denominator is positive. Every operator evaluates eagerly,
/// so the usual `auto` pitfalls of gmpxx expression templates do not apply.
class Rational {
 public:
  Rational() = default;
  Rational(long n) : q_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(int n) : q_(static_cast<long>(n)) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den) {
    if (den == 0) throw precondition_error("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw precondition_error("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }

  /// Parses "p/q" or "p" (optional leading sign, decimal digits only).
  static Rational parse(std::string_view text) {
    auto fail = [&](const char* why) {
      return parse_error("invalid rational \"" + std::string(text) + "\": " + why);
    };
    if (text.empty()) throw fail("empty string");
    const auto slash = text.find('/');
    auto digits_ok = [](std::string_view s, bool allow_sign) {
      if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
      if (s.empty()) return false;
      for (char c : s)
        if (c < '0' || c > '9') return false;
      return true;
    };
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false)) throw fail("expected p/q with integer p, q");
    if (num.front() == '+') num.remove_prefix(1);
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) throw fail("zero denominator");
    return Rational(n, d);
  }

  const mpq_class& raw() const noexcept { return q_; }
  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }

  int sign() const noexcept { return sgn(q_); }
  bool is_zero() const noexcept { return sign() == 0; }
  double to_double() const { return q_.get_d(); }

  /// Canonical text: "p/q", or "p" when the denominator is one.
  std::string str() const { return q_.get_str(); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw precondition_error("division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class q_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline Rational square(const Rational& r) { return r * r; }

/// 2^e for any integer exponent.
inline Rational pow2(long e) {
  mpz_class p = 1;
  const unsigned long m = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), m);
  return e >= 0 ? Rational(p, mpz_class(1)) : Rational(mpz_class(1), p);
}

/// x^n for n >= 0.
inline Rational pow(const Rational& x, unsigned n) {
  Rational r(1);
  for (unsigned i = 0; i < n; ++i) r *= x;
  return r;
}

/// Smallest n >= 0 with 2^n >= x (x > 0).
inline long ceil_log2(const Rational& x) {
  if (x.sign() <= 0) throw precondition_error("ceil_log2 of a non-positive rational");
  long n = 0;
  while (pow2(n) < x) ++n;
  return n;
}

/// Decimal rendering of sqrt(x), truncated (not rounded) to `digits` places.
///
/// Computed exactly as floor(sqrt(x * 10^(2 digits))) / 10^digits so the
/// text is reproducible bit for bit across platforms.
inline std::string sqrt_decimal(const Rational& x, int digits) {
  if (x.sign() < 0) throw precondition_error("sqrt of a negative rational");
  if (digits < 0) digits = 0;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(2 * digits));
  mpz_class scaled = x.num() * scale / x.den();
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  std::string s = root.get_str();
  if (digits == 0) return s;
  if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
  s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  return s;
}

/// Largest p/q with 1 <= q <= 1/prec and (p/q)^2 <= x.
///
/// Stern-Brocot descent with exact comparisons; each run of moves in one
/// direction is taken in a single step by galloping search, so the cost is
/// logarithmic in the denominator bound.
inline Rational rational_sqrt_floor(const Rational& x, const Rational& prec) {
  if (x.sign() < 0) throw precondition_error("rational_sqrt_floor of a negative rational");
  if (prec.sign() <= 0) throw precondition_error("precision must be positive");
  const mpz_class bound = (Rational(1) / prec).num() / (Rational(1) / prec).den();
  if (bound < 1) throw precondition_error("precision must be at most 1");
  const mpz_class xn = x.num(), xd = x.den();
  // p/q <= sqrt(x)  <=>  p^2 * xd <= xn * q^2  (p, q >= 0)
  auto below = [&](const mpz_class& p, const mpz_class& q) { return p * p * xd <= xn * q * q; };

  mpz_class lp = 0, lq = 1;  // lower end, always <= sqrt(x)
  mpz_class hp = 1, hq = 0;  // upper end, always > sqrt(x)
  for (;;) {
    const mpz_class mp = lp + hp, mq = lq + hq;
    if (mq > bound) break;
    if (below(mp, mq)) {
      if (mp * mp * xd == xn * mq * mq) return Rational(mp, mq);
      // Largest k with (l + k h) still below and within the denominator bound.
      mpz_class k = 1;
      auto ok = [&](const mpz_class& kk) {
        const mpz_class q = lq + kk * hq;
        return q <= bound && below(lp + kk * hp, q);
      };
      mpz_class step = 1;
      while (ok(k + step)) {
        k += step;
        step *= 2;
      }
      while (step > 1) {
        step /= 2;
        if (ok(k + step)) k += step;
      }
      lp += k * hp;
      lq += k * hq;
    } else {
      mpz_class k = 1;
      auto ok = [&](const mpz_class& kk) {
        const mpz_class q = hq + kk * lq;
        return q <= bound && !below(hp + kk * lp, q);
      };
      mpz_class step = 1;
      while (ok(k + step)) {
        k += step;
        step *= 2;
      }
      while (step > 1) {
        step /= 2;
        if (ok(k + step)) k += step;
      }
      hp += k * lp;
      hq += k * lq;
    }
  }
  return Rational(lp, lq);
}

}  // namespace l1renorm
