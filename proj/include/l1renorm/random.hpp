#pragma once

// Seeded generators for randomized trials. Only the raw 64-bit output of
// std::mt19937_64 is used (its sequence is fixed by the standard), so a seed
// produces the same trials with every standard library.

#include <cstdint>
#include <random>
#include <vector>

#include "dyadic.hpp"

namespace l1renorm {

class TrialRng {
 public:
  explicit TrialRng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform integer in [lo, hi].
  long uniform(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(eng_() % span);
  }

  bool coin() { return (eng_() & 1U) != 0; }

  /// p/q with |p| <= max_num, 1 <= q <= max_den.
  Rational rational(long max_num, long max_den) {
    return Rational(uniform(-max_num, max_num), uniform(1, max_den));
  }

  /// Rational in [lo, hi] on the grid of denominator `den`.
  Rational rational_between(const Rational& lo, const Rational& hi, long den) {
    const Rational a = lo * Rational(den), b = hi * Rational(den);
    const mpz_class first = ceil_div(a), last = floor_div(b);
    const long steps = mpz_class(last - first).get_si();
    return Rational(mpz_class(first + uniform(0, steps)), mpz_class(den));
  }

  /// A random step function of level in [0, max_level] with values p/q,
  /// |p| <= max_num, q <= max_den. About one cell in four is zero.
  DyadicStep step(int max_level, long max_num, long max_den) {
    return step_at(static_cast<int>(uniform(0, max_level)), max_num, max_den);
  }

  DyadicStep step_at(int level, long max_num, long max_den) {
    std::vector<Rational> v(cells_at(level));
    for (auto& x : v)
      if (uniform(0, 3) != 0) x = rational(max_num, max_den);
    return DyadicStep(level, std::move(v));
  }

  std::uint64_t next() { return eng_(); }

 private:
  static mpz_class floor_div(const Rational& r) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
    return q;
  }
  static mpz_class ceil_div(const Rational& r) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
    return q;
  }

  std::mt19937_64 eng_;
};

}  // namespace l1renorm
