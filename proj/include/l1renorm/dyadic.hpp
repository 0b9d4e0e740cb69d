#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace l1renorm {

/// Cap on dense storage: a level-K function holds 2^K rationals.
inline constexpr int kMaxLevel = 20;

inline std::size_t cells_at(int level) { return std::size_t{1} << level; }

inline void check_level(int level) {
  if (level < 0) throw precondition_error("negative dyadic level " + std::to_string(level));
  if (level > kMaxLevel) throw level_overflow(level, kMaxLevel);
}

/// The dyadic interval I^k_j = [(j-1)/2^k, j/2^k), 1 <= j <= 2^k.
struct DyadicIndex {
  int k = 0;
  long j = 1;

  /// Throws precondition_error unless 0 <= k and 1 <= j <= 2^k. Levels above
  /// the storage cap are fine here; an interval is just a pair of numbers.
  void validate() const {
    if (k < 0 || k > 62) throw precondition_error("dyadic level out of range: " + std::to_string(k));
    if (j < 1 || j > (1L << k))
      throw precondition_error("dyadic position " + std::to_string(j) + " outside 1.." +
                               std::to_string(1L << k));
  }

  /// True when the two half-open intervals intersect (one then contains the other).
  friend bool overlaps(const DyadicIndex& a, const DyadicIndex& b) {
    const auto& coarse = a.k <= b.k ? a : b;
    const auto& fine = a.k <= b.k ? b : a;
    return ((fine.j - 1) >> (fine.k - coarse.k)) == coarse.j - 1;
  }

  friend bool operator==(const DyadicIndex&, const DyadicIndex&) = default;
};

/// A function on [0,1) constant on each of the 2^level dyadic cells of one level.
///
/// values()[i] is the constant on I^level_{i+1}. Immutable once built; all
/// operations below are free functions returning new values.
class DyadicStep {
 public:
  DyadicStep() : level_(0), values_(1) {}

  DyadicStep(int level, std::vector<Rational> values) : level_(level), values_(std::move(values)) {
    check_level(level_);
    if (values_.size() != cells_at(level_))
      throw precondition_error("level " + std::to_string(level_) + " needs " +
                               std::to_string(cells_at(level_)) + " values, got " +
                               std::to_string(values_.size()));
  }

  static DyadicStep zero(int level = 0) {
    check_level(level);
    return DyadicStep(level, std::vector<Rational>(cells_at(level)));
  }

  static DyadicStep constant(const Rational& c, int level = 0) {
    check_level(level);
    return DyadicStep(level, std::vector<Rational>(cells_at(level), c));
  }

  /// scale * 1_{I^k_j}, stored at level k.
  static DyadicStep indicator(const DyadicIndex& idx, const Rational& scale = Rational(1)) {
    idx.validate();
    auto f = zero(idx.k);
    f.values_[static_cast<std::size_t>(idx.j - 1)] = scale;
    return f;
  }

  int level() const noexcept { return level_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const Rational> values() const noexcept { return values_; }
  const Rational& operator[](std::size_t i) const { return values_[i]; }

  /// Value on cell i of the finer level m >= level().
  const Rational& at_level(int m, std::size_t i) const { return values_[i >> (m - level_)]; }

  bool is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](const Rational& v) { return v.is_zero(); });
  }

  /// Equality of the represented functions, decided at the common level.
  friend bool operator==(const DyadicStep& f, const DyadicStep& g) {
    const int m = std::max(f.level_, g.level_);
    for (std::size_t i = 0; i < cells_at(m); ++i)
      if (f.at_level(m, i) != g.at_level(m, i)) return false;
    return true;
  }

 private:
  int level_;
  std::vector<Rational> values_;
};

/// The same function stored at level `target` >= level(f).
inline DyadicStep refine(const DyadicStep& f, int target) {
  check_level(target);
  if (target < f.level())
    throw precondition_error("cannot refine level " + std::to_string(f.level()) + " down to " +
                             std::to_string(target));
  if (target == f.level()) return f;
  std::vector<Rational> v(cells_at(target));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.at_level(target, i);
  return DyadicStep(target, std::move(v));
}

/// a f + b g, pointwise, at the common level.
inline DyadicStep lin_comb(const Rational& a, const DyadicStep& f, const Rational& b, const DyadicStep& g) {
  const int m = std::max(f.level(), g.level());
  std::vector<Rational> v(cells_at(m));
  const bool skip_f = a.is_zero(), skip_g = b.is_zero();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!skip_f && !f.at_level(m, i).is_zero()) v[i] = a * f.at_level(m, i);
    if (!skip_g && !g.at_level(m, i).is_zero()) v[i] += b * g.at_level(m, i);
  }
  return DyadicStep(m, std::move(v));
}

inline DyadicStep scale(const Rational& a, const DyadicStep& f) {
  std::vector<Rational> v(f.size());
  if (!a.is_zero())
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!f[i].is_zero()) v[i] = a * f[i];
  return DyadicStep(f.level(), std::move(v));
}

inline DyadicStep operator+(const DyadicStep& f, const DyadicStep& g) { return lin_comb(1, f, 1, g); }
inline DyadicStep operator-(const DyadicStep& f, const DyadicStep& g) { return lin_comb(1, f, -1, g); }
inline DyadicStep operator*(const Rational& a, const DyadicStep& f) { return scale(a, f); }

struct SignParts {
  DyadicStep abs;  ///< |f|
  DyadicStep pos;  ///< f+ = max(f, 0)
  DyadicStep neg;  ///< f- = max(-f, 0)
};

inline SignParts decompose(const DyadicStep& f) {
  std::vector<Rational> a(f.size()), p(f.size()), n(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Rational& v = f[i];
    if (v.sign() > 0) {
      a[i] = v;
      p[i] = v;
    } else if (v.sign() < 0) {
      a[i] = -v;
      n[i] = -v;
    }
  }
  return {DyadicStep(f.level(), std::move(a)), DyadicStep(f.level(), std::move(p)),
          DyadicStep(f.level(), std::move(n))};
}

inline DyadicStep abs(const DyadicStep& f) { return decompose(f).abs; }

/// Exact integral of f over I^k_j; k may lie above or below level(f).
inline Rational integral_over(const DyadicStep& f, const DyadicIndex& idx) {
  idx.validate();
  const int lv = f.level();
  if (idx.k >= lv) {
    const auto cell = static_cast<std::size_t>((idx.j - 1) >> (idx.k - lv));
    return f[cell] * pow2(-idx.k);
  }
  const std::size_t width = cells_at(lv - idx.k);
  const std::size_t first = static_cast<std::size_t>(idx.j - 1) * width;
  Rational sum;
  for (std::size_t i = first; i < first + width; ++i) sum += f[i];
  return sum * pow2(-lv);
}

/// Integrals of f over every cell of level k <= level(f), left to right.
inline std::vector<Rational> cell_integrals(const DyadicStep& f, int k) {
  if (k < 0 || k > f.level()) throw precondition_error("cell_integrals needs 0 <= k <= level(f)");
  const std::size_t width = cells_at(f.level() - k);
  std::vector<Rational> out(cells_at(k));
  for (std::size_t c = 0; c < out.size(); ++c) {
    Rational s;
    for (std::size_t i = c * width; i < (c + 1) * width; ++i) s += f[i];
    out[c] = s * pow2(-f.level());
  }
  return out;
}

/// Cell integrals for every level 0..level(f); pyramid[k][j-1] = integral over I^k_j.
/// Built bottom-up in O(2^level) additions.
inline std::vector<std::vector<Rational>> integral_pyramid(const DyadicStep& f) {
  const int lv = f.level();
  std::vector<std::vector<Rational>> pyr(static_cast<std::size_t>(lv) + 1);
  const Rational w = pow2(-lv);
  auto& top = pyr[static_cast<std::size_t>(lv)];
  top.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!f[i].is_zero()) top[i] = f[i] * w;
  for (int k = lv - 1; k >= 0; --k) {
    const auto& finer = pyr[static_cast<std::size_t>(k) + 1];
    auto& cur = pyr[static_cast<std::size_t>(k)];
    cur.resize(cells_at(k));
    for (std::size_t j = 0; j < cur.size(); ++j) cur[j] = finer[2 * j] + finer[2 * j + 1];
  }
  return pyr;
}

struct Norms {
  Rational l1;
  Rational linf;
};

inline Norms norms(const DyadicStep& f) {
  Norms n;
  for (const auto& v : f.values()) {
    const Rational a = abs(v);
    n.l1 += a;
    if (a > n.linf) n.linf = a;
  }
  n.l1 *= pow2(-f.level());
  return n;
}

inline Rational l1_norm(const DyadicStep& f) { return norms(f).l1; }
inline Rational linf_norm(const DyadicStep& f) { return norms(f).linf; }

/// The duality pairing <f, h> = integral of f h over [0,1].
inline Rational pairing(const DyadicStep& f, const DyadicStep& h) {
  const int m = std::max(f.level(), h.level());
  Rational sum;
  for (std::size_t i = 0; i < cells_at(m); ++i) {
    const Rational& a = f.at_level(m, i);
    const Rational& b = h.at_level(m, i);
    if (!a.is_zero() && !b.is_zero()) sum += a * b;
  }
  return sum * pow2(-m);
}

/// Conditional expectation onto the level-K dyadic algebra (cell averages).
inline DyadicStep dyadic_project(const DyadicStep& f, int K) {
  check_level(K);
  if (K >= f.level()) return refine(f, K);
  auto avg = cell_integrals(f, K);
  const Rational s = pow2(K);
  for (auto& v : avg) v *= s;
  return DyadicStep(K, std::move(avg));
}

/// f(1 - t): cell values in reverse order.
inline DyadicStep reflect(const DyadicStep& f) {
  std::vector<Rational> v(f.values().rbegin(), f.values().rend());
  return DyadicStep(f.level(), std::move(v));
}

}  // namespace l1renorm
