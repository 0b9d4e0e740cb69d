#pragma once

// The strictly convex renorming of L1[0,1]:
//
//   |||f|||^2 = sum_{k>=0} 4^-k sum_{j=1}^{2^k} ||f||_{k,j}^2,   ||f||_{k,j} = int_{I^k_j} |f|.
//
// For a level-L step function every level k >= L is a uniform subdivision of
// the level-L cells, so the tail is geometric and the whole series is an
// exact rational. Everything here works on squared norms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dyadic.hpp"
#include "rational.hpp"

namespace l1renorm {

/// ||f||_{k,j}, the L1 mass of f on I^k_j.
inline Rational seminorm(const DyadicStep& f, const DyadicIndex& idx) {
  return integral_over(abs(f), idx);
}

namespace detail {

/// sum_j ||f||_{k,j}^2 for k <= level(f), read off the pyramid of |f|.
inline std::vector<Rational> level_mass_squares(const DyadicStep& f) {
  const auto pyr = integral_pyramid(abs(f));
  std::vector<Rational> out(pyr.size());
  for (std::size_t k = 0; k < pyr.size(); ++k)
    for (const auto& m : pyr[k])
      if (!m.is_zero()) out[k] += m * m;
  return out;
}

inline Rational sum_of_squares(const DyadicStep& f) {
  Rational s;
  for (const auto& v : f.values())
    if (!v.is_zero()) s += v * v;
  return s;
}

}  // namespace detail

/// sum_{k>=T} 4^-k sum_j ||f||_{k,j}^2 in closed form, for T >= level(f).
///
/// Each level-L cell with value v splits into 2^(k-L) cells of mass |v| 2^-k,
/// so level k contributes 2^(-L-k) sum v^2 and the weighted tail is
/// (8/7) 2^-L 8^-T sum v^2.
inline Rational tail_formula(const DyadicStep& f, int T) {
  if (T < f.level())
    throw precondition_error("tail_formula needs T >= level(f) (T=" + std::to_string(T) +
                             ", level=" + std::to_string(f.level()) + ")");
  return Rational(8, 7) * pow2(-f.level() - 3L * T) * detail::sum_of_squares(f);
}

/// sum_{k<T} 4^-k sum_j ||f||_{k,j}^2 for any T >= 0.
inline Rational partial_below(const DyadicStep& f, int T) {
  if (T < 0) throw precondition_error("partial_below needs T >= 0");
  const auto per_level = detail::level_mass_squares(f);
  const int L = f.level();
  Rational sum;
  for (int k = 0; k < T && k <= L; ++k) sum += pow2(-2L * k) * per_level[static_cast<std::size_t>(k)];
  if (T > L + 1) {
    const Rational s2 = detail::sum_of_squares(f);
    for (int k = L + 1; k < T; ++k) sum += pow2(-2L * k) * pow2(-L - k) * s2;
  }
  return sum;
}

/// |||f|||^2, exact.
inline Rational tnorm_sq(const DyadicStep& f) {
  const auto per_level = detail::level_mass_squares(f);
  Rational sum;
  for (int k = 0; k < f.level(); ++k) sum += pow2(-2L * k) * per_level[static_cast<std::size_t>(k)];
  return sum + tail_formula(f, f.level());
}

struct NormSqReport {
  Rational tnorm_sq;
  Rational l1;
  Rational linf;
  std::string tnorm_float;
  bool equiv_ok = false;
};

/// Equivalence with the L1 norm, checked on squares:
/// l1^2 <= |||f|||^2 <= (4/3) l1^2 <= 2 l1^2.
struct EquivalenceReport {
  Rational l1_sq;
  Rational tnorm_sq;
  Rational upper_sqrt2_sq;  ///< 2 l1^2
  Rational upper_sharp_sq;  ///< (4/3) l1^2
  bool lower_ok = false;
  bool upper_ok = false;
  bool sharp_ok = false;

  bool ok() const { return lower_ok && upper_ok && sharp_ok; }
};

inline EquivalenceReport check_equivalence(const DyadicStep& f) {
  EquivalenceReport r;
  r.l1_sq = square(l1_norm(f));
  r.tnorm_sq = tnorm_sq(f);
  r.upper_sqrt2_sq = 2 * r.l1_sq;
  r.upper_sharp_sq = Rational(4, 3) * r.l1_sq;
  r.lower_ok = r.l1_sq <= r.tnorm_sq;
  r.upper_ok = r.tnorm_sq <= r.upper_sqrt2_sq;
  r.sharp_ok = r.tnorm_sq <= r.upper_sharp_sq;
  return r;
}

inline NormSqReport norm_report(const DyadicStep& f, int float_digits = 12) {
  NormSqReport r;
  const auto n = norms(f);
  r.tnorm_sq = tnorm_sq(f);
  r.l1 = n.l1;
  r.linf = n.linf;
  r.tnorm_float = sqrt_decimal(r.tnorm_sq, float_digits);
  const auto eq = check_equivalence(f);
  r.equiv_ok = eq.ok();
  return r;
}

/// Outcome of the equality analysis of the triangle inequality.
struct EqualityCase {
  enum class Tag { Strict, Degenerate };
  Tag tag = Tag::Strict;
  /// f = ratio * g when Degenerate. Zero when f = 0.
  Rational ratio;
  /// Set whenever f or g is the zero function.
  bool zero_operand = false;

  bool degenerate() const { return tag == Tag::Degenerate; }
};

/// Decides |||f+g||| = |||f||| + |||g||| exactly.
///
/// The norm is strictly convex, so equality holds exactly when f is a
/// nonnegative multiple of g. Cellwise at the common level that is: one
/// ratio t >= 0 with f_i = t g_i everywhere. Convention for a zero operand:
/// g = 0 is Degenerate only together with f = 0; f = 0, g != 0 is Degenerate
/// with ratio 0.
inline EqualityCase triangle_equality_case(const DyadicStep& f, const DyadicStep& g) {
  EqualityCase out;
  const bool f_zero = f.is_zero(), g_zero = g.is_zero();
  out.zero_operand = f_zero || g_zero;
  if (g_zero) {
    out.tag = f_zero ? EqualityCase::Tag::Degenerate : EqualityCase::Tag::Strict;
    return out;
  }
  const int m = std::max(f.level(), g.level());
  std::optional<Rational> t;
  for (std::size_t i = 0; i < cells_at(m) && !t; ++i)
    if (!g.at_level(m, i).is_zero()) t = f.at_level(m, i) / g.at_level(m, i);
  if (t->sign() < 0) return out;
  for (std::size_t i = 0; i < cells_at(m); ++i)
    if (f.at_level(m, i) != *t * g.at_level(m, i)) return out;
  out.tag = EqualityCase::Tag::Degenerate;
  out.ratio = *t;
  return out;
}

namespace detail {

/// Solves A x = b over the rationals by Gauss-Jordan elimination.
/// Returns nullopt when A is singular.
inline std::optional<std::vector<Rational>> solve_linear(std::vector<std::vector<Rational>> a,
                                                         std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    const Rational inv = Rational(1) / a[col][col];
    for (std::size_t c = col; c < n; ++c) a[col][c] *= inv;
    b[col] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      const Rational factor = a[r][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  return b;
}

/// Gram matrix of |||.|||^2 restricted to nonnegative level-L cell values:
/// |||sum a_i s_i 1_{I^L_i}|||^2 = a^T Q a for any signs s_i.
inline std::vector<std::vector<Rational>> tnorm_gram(int L) {
  const std::size_t n = cells_at(L);
  std::vector<std::vector<Rational>> q(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      Rational s;
      for (int k = 0; k < L; ++k)
        if ((i >> (L - k)) == (i2 >> (L - k))) s += pow2(-2L * k - 2L * L);
      if (i == i2) s += Rational(8, 7) * pow2(-4L * L);
      q[i][i2] = s;
    }
  return q;
}

/// (Q a) for the same form, in floating point, via cell sums: O(L 2^L).
inline std::vector<double> tnorm_gram_apply(int L, const std::vector<double>& a) {
  const std::size_t n = a.size();
  std::vector<double> out(n, 0.0);
  std::vector<double> sums(a);
  const double tail = 8.0 / 7.0 * std::ldexp(1.0, -4 * L);
  for (std::size_t i = 0; i < n; ++i) out[i] = tail * a[i];
  for (int k = L - 1; k >= 0; --k) {
    std::vector<double> coarse(cells_at(k));
    for (std::size_t j = 0; j < coarse.size(); ++j) coarse[j] = sums[2 * j] + sums[2 * j + 1];
    const double w = std::ldexp(1.0, -2 * k - 2 * L);
    for (std::size_t i = 0; i < n; ++i) out[i] += w * coarse[i >> (L - k)];
    sums = std::move(coarse);
  }
  return out;
}

}  // namespace detail

struct DualEstimate {
  /// Certified lower bound on sup{<f,h>^2 : |||f||| <= 1, level(f) <= L}:
  /// pairing_sq / maximizer_tnorm_sq for the maximizer below.
  Rational value_sq;
  Rational pairing_sq;
  Rational maximizer_tnorm_sq;
  DyadicStep maximizer;
  /// Upper bound from dropping the sign constraints (only for 2^L <= 64).
  std::optional<Rational> upper_sq;
  /// KKT conditions verified exactly: value_sq is the supremum over level L.
  bool certified_optimal = false;
  /// The projected ascent met the relative tolerance before its iteration cap.
  bool converged = false;
  int iterations = 0;
};

/// Lower-bounds the dual norm of h over level-L step functions.
///
/// Signs are aligned with the cell integrals of h, which leaves maximising
/// c.a / sqrt(a^T Q a) over a >= 0. That ratio is maximised by the minimiser
/// of a^T Q a - 2 c.a on the orthant; projected gradient steps locate its
/// support, after which an exact active-set solve on that support is tried.
/// The best exact candidate is returned.
inline DualEstimate dual_norm_estimate(const DyadicStep& h, int L, const Rational& tol, int max_iter = 200000) {
  check_level(L);
  if (tol.sign() <= 0) throw precondition_error("tolerance must be positive");
  const DyadicStep proj = dyadic_project(h, L);
  const std::size_t n = cells_at(L);
  std::vector<Rational> c(n);
  std::vector<int> sgn(n);
  const Rational w = pow2(-L);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = abs(proj[i]) * w;
    sgn[i] = proj[i].sign();
  }

  DualEstimate est;
  est.maximizer = DyadicStep::zero(L);
  if (std::all_of(c.begin(), c.end(), [](const Rational& v) { return v.is_zero(); })) {
    est.certified_optimal = true;
    est.converged = true;
    est.upper_sq = Rational(0);
    return est;
  }

  auto to_step = [&](const std::vector<Rational>& a) {
    std::vector<Rational> v(n);
    for (std::size_t i = 0; i < n; ++i)
      if (sgn[i] != 0 && !a[i].is_zero()) v[i] = sgn[i] > 0 ? a[i] : -a[i];
    return DyadicStep(L, std::move(v));
  };
  auto consider = [&](const std::vector<Rational>& a) {
    const DyadicStep f = to_step(a);
    const Rational t = tnorm_sq(f);
    if (t.is_zero()) return;
    const Rational p2 = square(pairing(f, h));
    const Rational val = p2 / t;
    if (val > est.value_sq) {
      est.value_sq = val;
      est.pairing_sq = p2;
      est.maximizer_tnorm_sq = t;
      est.maximizer = f;
    }
  };

  // Projected gradient on a^T Q a - 2 c.a, a >= 0.
  std::vector<double> cd(n), a(n);
  for (std::size_t i = 0; i < n; ++i) cd[i] = c[i].to_double();
  const auto row_sums = detail::tnorm_gram_apply(L, std::vector<double>(n, 1.0));
  const double lmax = *std::max_element(row_sums.begin(), row_sums.end());
  const double step = 0.5 / lmax;
  for (std::size_t i = 0; i < n; ++i) a[i] = cd[i] > 0 ? cd[i] / lmax : 0.0;
  auto ratio = [&](const std::vector<double>& x) {
    const auto qx = detail::tnorm_gram_apply(L, x);
    double lin = 0, quad = 0;
    for (std::size_t i = 0; i < n; ++i) {
      lin += cd[i] * x[i];
      quad += x[i] * qx[i];
    }
    return quad > 0 ? lin * lin / quad : 0.0;
  };
  const double tol_d = tol.to_double();
  double prev = ratio(a);
  int it = 0;
  for (; it < max_iter; ++it) {
    const auto qa = detail::tnorm_gram_apply(L, a);
    for (std::size_t i = 0; i < n; ++i) a[i] = std::max(0.0, a[i] - step * 2.0 * (qa[i] - cd[i]));
    if ((it + 1) % 32 == 0) {
      const double cur = ratio(a);
      if (cur - prev <= tol_d * std::max(cur, 1e-300)) {
        est.converged = true;
        ++it;
        break;
      }
      prev = cur;
    }
  }
  est.iterations = it;

  std::vector<Rational> a_exact(n);
  for (std::size_t i = 0; i < n; ++i) a_exact[i] = Rational(mpq_class(a[i]));
  consider(a_exact);

  // Exact active-set polishing on small levels.
  if (n <= 64) {
    const auto q = detail::tnorm_gram(L);
    double amax = *std::max_element(a.begin(), a.end());
    std::vector<bool> active(n);
    for (std::size_t i = 0; i < n; ++i) active[i] = cd[i] > 0 && a[i] > 1e-9 * amax;
    for (std::size_t round = 0; round < 4 * n; ++round) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < n; ++i)
        if (active[i]) idx.push_back(i);
      if (idx.empty()) break;
      std::vector<std::vector<Rational>> qs(idx.size(), std::vector<Rational>(idx.size()));
      std::vector<Rational> cs(idx.size());
      for (std::size_t r = 0; r < idx.size(); ++r) {
        cs[r] = c[idx[r]];
        for (std::size_t s = 0; s < idx.size(); ++s) qs[r][s] = q[idx[r]][idx[s]];
      }
      const auto x = detail::solve_linear(std::move(qs), std::move(cs));
      if (!x) break;
      bool dropped = false;
      for (std::size_t r = 0; r < idx.size(); ++r)
        if (x->at(r).sign() <= 0) {
          active[idx[r]] = false;
          dropped = true;
        }
      if (dropped) continue;
      std::vector<Rational> cand(n);
      for (std::size_t r = 0; r < idx.size(); ++r) cand[idx[r]] = x->at(r);
      consider(cand);
      // KKT off the support: (Q a)_i >= c_i.
      std::optional<std::size_t> worst;
      Rational worst_gap;
      for (std::size_t i = 0; i < n; ++i) {
        if (active[i]) continue;
        Rational qa;
        for (std::size_t r = 0; r < idx.size(); ++r) qa += q[i][idx[r]] * cand[idx[r]];
        const Rational gap = qa - c[i];
        if (gap.sign() < 0 && (!worst || gap < worst_gap)) {
          worst = i;
          worst_gap = gap;
        }
      }
      if (!worst) {
        est.certified_optimal = est.value_sq == [&] {
          Rational v;
          for (std::size_t r = 0; r < idx.size(); ++r) v += c[idx[r]] * cand[idx[r]];
          return v;
        }();
        break;
      }
      active[*worst] = true;
    }
    if (auto full = detail::solve_linear(q, c)) {
      Rational up;
      for (std::size_t i = 0; i < n; ++i) up += c[i] * full->at(i);
      est.upper_sq = up;
    }
  }
  return est;
}

}  // namespace l1renorm
