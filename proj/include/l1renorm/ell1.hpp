#pragma once

// Octahedrality of (L1[0,1], ||.||_1) made constructive, and the
// asymptotically isometric copies of l1 it produces.
//
// Everything in this header uses the canonical L1 norm. Octahedrality of the
// renormed space is not claimed anywhere and no entry point runs these
// constructions under |||.|||.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dyadic.hpp"
#include "rational.hpp"

namespace l1renorm {

/// Unit-mass spike 2^K 1_{I^K_1}, K = L + 1 + ceil(log2(1/eps)), L the
/// largest level in E. For x in span(E) the spike sits inside one level-L
/// cell, so int_{I^K_1} |x| <= 2^(L-K) ||x||_1 and
///   ||x + a y||_1 >= ||x||_1 + |a| - 2 int_{I^K_1} |x| >= (1 - eps)(||x||_1 + |a|).
inline DyadicStep octahedral_direction(const std::vector<DyadicStep>& E, const Rational& eps) {
  if (eps.sign() <= 0 || eps >= Rational(1)) throw precondition_error("octahedral eps must lie in (0,1)");
  if (E.empty()) return DyadicStep::constant(1);
  int L = 0;
  for (const auto& x : E) L = std::max(L, x.level());
  const long K = L + 1 + ceil_log2(Rational(1) / eps);
  if (K > kMaxLevel) throw level_overflow(static_cast<int>(K), kMaxLevel);
  return DyadicStep::indicator({static_cast<int>(K), 1}, pow2(K));
}

/// Exact minimum over all real a of
///   F(a) = ||x + a y||_1 - (1 - eps)(||x||_1 + |a|).
/// F is piecewise linear with kinks at a = 0 and a = -x_i/y_i, so checking
/// those points plus the slope at infinity decides F >= 0 everywhere.
struct OctahedralCheck {
  Rational min_margin;  ///< min of F over the kinks
  Rational argmin;      ///< a kink attaining it
  Rational end_slope;   ///< ||y||_1 - (1 - eps), the slope of F as |a| grows
  std::size_t kinks = 0;
  bool ok = false;
};

inline OctahedralCheck octahedral_check(const DyadicStep& x, const DyadicStep& y, const Rational& eps) {
  const int m = std::max(x.level(), y.level());
  const std::size_t n = cells_at(m);
  const Rational w = pow2(-m);
  std::vector<Rational> kinks{Rational(0)};
  for (std::size_t i = 0; i < n; ++i)
    if (!y.at_level(m, i).is_zero()) kinks.push_back(-(x.at_level(m, i) / y.at_level(m, i)));
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());

  const Rational keep = 1 - eps;
  const Rational x_l1 = l1_norm(x);
  OctahedralCheck out;
  out.kinks = kinks.size();
  bool first = true;
  for (const auto& a : kinks) {
    Rational s;
    for (std::size_t i = 0; i < n; ++i) {
      const Rational& yi = y.at_level(m, i);
      const Rational& xi = x.at_level(m, i);
      if (yi.is_zero()) s += abs(xi);
      else s += abs(xi + a * yi);
    }
    const Rational margin = s * w - keep * (x_l1 + abs(a));
    if (first || margin < out.min_margin) {
      out.min_margin = margin;
      out.argmin = a;
      first = false;
    }
  }
  out.end_slope = l1_norm(y) - keep;
  out.ok = out.min_margin.sign() >= 0 && out.end_slope.sign() >= 0;
  return out;
}

struct SpikeFamily {
  std::vector<DyadicStep> members;
  std::vector<Rational> deltas;
  /// eps_i used to place member i (greedy construction only; eps_1 places nothing).
  std::vector<Rational> eps;
  /// Disjoint supports, one per member (disjoint construction only).
  std::vector<DyadicIndex> supports;
};

enum class EpsSchedule {
  /// Finite horizon: going backwards from i = m, the largest eps_i = 2^-p with
  /// prod_{t=i}^{m} (1 - eps_t) > 1 - delta_i.
  Tight,
  /// eps_i = min_{k<=i} delta_k 2^(-i-1), good for every horizon at once.
  Geometric,
};

namespace detail {

inline void check_deltas(const std::vector<Rational>& deltas, std::size_t m) {
  if (m == 0) throw precondition_error("family size must be positive");
  if (deltas.size() < m) throw precondition_error("need at least m deltas");
  for (std::size_t k = 0; k < m; ++k) {
    if (deltas[k].sign() <= 0 || deltas[k] >= Rational(1))
      throw precondition_error("delta_" + std::to_string(k + 1) + " must lie in (0,1)");
    if (k > 0 && deltas[k] > deltas[k - 1])
      throw precondition_error("deltas must be nonincreasing (delta_" + std::to_string(k + 1) + ")");
  }
}

}  // namespace detail

/// The eps_1..eps_m schedule, verified: prod_{i=k}^{m} (1 - eps_i) > 1 - delta_k for all k.
inline std::vector<Rational> eps_schedule(const std::vector<Rational>& deltas, std::size_t m,
                                          EpsSchedule kind = EpsSchedule::Tight) {
  detail::check_deltas(deltas, m);
  std::vector<Rational> eps(m);
  if (kind == EpsSchedule::Geometric) {
    Rational dmin = deltas[0];
    for (std::size_t i = 0; i < m; ++i) {
      dmin = std::min(dmin, deltas[i]);
      eps[i] = dmin * pow2(-static_cast<long>(i) - 2);  // 0-based i
    }
  } else {
    Rational suffix(1);
    for (std::size_t i = m; i-- > 0;) {
      const Rational floor_needed = 1 - deltas[i];
      if (!(suffix > floor_needed))
        throw schedule_infeasible(i + 1, "no eps_" + std::to_string(i + 1) + " keeps the product above 1 - delta");
      long p = 1;
      while (!((1 - pow2(-p)) * suffix > floor_needed)) ++p;
      eps[i] = pow2(-p);
      suffix *= 1 - eps[i];
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    Rational prod(1);
    for (std::size_t i = k; i < m; ++i) prod *= 1 - eps[i];
    if (!(prod > 1 - deltas[k]))
      throw schedule_infeasible(k + 1, "product condition fails at k = " + std::to_string(k + 1) + ": " +
                                           prod.str() + " <= 1 - " + deltas[k].str());
  }
  return eps;
}

/// x_1 = 1, x_k = octahedral_direction({x_1..x_{k-1}}, eps_k).
inline SpikeFamily greedy_asymptotic_ell1(const std::vector<Rational>& deltas, std::size_t m,
                                          EpsSchedule kind = EpsSchedule::Tight) {
  SpikeFamily fam;
  fam.eps = eps_schedule(deltas, m, kind);
  fam.deltas.assign(deltas.begin(), deltas.begin() + static_cast<std::ptrdiff_t>(m));
  fam.members.push_back(DyadicStep::constant(1));
  for (std::size_t k = 1; k < m; ++k) fam.members.push_back(octahedral_direction(fam.members, fam.eps[k]));
  return fam;
}

/// x_k = (1 - delta_k) 2^K 1_{I^K_k}: pairwise disjoint, so
/// ||sum a_k x_k||_1 = sum (1 - delta_k) |a_k| exactly.
inline SpikeFamily disjoint_spike_family(const std::vector<Rational>& deltas, std::size_t m, int K) {
  detail::check_deltas(deltas, m);
  check_level(K);
  if (cells_at(K) < m)
    throw capacity_error("level " + std::to_string(K) + " has " + std::to_string(cells_at(K)) +
                         " cells, fewer than " + std::to_string(m) + " members");
  SpikeFamily fam;
  fam.deltas.assign(deltas.begin(), deltas.begin() + static_cast<std::ptrdiff_t>(m));
  for (std::size_t k = 0; k < m; ++k) {
    const DyadicIndex idx{K, static_cast<long>(k) + 1};
    fam.supports.push_back(idx);
    fam.members.push_back(DyadicStep::indicator(idx, (1 - deltas[k]) * pow2(K)));
  }
  return fam;
}

/// sum (1 - delta_k)|a_k| <= ||sum a_k x_k||_1 <= sum |a_k|, evaluated exactly.
struct Ell1Check {
  Rational norm;
  Rational lower;
  Rational upper;
  bool lower_ok = false;
  bool upper_ok = false;
  bool lower_tight = false;  ///< norm == lower
};

inline Ell1Check ell1_bounds(const SpikeFamily& fam, const std::vector<Rational>& alpha) {
  if (alpha.size() > fam.members.size()) throw precondition_error("more coefficients than family members");
  int m = 0;
  for (std::size_t k = 0; k < alpha.size(); ++k) m = std::max(m, fam.members[k].level());
  std::vector<Rational> acc(cells_at(m));
  Ell1Check c;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    c.lower += (1 - fam.deltas[k]) * abs(alpha[k]);
    c.upper += abs(alpha[k]);
    if (alpha[k].is_zero()) continue;
    const auto& x = fam.members[k];
    for (std::size_t i = 0; i < acc.size(); ++i) {
      const Rational& v = x.at_level(m, i);
      if (!v.is_zero()) acc[i] += alpha[k] * v;
    }
  }
  for (const auto& v : acc) c.norm += abs(v);
  c.norm *= pow2(-m);
  c.lower_ok = c.lower <= c.norm;
  c.upper_ok = c.norm <= c.upper;
  c.lower_tight = c.lower == c.norm;
  return c;
}

/// x* and y*: sign patterns on the supports of a disjoint family.
/// x* = +1 on every support; y* = -1 on odd members, +1 on even members.
struct DualPair {
  DyadicStep xstar;
  DyadicStep ystar;
  /// pairings[k] = {<x_{k+1}, x*>, <x_{k+1}, y*>}
  std::vector<std::pair<Rational, Rational>> pairings;
  Rational linf_x;
  Rational linf_y;
  Rational linf_mid;
  Rational linf_diff;
  bool pattern_ok = false;

  /// The segment [x*, y*] lies on the unit sphere of L_inf and has length 2.
  bool segment_ok() const {
    return linf_x == Rational(1) && linf_y == Rational(1) && linf_mid == Rational(1) && linf_diff == Rational(2);
  }
  bool ok() const { return segment_ok() && pattern_ok; }
};

inline DualPair dual_segment(const SpikeFamily& fam) {
  if (fam.supports.size() != fam.members.size() || fam.supports.empty())
    throw precondition_error("dual_segment needs a family with one disjoint support per member");
  int L = 0;
  for (const auto& s : fam.supports) L = std::max(L, s.k);
  check_level(L);
  std::vector<Rational> xs(cells_at(L)), ys(cells_at(L));
  for (std::size_t k = 0; k < fam.supports.size(); ++k) {
    const auto& s = fam.supports[k];
    const std::size_t width = cells_at(L - s.k);
    const std::size_t first = static_cast<std::size_t>(s.j - 1) * width;
    const Rational ysign = (k % 2 == 0) ? Rational(-1) : Rational(1);  // k even <=> member 2i-1
    for (std::size_t i = first; i < first + width; ++i) {
      xs[i] = 1;
      ys[i] = ysign;
    }
  }
  DualPair dp;
  dp.xstar = DyadicStep(L, std::move(xs));
  dp.ystar = DyadicStep(L, std::move(ys));
  dp.linf_x = linf_norm(dp.xstar);
  dp.linf_y = linf_norm(dp.ystar);
  dp.linf_mid = linf_norm(lin_comb(Rational(1, 2), dp.xstar, Rational(1, 2), dp.ystar));
  dp.linf_diff = linf_norm(dp.xstar - dp.ystar);
  dp.pattern_ok = true;
  for (std::size_t k = 0; k < fam.members.size(); ++k) {
    const Rational px = pairing(fam.members[k], dp.xstar);
    const Rational py = pairing(fam.members[k], dp.ystar);
    const Rational keep = 1 - fam.deltas[k];
    dp.pattern_ok = dp.pattern_ok && px == keep && py == (k % 2 == 0 ? -keep : keep);
    dp.pairings.emplace_back(px, py);
  }
  return dp;
}

/// Finite shadows of two distinct norming elements of y*: odd members pair
/// to -(1 - delta), even members to +(1 - delta).
struct NonsmoothRow {
  std::size_t i = 0;  ///< pairs members 2i-1 and 2i
  Rational odd_pairing;
  Rational even_pairing;
  Rational gap;       ///< <x_{2i} - x_{2i-1}, y*>
  Rational expected;  ///< 2 - delta_{2i} - delta_{2i-1}
  bool ok = false;
};

inline std::vector<NonsmoothRow> nonsmooth_pairings(const SpikeFamily& fam, const DualPair& dp) {
  std::vector<NonsmoothRow> rows;
  for (std::size_t i = 1; 2 * i <= fam.members.size(); ++i) {
    const auto& odd = fam.members[2 * i - 2];
    const auto& even = fam.members[2 * i - 1];
    NonsmoothRow r;
    r.i = i;
    r.odd_pairing = pairing(odd, dp.ystar);
    r.even_pairing = pairing(even, dp.ystar);
    r.gap = pairing(even - odd, dp.ystar);
    r.expected = 2 - fam.deltas[2 * i - 1] - fam.deltas[2 * i - 2];
    r.ok = r.odd_pairing == -(1 - fam.deltas[2 * i - 2]) && r.even_pairing == 1 - fam.deltas[2 * i - 1] &&
           r.gap == r.expected;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace l1renorm
