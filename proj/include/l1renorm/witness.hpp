#pragma once

// Diameter-two witnesses for (L1[0,1], |||.|||).
//
// Given a center f in the unit ball and a weak neighbourhood
// V = {g : |<g - f, h_l>| < delta}, build g1, g2 in V with |||g1 - g2||| > 2 - eps.
// Each level-K cell's positive and negative mass of f is pushed onto two of
// its four level-(K+2) children, once for f1 and once for f2. The two copies
// share every integral over cells of level <= K, so they are invisible to the
// functionals, yet their supports are disjoint.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "dyadic.hpp"
#include "rational.hpp"
#include "renorm.hpp"

namespace l1renorm {

/// The weakly open set V around `center`: |<g - center, h_l>| < delta for all l.
struct WeakNbhd {
  DyadicStep center;
  std::vector<DyadicStep> functionals;
  Rational delta;

  /// Throws precondition_error if delta <= 0 or some ||h_l||_inf > 1.
  void validate() const {
    if (delta.sign() <= 0) throw precondition_error("neighbourhood delta must be positive");
    for (std::size_t l = 0; l < functionals.size(); ++l)
      if (linf_norm(functionals[l]) > Rational(1))
        throw precondition_error("functional h_" + std::to_string(l + 1) + " has sup norm " +
                                 linf_norm(functionals[l]).str() + " > 1");
  }

  bool contains(const DyadicStep& g) const {
    const DyadicStep d = g - center;
    return std::all_of(functionals.begin(), functionals.end(),
                       [&](const DyadicStep& h) { return abs(pairing(d, h)) < delta; });
  }
};

/// One exactly evaluated inequality or identity.
struct Check {
  std::string name;
  Rational lhs;
  Rational rhs;
  bool ok = false;
};

inline bool all_ok(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

struct SplitPair {
  int K = 0;
  std::vector<Rational> b;  ///< b_j = integral of f+ over I^K_j
  std::vector<Rational> c;  ///< c_j = integral of f- over I^K_j
  DyadicStep f1;
  DyadicStep f2;
};

/// Largest gamma = 2^-p (p >= 1) with (5 ||f||_inf + 1) gamma < delta and
/// 2 (1 - gamma)^(3/2) > 2 - eps; the latter is tested as
/// 4 (1 - gamma)^3 > (2 - eps)^2 and is vacuous for eps >= 2.
inline Rational choose_gamma(const Rational& f_inf, const Rational& delta, const Rational& eps) {
  if (delta.sign() <= 0 || eps.sign() <= 0) throw precondition_error("choose_gamma needs delta > 0 and eps > 0");
  if (f_inf.sign() < 0) throw precondition_error("sup norm cannot be negative");
  const Rational weight = 5 * f_inf + 1;
  const bool second_vacuous = eps >= Rational(2);
  const Rational target = square(2 - eps);
  for (long p = 1;; ++p) {
    const Rational g = pow2(-p);
    if (!(weight * g < delta)) continue;
    if (!second_vacuous && !(4 * pow(1 - g, 3) > target)) continue;
    return g;
  }
}

/// Smallest K with 2^-K < gamma and K >= every functional level, so that
/// each h_l is itself constant on the level-K cells.
inline int choose_K(const Rational& gamma, const std::vector<int>& functional_levels) {
  if (gamma.sign() <= 0 || gamma >= Rational(1)) throw precondition_error("gamma must lie in (0,1)");
  int K = 0;
  while (!(pow2(-K) < gamma)) ++K;
  for (int lv : functional_levels) K = std::max(K, lv);
  if (K + 2 > kMaxLevel) throw level_overflow(K + 2, kMaxLevel);
  return K;
}

/// Builds f1, f2 at level K+2 from the positive and negative parts of f.
inline SplitPair split_pair(const DyadicStep& f, int K) {
  if (K < 0) throw precondition_error("split level must be nonnegative");
  check_level(K + 2);
  const auto parts = decompose(f);
  SplitPair sp;
  sp.K = K;
  if (K <= f.level()) {
    sp.b = cell_integrals(parts.pos, K);
    sp.c = cell_integrals(parts.neg, K);
  } else {
    sp.b = cell_integrals(refine(parts.pos, K), K);
    sp.c = cell_integrals(refine(parts.neg, K), K);
  }
  const std::size_t fine = cells_at(K + 2);
  std::vector<Rational> v1(fine), v2(fine);
  const Rational s = pow2(K + 2);
  for (std::size_t j = 0; j < sp.b.size(); ++j) {
    // I^K_{j+1} = I^{K+2}_{4j+1} u ... u I^{K+2}_{4j+4}; 0-based cells 4j..4j+3.
    if (!sp.b[j].is_zero()) {
      v1[4 * j] = s * sp.b[j];
      v2[4 * j + 2] = v1[4 * j];
    }
    if (!sp.c[j].is_zero()) {
      v1[4 * j + 1] = -(s * sp.c[j]);
      v2[4 * j + 3] = v1[4 * j + 1];
    }
  }
  sp.f1 = DyadicStep(K + 2, std::move(v1));
  sp.f2 = DyadicStep(K + 2, std::move(v2));
  return sp;
}

namespace detail {

/// Sum over every (k, j) with k <= K of |a_kj - b_kj|.
inline Rational pyramid_discrepancy(const std::vector<std::vector<Rational>>& a,
                                    const std::vector<std::vector<Rational>>& b, int K) {
  Rational d;
  for (int k = 0; k <= K; ++k)
    for (std::size_t j = 0; j < cells_at(k); ++j)
      d += abs(a[static_cast<std::size_t>(k)][j] - b[static_cast<std::size_t>(k)][j]);
  return d;
}

inline std::vector<std::vector<Rational>> pyramid_at(const DyadicStep& f, int level) {
  return integral_pyramid(f.level() >= level ? f : refine(f, level));
}

}  // namespace detail

/// The integral identities of the split, over every I^k_j with k <= K:
///   id5: int f1 = int f2 = int f
///   id6: int |f1| = int |f2| = int |f|
///   id7: int |f1 - f2| = 2 int |f|
/// Each reported as the total absolute discrepancy (lhs) against 0 (rhs).
/// Also linf4x: max ||f_i||_inf <= 4 ||f||_inf, and l1_preserved.
inline std::vector<Check> split_identities(const DyadicStep& f, const SplitPair& sp) {
  const int K = sp.K;
  const int top = std::max(K + 2, f.level());
  const auto pf = detail::pyramid_at(f, top);
  const auto pf1 = detail::pyramid_at(sp.f1, top);
  const auto pf2 = detail::pyramid_at(sp.f2, top);
  const auto paf = detail::pyramid_at(abs(f), top);
  const auto paf1 = detail::pyramid_at(abs(sp.f1), top);
  const auto paf2 = detail::pyramid_at(abs(sp.f2), top);
  const auto pdiff = detail::pyramid_at(abs(sp.f1 - sp.f2), top);
  auto twice = paf;
  for (auto& row : twice)
    for (auto& v : row) v *= 2;

  std::vector<Check> out;
  auto identity = [&](const std::string& name, const Rational& disc) {
    out.push_back({name, disc, Rational(0), disc.is_zero()});
  };
  identity("id5", detail::pyramid_discrepancy(pf1, pf, K) + detail::pyramid_discrepancy(pf2, pf, K));
  identity("id6", detail::pyramid_discrepancy(paf1, paf, K) + detail::pyramid_discrepancy(paf2, paf, K));
  identity("id7", detail::pyramid_discrepancy(pdiff, twice, K));
  const Rational lmax = std::max(linf_norm(sp.f1), linf_norm(sp.f2));
  const Rational lbound = 4 * linf_norm(f);
  out.push_back({"linf4x", lmax, lbound, lmax <= lbound});
  const Rational l1f = l1_norm(f);
  const Rational l1dev = abs(l1_norm(sp.f1) - l1f) + abs(l1_norm(sp.f2) - l1f);
  identity("l1_preserved", l1dev);
  return out;
}

struct WitnessReport {
  Rational gamma;
  int K = 0;
  Rational epsilon;
  Rational center_tnorm_sq;
  SplitPair pair;
  DyadicStep g1;
  DyadicStep g2;
  std::vector<Check> checks;
  /// 4 (1 - gamma)^2 (|||f|||^2 - 2^-K): the separation the construction guarantees.
  Rational guaranteed_gap_sq;
  Rational gap_sq;  ///< |||g1 - g2|||^2 as realised

  bool ok() const { return all_ok(checks); }
};

/// Produces g1, g2 in V intersected with the open unit ball, |||g1 - g2||| > 2 - eps.
///
/// The center must satisfy |||f||| <= 1; unit centers are not representable in
/// general, so the separation guarantee uses |||f|||^2 in place of 1 and is
/// checked before anything is built.
inline WitnessReport d2p_witness(const WeakNbhd& nbhd, const Rational& eps) {
  nbhd.validate();
  if (eps.sign() <= 0) throw precondition_error("eps must be positive");
  const DyadicStep& f = nbhd.center;
  WitnessReport r;
  r.epsilon = eps;
  r.center_tnorm_sq = tnorm_sq(f);
  if (r.center_tnorm_sq > Rational(1))
    throw precondition_error("center has |||f|||^2 = " + r.center_tnorm_sq.str() + " > 1");

  r.gamma = choose_gamma(linf_norm(f), nbhd.delta, eps);
  std::vector<int> levels;
  for (const auto& h : nbhd.functionals) levels.push_back(h.level());
  r.K = choose_K(r.gamma, levels);

  const Rational one_minus = 1 - r.gamma;
  r.guaranteed_gap_sq = 4 * square(one_minus) * (r.center_tnorm_sq - pow2(-r.K));
  const Rational target = square(2 - eps);
  if (r.guaranteed_gap_sq.sign() <= 0 || (eps < Rational(2) && !(r.guaranteed_gap_sq > target)))
    throw gap_condition_error("gap condition fails: 4(1-gamma)^2 (|||f|||^2 - 2^-K) = " +
                              r.guaranteed_gap_sq.str() + " is not > (2-eps)^2 = " + target.str() +
                              " (gamma=" + r.gamma.str() + ", K=" + std::to_string(r.K) +
                              ", |||f|||^2=" + r.center_tnorm_sq.str() + ")");

  r.pair = split_pair(f, r.K);
  r.g1 = one_minus * r.pair.f1;
  r.g2 = one_minus * r.pair.f2;
  r.checks = split_identities(f, r.pair);

  // Local orthogonality: <f_i - f, 1_{I^K_j}> = 0 for every j.
  {
    Rational dev;
    for (const DyadicStep* fi : {&r.pair.f1, &r.pair.f2}) {
      const auto ci = cell_integrals(*fi, r.K);
      const auto cf = f.level() >= r.K ? cell_integrals(f, r.K) : cell_integrals(refine(f, r.K), r.K);
      for (std::size_t j = 0; j < ci.size(); ++j) dev += abs(ci[j] - cf[j]);
    }
    r.checks.push_back({"orthogonal_K", dev, Rational(0), dev.is_zero()});
  }

  const Rational t1 = tnorm_sq(r.pair.f1), t2 = tnorm_sq(r.pair.f2);
  const Rational growth_bound = r.center_tnorm_sq + pow2(-r.K);
  r.checks.push_back({"norm_growth", std::max(t1, t2), growth_bound, std::max(t1, t2) <= growth_bound});

  const Rational sep = tnorm_sq(r.pair.f1 - r.pair.f2);
  const Rational sep_bound = 4 * (r.center_tnorm_sq - pow2(-r.K));
  r.checks.push_back({"gap_bound", sep, sep_bound, sep >= sep_bound});

  Rational worst;
  for (const auto& h : nbhd.functionals)
    for (const DyadicStep* g : {&r.g1, &r.g2}) worst = std::max(worst, abs(pairing(*g - f, h)));
  r.checks.push_back({"pairing_l", worst, nbhd.delta, worst < nbhd.delta});

  const Rational ball = std::max(tnorm_sq(r.g1), tnorm_sq(r.g2));
  r.checks.push_back({"ball", ball, Rational(1), ball < Rational(1)});

  r.gap_sq = square(one_minus) * sep;
  const bool gap_ok = r.gap_sq >= r.guaranteed_gap_sq && (eps >= Rational(2) || r.gap_sq > target);
  r.checks.push_back({"gap", r.gap_sq, eps >= Rational(2) ? Rational(0) : target, gap_ok});
  return r;
}

/// r f with r the largest rational of denominator <= 1/prec such that
/// r^2 |||f|||^2 <= 1.
inline DyadicStep near_unit_scale(const DyadicStep& f, const Rational& prec) {
  const Rational t = tnorm_sq(f);
  if (t.is_zero()) throw precondition_error("cannot scale the zero function to the unit sphere");
  return rational_sqrt_floor(Rational(1) / t, prec) * f;
}

}  // namespace l1renorm
