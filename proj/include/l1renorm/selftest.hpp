#pragma once

// The invariant suite behind `l1renorm selftest`: every exact law the library
// promises, exercised on seeded random inputs.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dyadic.hpp"
#include "ell1.hpp"
#include "probes.hpp"
#include "random.hpp"
#include "renorm.hpp"
#include "ured.hpp"
#include "witness.hpp"

namespace l1renorm {

struct InvariantResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
};

namespace detail {

inline InvariantResult run_invariant(const std::string& name, int trials, TrialRng& rng,
                                     const std::function<bool(TrialRng&, std::string&)>& body) {
  InvariantResult r{name, trials, 0, {}};
  for (int t = 0; t < trials; ++t) {
    std::string why;
    bool ok = false;
    try {
      ok = body(rng, why);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    if (!ok) {
      if (r.failures++ == 0) r.first_failure = "trial " + std::to_string(t) + ": " + why;
    }
  }
  return r;
}

/// A near-unit center with bounded sup norm, ready for witness runs.
inline DyadicStep random_center(TrialRng& rng) {
  DyadicStep f;
  do f = rng.step(3, 4, 4);
  while (f.is_zero());
  return near_unit_scale(f, Rational(1, 10000));
}

inline std::vector<DyadicStep> random_functionals(TrialRng& rng, int count, int max_level) {
  std::vector<DyadicStep> hs;
  for (int l = 0; l < count; ++l) {
    auto h = rng.step(max_level, 8, 8);
    hs.push_back(Rational(1) / std::max(Rational(1), linf_norm(h)) * h);
  }
  return hs;
}

}  // namespace detail

inline std::vector<InvariantResult> run_selftest(std::uint64_t seed, int trials) {
  TrialRng rng(seed);
  std::vector<InvariantResult> out;
  auto add = [&](const std::string& name, int n, const std::function<bool(TrialRng&, std::string&)>& body) {
    out.push_back(detail::run_invariant(name, n, rng, body));
  };

  add("refinement_invariance", trials, [](TrialRng& r, std::string& why) {
    const auto f = r.step(5, 9, 9);
    const int target = f.level() + static_cast<int>(r.uniform(0, 3));
    const auto g = refine(f, target);
    for (int k = 0; k <= target; ++k)
      for (long j = 1; j <= (1L << k); ++j)
        if (integral_over(g, {k, j}) != integral_over(f, {k, j})) {
          why = "integral over (" + std::to_string(k) + "," + std::to_string(j) + ") changed";
          return false;
        }
    return tnorm_sq(g) == tnorm_sq(f) && g == f;
  });

  add("dyadic_additivity", trials, [](TrialRng& r, std::string&) {
    const auto f = r.step(6, 9, 9);
    const int k = static_cast<int>(r.uniform(0, 3));
    const int m = k + static_cast<int>(r.uniform(1, 3));
    const long j = r.uniform(1, 1L << k);
    Rational s;
    for (long i = (j - 1) << (m - k); i < j << (m - k); ++i) s += integral_over(f, {m, i + 1});
    return s == integral_over(f, {k, j});
  });

  add("holder", trials, [](TrialRng& r, std::string&) {
    const auto f = r.step(5, 9, 9), h = r.step(5, 9, 9);
    return abs(pairing(f, h)) <= l1_norm(f) * linf_norm(h);
  });

  add("projection", trials, [](TrialRng& r, std::string&) {
    const auto f = r.step(6, 9, 9);
    const int K = static_cast<int>(r.uniform(0, 6));
    const auto p = dyadic_project(f, K);
    bool ok = dyadic_project(p, K) == p && l1_norm(p) <= l1_norm(f);
    for (int k = 0; k <= K && ok; ++k)
      for (long j = 1; j <= (1L << k) && ok; ++j) ok = integral_over(p, {k, j}) == integral_over(f, {k, j});
    return ok;
  });

  add("decompose", trials, [](TrialRng& r, std::string&) {
    const auto f = r.step(5, 9, 9);
    const auto d = decompose(f);
    bool ok = d.pos - d.neg == f && d.pos + d.neg == d.abs;
    for (std::size_t i = 0; i < f.size(); ++i) ok = ok && (d.pos[i] * d.neg[i]).is_zero();
    return ok;
  });

  add("tail_identity", trials, [](TrialRng& r, std::string&) {
    const auto f = r.step(6, 9, 9);
    const Rational t = tnorm_sq(f);
    for (int T = f.level(); T <= f.level() + 5; ++T)
      if (partial_below(f, T) + tail_formula(f, T) != t) return false;
    return true;
  });

  add("absolute_value_and_reflection", trials, [](TrialRng& r, std::string&) {
    const auto f = r.step(6, 9, 9);
    const Rational t = tnorm_sq(f);
    return tnorm_sq(abs(f)) == t && tnorm_sq(reflect(f)) == t && reflect(reflect(f)) == f;
  });

  add("equivalence", trials, [](TrialRng& r, std::string&) { return check_equivalence(r.step(6, 9, 9)).ok(); });

  add("homogeneity", trials, [](TrialRng& r, std::string&) {
    const auto f = r.step(5, 9, 9);
    const Rational c = r.rational(20, 7);
    return tnorm_sq(c * f) == square(c) * tnorm_sq(f);
  });

  add("strict_convexity", trials, [](TrialRng& r, std::string& why) {
    const auto f = r.step(3, 3, 2);
    const auto g = r.coin() ? r.step(3, 3, 2) : Rational(r.uniform(0, 3), r.uniform(1, 3)) * f;
    const auto e = triangle_equality_case(f, g);
    // |||f+g||| = |||f||| + |||g|||  <=>  (A - B - C) >= 0 and (A - B - C)^2 = 4 B C.
    const Rational A = tnorm_sq(f + g), B = tnorm_sq(f), C = tnorm_sq(g);
    const Rational d = A - B - C;
    const bool equal = d.sign() >= 0 && square(d) == 4 * B * C;
    const bool expect = equal && !(g.is_zero() && !f.is_zero());
    if (e.degenerate() != expect) {
      why = "equality case disagrees with the squared-norm criterion";
      return false;
    }
    return midpoint_defect(f, g).sign() >= 0 && (midpoint_defect(f, g).is_zero() == (f == g));
  });

  add("split_identities", trials, [](TrialRng& r, std::string& why) {
    const auto f = r.step(4, 9, 9);
    const int K = static_cast<int>(r.uniform(0, 5));
    const auto sp = split_pair(f, K);
    for (const auto& c : split_identities(f, sp))
      if (!c.ok) {
        why = c.name;
        return false;
      }
    // Levels above K carry at most ||f||_1^2 4^-K / 3 in any of these norms.
    const Rational t = tnorm_sq(f), slack = square(l1_norm(f)) * pow2(-2 * K) / Rational(3);
    return tnorm_sq(sp.f1) <= t + slack && tnorm_sq(sp.f2) <= t + slack &&
           tnorm_sq(sp.f1 - sp.f2) >= 4 * (t - slack);
  });

  add("d2p_witness", std::max(1, trials / 5), [](TrialRng& r, std::string& why) {
    WeakNbhd n{detail::random_center(r), detail::random_functionals(r, static_cast<int>(r.uniform(0, 3)), 3),
               r.rational_between(Rational(1, 20), Rational(1, 2), 40)};
    const auto w = d2p_witness(n, Rational(1, 10));
    for (const auto& c : w.checks)
      if (!c.ok) {
        why = c.name;
        return false;
      }
    return n.contains(w.g1) && n.contains(w.g2);
  });

  add("extreme_failure", std::max(1, trials / 5), [](TrialRng& r, std::string&) {
    WeakNbhd n{detail::random_center(r), detail::random_functionals(r, 1, 2), Rational(1, 10)};
    const auto x = strong_extreme_failure(n, Rational(1, 5));
    return x.ok() && x.weak_size_at_K.is_zero();
  });

  add("perturbation_chain", trials, [](TrialRng& r, std::string&) {
    const auto f = r.step(4, 9, 9), g = r.step(4, 9, 9);
    const int k = static_cast<int>(r.uniform(0, 4));
    std::vector<DyadicIndex> A;
    for (long j = 1; j <= (1L << k); ++j)
      if (r.coin()) A.push_back({k, j});
    return perturbation_l1_chain(f, g, A).ok;
  });

  add("weak_smallness_bound", trials, [](TrialRng& r, std::string&) {
    const auto u = r.step(6, 9, 9);
    return weak_smallness(u, static_cast<int>(r.uniform(0, 8))) <= l1_norm(u);
  });

  add("octahedral_guarantee", trials, [](TrialRng& r, std::string& why) {
    std::vector<DyadicStep> E;
    const long members = r.uniform(0, 3);
    for (long i = 0; i < members; ++i) E.push_back(r.step(3, 9, 9));
    const Rational eps = pow2(-r.uniform(1, 3));
    const auto y = octahedral_direction(E, eps);
    DyadicStep x = DyadicStep::zero();
    for (const auto& e : E) x = x + r.rational(9, 9) * e;
    const auto c = octahedral_check(x, y, eps);
    if (!c.ok) why = "margin " + c.min_margin.str() + " at alpha " + c.argmin.str();
    return c.ok;
  });

  add("ell1_disjoint", trials, [](TrialRng& r, std::string&) {
    const std::size_t m = static_cast<std::size_t>(r.uniform(1, 6));
    std::vector<Rational> d{r.rational_between(Rational(1, 64), Rational(63, 64), 64)};
    for (std::size_t k = 1; k < m; ++k) d.push_back(r.rational_between(Rational(1, 64), d.back(), 64));
    const auto fam = disjoint_spike_family(d, m, 3);
    std::vector<Rational> a;
    for (std::size_t k = 0; k < m; ++k) a.push_back(r.rational(9, 9));
    const auto c = ell1_bounds(fam, a);
    const auto dp = dual_segment(fam);
    return c.lower_tight && c.upper_ok && dp.pattern_ok && (m < 2 || dp.segment_ok());
  });

  add("ured_claim", 1, [](TrialRng&, std::string& why) {
    std::vector<Rational> eps;
    for (long n = 1; n <= 10; ++n) eps.push_back(pow2(-n));
    const auto run = ured_recursion(Rational(1, 2), eps, 10);
    for (const auto& c : verify_claim(run))
      if (!c.ok) {
        why = c.name + " at n=" + std::to_string(c.n);
        return false;
      }
    return true;
  });

  return out;
}

}  // namespace l1renorm
