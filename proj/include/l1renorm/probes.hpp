#pragma once

// Finite probes of the rotundity statements. None of these prove a
// topological property; each evaluates one exact inequality or produces one
// explicit witness.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dyadic.hpp"
#include "renorm.hpp"
#include "witness.hpp"

namespace l1renorm {

/// (|||f|||^2 + |||g|||^2)/2 - |||(f+g)/2|||^2. Zero exactly when f = g.
inline Rational midpoint_defect(const DyadicStep& f, const DyadicStep& g) {
  const Rational half(1, 2);
  return half * (tnorm_sq(f) + tnorm_sq(g)) - tnorm_sq(lin_comb(half, f, half, g));
}

/// max |int_{I^k_j} u| over k <= depth: how visible u is to the first dyadic
/// test functions. Levels beyond level(u) only shrink the cell integrals, so
/// they never change the maximum.
inline Rational weak_smallness(const DyadicStep& u, int depth) {
  if (depth < 0) throw precondition_error("depth must be nonnegative");
  const auto pyr = integral_pyramid(u);
  Rational best;
  const int top = std::min(depth, u.level());
  for (int k = 0; k <= top; ++k)
    for (const auto& v : pyr[static_cast<std::size_t>(k)]) best = std::max(best, abs(v));
  return best;
}

/// center +- u both lie in the open unit ball, yet u keeps most of the L1
/// mass of the generating center: the unit vector is not strongly extreme.
struct ExtremeFailureWitness {
  DyadicStep center;
  DyadicStep u;
  Rational plus_tnorm_sq;   ///< |||center + u|||^2
  Rational minus_tnorm_sq;  ///< |||center - u|||^2
  Rational l1_of_u;
  Rational l1_of_f;
  Rational gamma;
  /// max |int_{I^k_j} u| over k <= K: zero, u is invisible at the split level.
  Rational weak_size_at_K;
  int K = 0;

  bool ok() const {
    return plus_tnorm_sq < Rational(1) && minus_tnorm_sq < Rational(1) &&
           l1_of_u >= (1 - gamma) * l1_of_f;
  }
};

inline ExtremeFailureWitness strong_extreme_failure(const WeakNbhd& nbhd, const Rational& eps) {
  const auto w = d2p_witness(nbhd, eps);
  const Rational half(1, 2);
  ExtremeFailureWitness x;
  x.center = lin_comb(half, w.g1, half, w.g2);
  x.u = lin_comb(half, w.g1, -half, w.g2);
  x.plus_tnorm_sq = tnorm_sq(x.center + x.u);
  x.minus_tnorm_sq = tnorm_sq(x.center - x.u);
  x.l1_of_u = l1_norm(x.u);
  x.l1_of_f = l1_norm(nbhd.center);
  x.gamma = w.gamma;
  x.K = w.K;
  x.weak_size_at_K = weak_smallness(x.u, w.K);
  return x;
}

/// Both sides of
///   (||f+g||_{0,1} + ||f-g||_{0,1}) / 2 >= ||f||_{0,1} + int_A |g| - 2 int_A |f|
/// for A a disjoint union of dyadic intervals.
struct ChainReport {
  Rational l1_sum;   ///< ||f+g||_1
  Rational l1_diff;  ///< ||f-g||_1
  Rational l1_f;     ///< ||f||_1
  Rational int_A_abs_g;
  Rational int_A_abs_f;
  Rational lhs;
  Rational rhs;
  bool ok = false;
};

inline ChainReport perturbation_l1_chain(const DyadicStep& f, const DyadicStep& g,
                                         const std::vector<DyadicIndex>& A) {
  for (std::size_t a = 0; a < A.size(); ++a) {
    A[a].validate();
    for (std::size_t b = 0; b < a; ++b)
      if (overlaps(A[a], A[b]))
        throw precondition_error("intervals (" + std::to_string(A[b].k) + "," + std::to_string(A[b].j) +
                                 ") and (" + std::to_string(A[a].k) + "," + std::to_string(A[a].j) +
                                 ") overlap");
  }
  ChainReport r;
  r.l1_sum = l1_norm(f + g);
  r.l1_diff = l1_norm(f - g);
  r.l1_f = l1_norm(f);
  const DyadicStep af = abs(f), ag = abs(g);
  for (const auto& idx : A) {
    r.int_A_abs_f += integral_over(af, idx);
    r.int_A_abs_g += integral_over(ag, idx);
  }
  r.lhs = Rational(1, 2) * (r.l1_sum + r.l1_diff);
  r.rhs = r.l1_f + r.int_A_abs_g - 2 * r.int_A_abs_f;
  r.ok = r.lhs >= r.rhs;
  return r;
}

struct SliceEntry {
  Rational eps;
  std::optional<Rational> gap_sq;  ///< |||g1 - g2|||^2, absent on failure
  std::string gap_float;
  std::string error;               ///< failure message, empty on success
};

/// One witness run per eps; entries fail individually.
inline std::vector<SliceEntry> slice_diameter_lb(const WeakNbhd& nbhd, const std::vector<Rational>& schedule,
                                                 int float_digits = 12) {
  std::vector<SliceEntry> out;
  out.reserve(schedule.size());
  for (const auto& eps : schedule) {
    SliceEntry e;
    e.eps = eps;
    try {
      const auto w = d2p_witness(nbhd, eps);
      e.gap_sq = w.gap_sq;
      e.gap_float = sqrt_decimal(w.gap_sq, float_digits);
    } catch (const gap_condition_error& ex) {
      e.error = ex.what();
    }
    out.push_back(std::move(e));
  }
  return out;
}

/// eps,gap_sq,gap_float rows. Failed entries leave the last two columns empty.
inline std::string slice_csv(const std::vector<SliceEntry>& entries) {
  std::ostringstream os;
  os << "eps,gap_sq,gap_float\n";
  for (const auto& e : entries) {
    os << e.eps << ',';
    if (e.gap_sq) os << *e.gap_sq << ',' << e.gap_float;
    else os << ',';
    os << '\n';
  }
  return os.str();
}

}  // namespace l1renorm
