#pragma once

// Failure of uniform rotundity in every direction, realised on finitely
// supported sequences under the sup norm (a model of c0).
//
// P zeroes the first coordinate, z = (1 - delta) e_1 spans its kernel, and
// each step n appends the fresh coordinate n+1 at height 1 - eps_n / 4.
// Then x_n - y_n = -z stays fixed with y_n = z + x_n, while
// ||x_n + y_n|| = ||2 x_n + z|| = 2 (1 - eps_n / 4) climbs to 2.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace l1renorm {

/// Finitely supported real sequence, indices from 1. Zeros are never stored.
class SparseSeq {
 public:
  SparseSeq() = default;

  static SparseSeq unit(long index, const Rational& height = Rational(1)) {
    SparseSeq s;
    s.set(index, height);
    return s;
  }

  void set(long index, const Rational& v) {
    if (index < 1) throw precondition_error("sequence indices start at 1");
    if (v.is_zero()) coords_.erase(index);
    else coords_[index] = v;
  }

  Rational get(long index) const {
    const auto it = coords_.find(index);
    return it == coords_.end() ? Rational(0) : it->second;
  }

  const std::map<long, Rational>& coords() const noexcept { return coords_; }

  Rational sup_norm() const {
    Rational m;
    for (const auto& [i, v] : coords_) m = std::max(m, abs(v));
    return m;
  }

  friend SparseSeq lin_comb(const Rational& a, const SparseSeq& x, const Rational& b, const SparseSeq& y) {
    SparseSeq out;
    for (const auto& [i, v] : x.coords_) out.set(i, a * v);
    for (const auto& [i, v] : y.coords_) out.set(i, out.get(i) + b * v);
    return out;
  }

  friend SparseSeq operator+(const SparseSeq& x, const SparseSeq& y) { return lin_comb(1, x, 1, y); }
  friend SparseSeq operator-(const SparseSeq& x, const SparseSeq& y) { return lin_comb(1, x, -1, y); }
  friend SparseSeq operator*(const Rational& a, const SparseSeq& x) { return lin_comb(a, x, 0, SparseSeq()); }
  friend bool operator==(const SparseSeq&, const SparseSeq&) = default;

 private:
  std::map<long, Rational> coords_;
};

/// Norm-one projection with kernel span{e_1}: drops the first coordinate.
inline SparseSeq projection_tail(const SparseSeq& x) {
  SparseSeq out = x;
  out.set(1, 0);
  return out;
}

struct RecursionRun {
  Rational delta;
  std::vector<Rational> eps;
  SparseSeq z;
  std::vector<SparseSeq> xs;         ///< x_0 = 0, x_1, ..., x_n
  std::vector<long> xstars;          ///< x*_n is evaluation at coordinate xstars[n-1]
  std::vector<SparseSeq> y1s, y2s;   ///< the perturbation pair used at each step
};

/// n steps of the recursion with heights 1 - eps_n / 4 on coordinate n + 1.
inline RecursionRun ured_recursion(const Rational& delta, const std::vector<Rational>& eps, std::size_t steps) {
  if (delta.sign() <= 0 || delta >= Rational(1)) throw precondition_error("delta must lie in (0,1)");
  if (eps.size() < steps) throw precondition_error("need one eps per step");
  for (std::size_t i = 0; i < steps; ++i) {
    if (eps[i].sign() <= 0) throw precondition_error("eps_" + std::to_string(i + 1) + " must be positive");
    if (i > 0 && eps[i] > eps[i - 1]) throw precondition_error("eps must be nonincreasing");
  }
  RecursionRun run;
  run.delta = delta;
  run.eps.assign(eps.begin(), eps.begin() + static_cast<std::ptrdiff_t>(steps));
  run.z = SparseSeq::unit(1, 1 - delta);
  run.xs.emplace_back();
  for (std::size_t n = 1; n <= steps; ++n) {
    const long fresh = static_cast<long>(n) + 1;
    const Rational height = 1 - run.eps[n - 1] / Rational(4);
    run.y1s.push_back(SparseSeq::unit(fresh, height));
    run.y2s.push_back(SparseSeq::unit(fresh, -height));
    run.xs.push_back(run.xs.back() + run.y1s.back());
    run.xstars.push_back(fresh);
  }
  return run;
}

struct ClaimCheck {
  std::string name;
  std::size_t n = 0;
  std::size_t m = 0;
  Rational lhs;
  Rational rhs;
  bool ok = false;
};

/// Every inequality the recursion promises, plus the non-URED conclusion, exactly.
///   claim1        ||z + x_n|| < 1
///   claim2        x*_n(x_m) = x*_n(x_n) > 1 - eps_n       (m >= n)
///   half_z        ||z/2 + x_m|| >= 1 - eps_n              (m >= n)
///   sum_norm      ||2 x_n + z|| = 2 (1 - eps_n / 4)
///   pair_ball     ||z + x_{n-1} + y_k|| < 1,  k = 1, 2
///   pair_spread   ||y_1 - y_2|| > 2 - eps_n
///   kernel        y_k vanish on earlier functionals and on ker P
///   range         P x_n = x_n, P z = 0
inline std::vector<ClaimCheck> verify_claim(const RecursionRun& run) {
  std::vector<ClaimCheck> out;
  const std::size_t steps = run.eps.size();
  const Rational one(1);
  const SparseSeq half_z = Rational(1, 2) * run.z;
  {
    const Rational v = (run.z + run.xs[0]).sup_norm();
    out.push_back({"claim1", 0, 0, v, one, v < one});
  }
  for (std::size_t n = 1; n <= steps; ++n) {
    const Rational eps = run.eps[n - 1];
    const SparseSeq& xn = run.xs[n];
    const long coord = run.xstars[n - 1];
    const Rational v1 = (run.z + xn).sup_norm();
    out.push_back({"claim1", n, n, v1, one, v1 < one});
    const Rational own = xn.get(coord);
    for (std::size_t m = n; m <= steps; ++m) {
      const Rational at_m = run.xs[m].get(coord);
      out.push_back({"claim2", n, m, at_m, 1 - eps, at_m == own && at_m > 1 - eps});
      const Rational hz = (half_z + run.xs[m]).sup_norm();
      out.push_back({"half_z", n, m, hz, 1 - eps, hz >= 1 - eps});
    }
    const Rational s = (2 * xn + run.z).sup_norm();
    const Rational expect = 2 * (1 - eps / Rational(4));
    out.push_back({"sum_norm", n, n, s, expect, s == expect});
    const SparseSeq& y1 = run.y1s[n - 1];
    const SparseSeq& y2 = run.y2s[n - 1];
    const Rational b = std::max((run.z + run.xs[n - 1] + y1).sup_norm(), (run.z + run.xs[n - 1] + y2).sup_norm());
    out.push_back({"pair_ball", n, n, b, one, b < one});
    const Rational spread = (y1 - y2).sup_norm();
    out.push_back({"pair_spread", n, n, spread, 2 - eps, spread > 2 - eps});
    bool annihilated = projection_tail(y1) == y1 && projection_tail(y2) == y2;
    for (std::size_t i = 1; i < n; ++i)
      annihilated = annihilated && y1.get(run.xstars[i - 1]).is_zero() && y2.get(run.xstars[i - 1]).is_zero();
    out.push_back({"kernel", n, n, Rational(annihilated ? 1 : 0), one, annihilated});
    const bool ranged = projection_tail(xn) == xn && projection_tail(run.z) == SparseSeq();
    out.push_back({"range", n, n, Rational(ranged ? 1 : 0), one, ranged});
  }
  return out;
}

/// ||t z + x_N|| for each t in the grid, each required to lie in
/// [1 - eps_N / 4, 1): finite shadows of the segment {t z + x** : t in [0,1]}.
struct SegmentPoint {
  Rational t;
  Rational norm;
  bool ok = false;
};

inline std::vector<SegmentPoint> segment_check(const RecursionRun& run, const std::vector<Rational>& t_grid,
                                               std::size_t N) {
  if (t_grid.empty()) throw precondition_error("segment_check needs a nonempty t grid");
  if (N > run.eps.size()) throw precondition_error("truncation N exceeds the number of recursion steps");
  const Rational floor_value = N == 0 ? Rational(0) : 1 - run.eps[N - 1] / Rational(4);
  std::vector<SegmentPoint> out;
  for (const auto& t : t_grid) {
    if (t.sign() < 0 || t > Rational(1)) throw precondition_error("t must lie in [0,1]");
    const Rational v = (t * run.z + run.xs[N]).sup_norm();
    out.push_back({t, v, floor_value <= v && v < Rational(1)});
  }
  return out;
}

}  // namespace l1renorm
