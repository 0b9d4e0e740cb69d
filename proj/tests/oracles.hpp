#pragma once

// Reference implementations used only by the tests. They deliberately avoid
// the library's own shortcuts (closed-form tail, pyramid sums, sign-pattern
// reasoning) and work from raw cell values.

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include "l1renorm/dyadic.hpp"

namespace oracle {

using l1renorm::DyadicStep;
using l1renorm::Rational;

/// Cell values of f on level m >= level(f), by explicit repetition.
inline std::vector<mpq_class> expand(const DyadicStep& f, int m) {
  const std::size_t n = std::size_t{1} << m;
  const std::size_t rep = std::size_t{1} << (m - f.level());
  std::vector<mpq_class> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f.values()[i / rep].raw();
  return out;
}

/// int over I^k_j (j from 1) of f (or |f|), summed cell by cell at a level
/// fine enough to contain I^k_j.
inline mpq_class integral(const DyadicStep& f, int k, long j, bool absolute = false) {
  const int m = std::max(k, f.level());
  const auto v = expand(f, m);
  const std::size_t width = std::size_t{1} << (m - k);
  mpq_class s = 0;
  for (std::size_t i = static_cast<std::size_t>(j - 1) * width; i < static_cast<std::size_t>(j) * width; ++i)
    s += absolute ? mpq_class(::abs(v[i])) : v[i];
  mpq_class w(1, 1);
  w.get_den() <<= m;
  w.canonicalize();
  return s * w;
}

/// int over each level-k cell of f (or |f|), by summing expanded values.
inline std::vector<mpq_class> cell_integrals(const DyadicStep& f, int k, bool absolute = false) {
  const int m = std::max(k, f.level());
  const auto v = expand(f, m);
  const std::size_t width = std::size_t{1} << (m - k);
  mpq_class w(1, 1);
  w.get_den() <<= m;
  w.canonicalize();
  std::vector<mpq_class> out(std::size_t{1} << k);
  for (std::size_t c = 0; c < out.size(); ++c) {
    mpq_class s = 0;
    for (std::size_t i = c * width; i < (c + 1) * width; ++i) s += absolute ? mpq_class(::abs(v[i])) : v[i];
    out[c] = s * w;
  }
  return out;
}

/// sum_{k < T} 4^-k sum_j (int_{I^k_j} |f|)^2, every term computed directly.
inline mpq_class truncated_series(const DyadicStep& f, int T) {
  mpq_class total = 0;
  for (int k = 0; k < T; ++k) {
    mpq_class level_sum = 0;
    for (const auto& s : cell_integrals(f, k, true)) level_sum += s * s;
    mpq_class w(1, 1);
    w.get_den() <<= 2 * k;
    w.canonicalize();
    total += w * level_sum;
  }
  return total;
}

/// Double-precision squared norm: the series summed far past double resolution.
inline double series_double(const std::vector<double>& v) {
  const int L = static_cast<int>(std::log2(static_cast<double>(v.size())));
  double total = 0;
  for (int k = 0; k < 40; ++k) {
    double level_sum = 0;
    if (k <= L) {
      const std::size_t width = std::size_t{1} << (L - k);
      for (std::size_t c = 0; c < (std::size_t{1} << k); ++c) {
        double s = 0;
        for (std::size_t i = c * width; i < (c + 1) * width; ++i) s += std::fabs(v[i]);
        s /= static_cast<double>(std::size_t{1} << L);
        level_sum += s * s;
      }
    } else {
      // each level-L cell splits into 2^(k-L) equal pieces
      const double pieces = std::ldexp(1.0, k - L);
      for (double x : v) {
        const double s = std::fabs(x) / std::ldexp(1.0, k);
        level_sum += pieces * s * s;
      }
    }
    total += std::ldexp(level_sum, -2 * k);
  }
  return total;
}

/// max <f,h>^2 / |||f|||^2 over level-L step functions whose values lie on
/// the grid {-den..den}/den. Brute force over every grid point, no sign
/// reasoning. |||f|||^2 depends only on |f| and is a quadratic form there, so
/// its matrix is recovered by polarization from series_double on basis vectors.
inline double dual_grid(const DyadicStep& h, int L, int den) {
  const std::size_t n = std::size_t{1} << L;
  const auto hv = expand(h, std::max(L, h.level()));
  // Pairing with a level-L function only sees the level-L cell integrals of h.
  std::vector<double> c(n, 0.0);
  const std::size_t rep = hv.size() / n;
  for (std::size_t i = 0; i < hv.size(); ++i) c[i / rep] += hv[i].get_d() / static_cast<double>(hv.size());
  std::vector<double> G(n * n);
  auto basis = [&](std::size_t i, std::size_t k) {
    std::vector<double> e(n, 0.0);
    e[i] += 1;
    e[k] += 1;
    return series_double(e);
  };
  for (std::size_t i = 0; i < n; ++i) G[i * n + i] = basis(i, i) / 4;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (i != k) G[i * n + k] = (basis(i, k) - G[i * n + i] - G[k * n + k]) / 2;

  // f and -f give the same ratio, so the first value only runs over 0..den.
  std::vector<int> a(n, -den);
  a[0] = 0;
  std::vector<double> f(n);
  double best = 0;
  for (;;) {
    double p = 0, q = 0;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = std::abs(a[i]) / static_cast<double>(den);
      p += (a[i] / static_cast<double>(den)) * c[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0;
      for (std::size_t k = 0; k < n; ++k) row += G[i * n + k] * f[k];
      q += f[i] * row;
    }
    if (q > 0) best = std::max(best, p * p / q);
    std::size_t i = n;
    while (i-- > 0) {
      if (a[i] < den) {
        ++a[i];
        break;
      }
      if (i == 0) return best;
      a[i] = -den;
    }
  }
}

/// Brute-force cellwise test of "f = t g for some t >= 0" at the common level.
/// f = 0 qualifies (t = 0) only when g != 0 or f = 0 too.
inline bool nonneg_proportional(const DyadicStep& f, const DyadicStep& g) {
  const int m = std::max(f.level(), g.level());
  const auto fv = expand(f, m), gv = expand(g, m);
  bool g_zero = true, f_zero = true;
  for (std::size_t i = 0; i < fv.size(); ++i) {
    g_zero = g_zero && gv[i] == 0;
    f_zero = f_zero && fv[i] == 0;
  }
  if (g_zero) return f_zero;
  for (std::size_t i = 0; i < fv.size(); ++i) {
    if (fv[i] * gv[i] < 0) return false;
    if (gv[i] == 0 && fv[i] != 0) return false;
    for (std::size_t k = 0; k < i; ++k)
      if (fv[i] * gv[k] != fv[k] * gv[i]) return false;
  }
  return true;
}

inline mpq_class l1(const DyadicStep& f) { return integral(f, 0, 1, true); }

}  // namespace oracle
