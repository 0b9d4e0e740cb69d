#include <gtest/gtest.h>

#include "l1renorm/random.hpp"
#include "l1renorm/renorm.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace l1renorm;
using support::Q;
using support::step;

TEST(Seminorm, Examples) {
  EXPECT_EQ(seminorm(step(1, {"2", "0"}), {1, 1}), Rational(1));
  EXPECT_EQ(seminorm(step(1, {"2", "0"}), {1, 2}), Rational(0));
  for (int k = 0; k < 6; ++k)
    for (long j = 1; j <= (1L << k); ++j) EXPECT_EQ(seminorm(DyadicStep::constant(1), {k, j}), pow2(-k));
  TrialRng rng(3);
  for (int t = 0; t < 30; ++t) {
    const auto f = rng.step(5, 9, 9);
    EXPECT_EQ(seminorm(f, {0, 1}), l1_norm(f));
  }
}

TEST(TNorm, Examples) {
  EXPECT_EQ(tnorm_sq(step(0, {"1"})), Q("8/7"));
  EXPECT_EQ(tnorm_sq(step(1, {"2", "0"})), Q("9/7"));
  EXPECT_EQ(tnorm_sq(DyadicStep::zero(3)), Rational(0));
  EXPECT_EQ(tnorm_sq(step(1, {"1", "-1"})), Q("8/7"));
  EXPECT_EQ(tnorm_sq(step(1, {"1", "0"})), Q("9/28"));
  EXPECT_EQ(tnorm_sq(reflect(step(1, {"2", "0"}))), Q("9/7"));
}

TEST(TNorm, TruncatedSeriesConvergesToClosedForm) {
  // partial sums of sum 8^-k approach 8/7 from below, gap exactly (8/7) 8^-T
  const auto one = DyadicStep::constant(1);
  for (int T = 0; T <= 16; T += 4) {
    const mpq_class partial = oracle::truncated_series(one, T);
    EXPECT_EQ(Q("8/7").raw() - partial, (Q("8/7") * pow(Q("1/8"), static_cast<unsigned>(T))).raw());
  }
}

TEST(TNorm, TailFormula) {
  EXPECT_EQ(tail_formula(step(0, {"1"}), 0), Q("8/7"));
  EXPECT_EQ(tail_formula(step(0, {"1"}), 1), Q("1/7"));
  EXPECT_EQ(tail_formula(DyadicStep::zero(2), 5), Rational(0));
  EXPECT_THROW(tail_formula(step(1, {"1", "2"}), 0), precondition_error);
}

TEST(TNorm, ClosedFormAgreesWithOracleSeries) {
  TrialRng rng(21);
  for (int t = 0; t < 60; ++t) {
    const auto f = rng.step(5, 20, 64);
    for (int T : {f.level(), f.level() + 1, f.level() + 4}) {
      EXPECT_EQ(partial_below(f, T).raw(), oracle::truncated_series(f, T));
      EXPECT_EQ(oracle::truncated_series(f, T) + tail_formula(f, T).raw(), tnorm_sq(f).raw());
    }
  }
}

TEST(TNorm, Invariances) {
  TrialRng rng(8);
  for (int t = 0; t < 50; ++t) {
    const auto f = rng.step(5, 9, 9);
    const Rational v = tnorm_sq(f);
    EXPECT_EQ(tnorm_sq(abs(f)), v);
    EXPECT_EQ(tnorm_sq(refine(f, f.level() + 2)), v);
    EXPECT_EQ(tnorm_sq(reflect(f)), v);
    const Rational c = rng.rational(7, 5);
    EXPECT_EQ(tnorm_sq(c * f), square(c) * v);
    EXPECT_EQ(v.is_zero(), f.is_zero());
  }
}

TEST(Equivalence, Examples) {
  for (const auto& f : {step(0, {"1"}), step(1, {"2", "0"}), DyadicStep::zero()}) {
    const auto r = check_equivalence(f);
    EXPECT_TRUE(r.lower_ok && r.upper_ok && r.sharp_ok);
  }
  const auto r = check_equivalence(step(0, {"1"}));
  EXPECT_EQ(r.l1_sq, Rational(1));
  EXPECT_EQ(r.upper_sqrt2_sq, Rational(2));
  EXPECT_EQ(r.upper_sharp_sq, Q("4/3"));
}

TEST(NormReport, FieldsAndFloat) {
  const auto r = norm_report(step(0, {"1"}), 6);
  EXPECT_EQ(r.tnorm_sq, Q("8/7"));
  EXPECT_EQ(r.tnorm_float, "1.069044");
  EXPECT_TRUE(r.equiv_ok);
}

TEST(EqualityCase, Examples) {
  const auto f = step(1, {"1", "-3"});
  auto e = triangle_equality_case(f, 2 * f);
  EXPECT_TRUE(e.degenerate());
  EXPECT_EQ(e.ratio, Q("1/2"));
  EXPECT_FALSE(triangle_equality_case(step(1, {"1", "0"}), step(1, {"0", "1"})).degenerate());
  EXPECT_FALSE(triangle_equality_case(step(1, {"1", "1"}), step(1, {"1", "-1"})).degenerate());
  e = triangle_equality_case(step(1, {"1", "-1"}), step(1, {"2", "-2"}));
  EXPECT_TRUE(e.degenerate());
  EXPECT_EQ(e.ratio, Q("1/2"));
  EXPECT_FALSE(triangle_equality_case(f, -2 * f).degenerate());
}

TEST(EqualityCase, ZeroOperandConvention) {
  const auto f = step(1, {"1", "2"});
  const auto z = DyadicStep::zero();
  auto e = triangle_equality_case(f, z);
  EXPECT_FALSE(e.degenerate());
  EXPECT_TRUE(e.zero_operand);
  e = triangle_equality_case(z, f);
  EXPECT_TRUE(e.degenerate());
  EXPECT_TRUE(e.ratio.is_zero());
  EXPECT_TRUE(triangle_equality_case(z, z).degenerate());
}

TEST(EqualityCase, MatchesCellwiseOracle) {
  TrialRng rng(17);
  for (int t = 0; t < 300; ++t) {
    const auto f = rng.step(2, 2, 2);
    const auto g = rng.coin() ? rng.step(2, 2, 2) : rng.rational(3, 3) * f;
    EXPECT_EQ(triangle_equality_case(f, g).degenerate(), oracle::nonneg_proportional(f, g));
  }
}

TEST(Gram, MatchesNormOnNonnegativeFunctions) {
  for (int L = 0; L <= 3; ++L) {
    const auto Qm = detail::tnorm_gram(L);
    TrialRng rng(static_cast<std::uint64_t>(L) + 40);
    for (int t = 0; t < 10; ++t) {
      auto f = abs(rng.step_at(L, 9, 9));
      Rational q;
      for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t k = 0; k < f.size(); ++k) q += f[i] * Qm[i][k] * f[k];
      EXPECT_EQ(q, tnorm_sq(f));
    }
  }
}

TEST(DualEstimate, ConstantFunctional) {
  const auto d = dual_norm_estimate(step(0, {"1"}), 2, Q("1/1000000000"));
  EXPECT_EQ(d.value_sq, Q("7/8"));
  EXPECT_TRUE(d.certified_optimal);
  ASSERT_TRUE(d.upper_sq.has_value());
  EXPECT_EQ(*d.upper_sq, Q("7/8"));
  EXPECT_EQ(d.maximizer_tnorm_sq * d.value_sq, d.pairing_sq);
}

TEST(DualEstimate, ZeroFunctional) {
  const auto d = dual_norm_estimate(DyadicStep::zero(2), 2, Q("1/1000"));
  EXPECT_TRUE(d.value_sq.is_zero());
}

TEST(DualEstimate, OddFunctionalMatchesGrid) {
  const auto h = step(1, {"1", "-1"});
  const auto d = dual_norm_estimate(h, 1, Q("1/1000000000"));
  EXPECT_GE(d.value_sq.to_double(), oracle::dual_grid(h, 1, 32) - 1e-9);
  const auto m = d.maximizer;
  EXPECT_EQ(reflect(m), -1 * m);
}

TEST(DualEstimate, BracketedByGridAndUpperBound) {
  TrialRng rng(99);
  for (int t = 0; t < 5; ++t) {
    const auto h = rng.step(2, 8, 8);
    const int L = std::max(1, h.level());
    const auto d = dual_norm_estimate(h, L, Q("1/1000000000"));
    EXPECT_GE(d.value_sq.to_double(), oracle::dual_grid(h, L, 16) - 1e-9);
    ASSERT_TRUE(d.upper_sq.has_value());
    EXPECT_LE(d.value_sq, *d.upper_sq);
    EXPECT_EQ(d.value_sq * d.maximizer_tnorm_sq, d.pairing_sq);
  }
}

TEST(DualEstimate, RejectsBadTolerance) {
  EXPECT_THROW(dual_norm_estimate(step(0, {"1"}), 1, Rational(0)), precondition_error);
  EXPECT_THROW(dual_norm_estimate(step(0, {"1"}), kMaxLevel + 1, Q("1/10")), level_overflow);
}
