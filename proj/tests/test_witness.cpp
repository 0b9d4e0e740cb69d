#include <gtest/gtest.h>

#include <algorithm>

#include "l1renorm/random.hpp"
#include "l1renorm/selftest.hpp"
#include "l1renorm/witness.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace l1renorm;
using support::Q;
using support::step;

namespace {

WeakNbhd example_nbhd(bool with_functional = true) {
  WeakNbhd n;
  n.center = near_unit_scale(DyadicStep::constant(1), Q("1/10000"));
  if (with_functional) n.functionals.push_back(DyadicStep::constant(1));
  n.delta = Q("1/10");
  return n;
}

const Check& find(const std::vector<Check>& cs, const std::string& name) {
  const auto it = std::find_if(cs.begin(), cs.end(), [&](const Check& c) { return c.name == name; });
  if (it == cs.end()) throw std::runtime_error("missing check " + name);
  return *it;
}

}  // namespace

TEST(ChooseGamma, Examples) {
  EXPECT_EQ(choose_gamma(Q("1"), Q("1/10"), Q("1/5")), Q("1/64"));
  EXPECT_EQ(choose_gamma(Q("1"), Q("2"), Q("2")), Q("1/4"));
  EXPECT_EQ(choose_gamma(Q("0"), Q("1"), Q("2")), Q("1/2"));
  EXPECT_THROW(choose_gamma(Q("1"), Q("0"), Q("1/5")), precondition_error);
}

TEST(ChooseK, Examples) {
  EXPECT_EQ(choose_K(Q("1/64"), {3}), 7);
  EXPECT_EQ(choose_K(Q("1/2"), {0}), 2);
  EXPECT_EQ(choose_K(Q("1/4"), {5}), 5);
  EXPECT_EQ(choose_K(Q("1/4"), {}), 3);
  EXPECT_THROW(choose_K(Q("1/4"), {19}), level_overflow);
  EXPECT_THROW(choose_K(Q("1"), {}), precondition_error);
}

TEST(SplitPair, Examples) {
  auto sp = split_pair(step(0, {"1"}), 0);
  EXPECT_EQ(sp.f1, step(2, {"4", "0", "0", "0"}));
  EXPECT_EQ(sp.f2, step(2, {"0", "0", "4", "0"}));
  sp = split_pair(step(1, {"1", "-1"}), 1);
  EXPECT_EQ(sp.b, (std::vector<Rational>{Q("1/2"), Q("0")}));
  EXPECT_EQ(sp.c, (std::vector<Rational>{Q("0"), Q("1/2")}));
  EXPECT_EQ(sp.f1, step(3, {"4", "0", "0", "0", "0", "-4", "0", "0"}));
  EXPECT_EQ(sp.f2, step(3, {"0", "0", "4", "0", "0", "0", "0", "-4"}));
  sp = split_pair(DyadicStep::zero(1), 2);
  EXPECT_TRUE(sp.f1.is_zero() && sp.f2.is_zero());
  EXPECT_THROW(split_pair(step(0, {"1"}), kMaxLevel - 1), level_overflow);
}

TEST(SplitPair, IdentitiesAgainstDirectIntegrals) {
  TrialRng rng(4);
  for (int t = 0; t < 40; ++t) {
    const auto f = rng.step(4, 9, 9);
    const int K = static_cast<int>(rng.uniform(0, 4));
    const auto sp = split_pair(f, K);
    const auto af = abs(f), af1 = abs(sp.f1), af2 = abs(sp.f2), ad = abs(sp.f1 - sp.f2);
    for (int k = 0; k <= K; ++k)
      for (long j = 1; j <= (1L << k); ++j) {
        const auto i = oracle::integral(f, k, j);
        EXPECT_EQ(oracle::integral(sp.f1, k, j), i);
        EXPECT_EQ(oracle::integral(sp.f2, k, j), i);
        const auto ia = oracle::integral(f, k, j, true);
        EXPECT_EQ(oracle::integral(sp.f1, k, j, true), ia);
        EXPECT_EQ(oracle::integral(sp.f2, k, j, true), ia);
        EXPECT_EQ(oracle::integral(sp.f1 - sp.f2, k, j, true), 2 * ia);
      }
    EXPECT_TRUE(all_ok(split_identities(f, sp)));
    EXPECT_LE(std::max(linf_norm(sp.f1), linf_norm(sp.f2)), 4 * linf_norm(f));
  }
}

TEST(SplitIdentities, DetectTampering) {
  const auto f = step(1, {"1", "-1"});
  auto sp = split_pair(f, 1);
  sp.f2 = sp.f1 + step(3, {"0", "0", "0", "0", "0", "0", "0", "1"});
  const auto cs = split_identities(f, sp);
  EXPECT_FALSE(find(cs, "id5").ok);
  EXPECT_FALSE(all_ok(cs));
}

TEST(WeakNbhd, ValidateAndContains) {
  WeakNbhd n{DyadicStep::constant(1), {step(1, {"1", "-1"})}, Q("1/10")};
  EXPECT_NO_THROW(n.validate());
  EXPECT_TRUE(n.contains(step(1, {"1", "1"})));
  EXPECT_FALSE(n.contains(step(1, {"2", "1"})));
  n.functionals.push_back(step(0, {"3/2"}));
  EXPECT_THROW(n.validate(), precondition_error);
  n.functionals.pop_back();
  n.delta = 0;
  EXPECT_THROW(n.validate(), precondition_error);
}

TEST(D2PWitness, ExampleRun) {
  const auto n = example_nbhd();
  const Rational r = rational_sqrt_floor(Q("7/8"), Q("1/10000"));
  EXPECT_EQ(n.center, r * DyadicStep::constant(1));
  const auto w = d2p_witness(n, Q("1/5"));
  EXPECT_EQ(w.gamma, Q("1/64"));
  EXPECT_EQ(w.K, 7);
  EXPECT_TRUE(w.ok());
  for (const char* name : {"id5", "id6", "id7", "linf4x", "pairing_l", "ball", "gap", "orthogonal_K",
                           "norm_growth", "gap_bound"})
    EXPECT_TRUE(find(w.checks, name).ok) << name;
  // |<g_i - f, 1>| = gamma r, about 0.0146
  for (const auto* g : {&w.g1, &w.g2}) EXPECT_EQ(abs(pairing(*g - n.center, DyadicStep::constant(1))), w.gamma * r);
  EXPECT_GT(w.gap_sq, Q("384/100"));
  EXPECT_LE(w.gap_sq, Rational(4));
  EXPECT_EQ(w.guaranteed_gap_sq, 4 * square(1 - w.gamma) * (w.center_tnorm_sq - pow2(-w.K)));
  EXPECT_TRUE(n.contains(w.g1) && n.contains(w.g2));
  EXPECT_LT(tnorm_sq(w.g1), Rational(1));
  EXPECT_LT(tnorm_sq(w.g2), Rational(1));
}

TEST(D2PWitness, NoFunctionals) {
  const auto w = d2p_witness(example_nbhd(false), Q("1/5"));
  EXPECT_TRUE(w.ok());
  EXPECT_EQ(find(w.checks, "pairing_l").lhs, Rational(0));
}

TEST(D2PWitness, ZeroCenterFailsGapCondition) {
  WeakNbhd n{DyadicStep::zero(), {}, Q("1/10")};
  try {
    d2p_witness(n, Q("1/5"));
    FAIL() << "expected gap_condition_error";
  } catch (const gap_condition_error& e) {
    EXPECT_NE(std::string(e.what()).find("gap condition"), std::string::npos);
  }
}

TEST(D2PWitness, SmallCenterFailsGapCondition) {
  WeakNbhd n{step(0, {"1/2"}), {}, Q("1/10")};
  EXPECT_THROW(d2p_witness(n, Q("1/5")), gap_condition_error);
}

TEST(D2PWitness, RejectsOversizedCenter) {
  WeakNbhd n{DyadicStep::constant(1), {}, Q("1/10")};
  EXPECT_THROW(d2p_witness(n, Q("1/5")), precondition_error);
}

TEST(D2PWitness, LargeEpsIsVacuous) {
  WeakNbhd n = example_nbhd();
  const auto w = d2p_witness(n, Rational(2));
  EXPECT_TRUE(w.ok());
}

TEST(D2PWitness, RandomConfigurations) {
  TrialRng rng(2024);
  for (int t = 0; t < 10; ++t) {
    WeakNbhd n{detail::random_center(rng), detail::random_functionals(rng, static_cast<int>(rng.uniform(0, 3)), 3),
               rng.rational_between(Q("1/20"), Q("1/2"), 40)};
    const auto w = d2p_witness(n, Q("1/10"));
    EXPECT_TRUE(w.ok());
    EXPECT_GT(w.gap_sq, square(Q("19/10")));
  }
}

TEST(NearUnitScale, Examples) {
  const auto g = near_unit_scale(DyadicStep::constant(1), Q("1/10000"));
  const Rational t = tnorm_sq(g);
  EXPECT_LE(t, Rational(1));
  EXPECT_GT(t, Q("999/1000"));
  EXPECT_GE(t, 1 - 3 * Q("1/10000"));
  EXPECT_THROW(near_unit_scale(DyadicStep::zero(), Q("1/10")), precondition_error);
}

TEST(NearUnitScale, FactorIsMaximalForItsDenominatorBound) {
  const auto f = step(2, {"2", "0", "-1/3", "0"});
  const Rational t = tnorm_sq(f);
  const auto g = near_unit_scale(f, Q("1/50"));
  const Rational r = g[0] / f[0];
  EXPECT_LE(square(r) * t, Rational(1));
  EXPECT_LE(r.den(), 50);
  for (long q = 1; q <= 50; ++q) {
    const mpq_class x = r.raw() * q;
    const mpz_class p = x.get_num() / x.get_den() + 1;
    EXPECT_GT(square(Rational(p, mpz_class(q))) * t, Rational(1));
  }
}
