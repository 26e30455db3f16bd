#include <numbers>

#include "common.hpp"

using namespace momentlab;
using momentlab::test::Group;
using momentlab::test::fixture_complex;
using momentlab::test::fixtures;

namespace {

WeightFunction dirichlet_weight(int kappa, Damping d = kDefaultDamping) {
  return WeightFunction(AfeWeight{{GammaFactor::dirichlet(kappa)}, d});
}

}  // namespace

TEST(Weight, SmallArgumentLimit) {
  EXPECT_NEAR(dirichlet_weight(1)(1e-8), 1.0, 1e-6);
  EXPECT_NEAR(WeightFunction(AfeWeight{{GammaFactor::holomorphic(12)}})(1e-8), 1.0, 1e-6);
  EXPECT_NEAR(triple_weight(1, 1, 1)(1e-8), 1.0, 1e-6);
}

// Even parity: the gamma factor has a pole at u = -1/2, so V(x) = 1 - c sqrt(x) + O(x^{5/2}).
TEST(Weight, EvenParityResidue) {
  for (auto d : {kDefaultDamping, kAlternateDamping}) {
    const double x = 1e-8;
    const double c = 4.0 * std::pow(std::numbers::pi, 0.25) * std::exp(0.25 / damping_scale(d)) / std::tgamma(0.25);
    EXPECT_NEAR(dirichlet_weight(0, d)(x), 1.0 - c * std::sqrt(x), 1e-12);
  }
}

TEST(Weight, Decay) {
  EXPECT_LT(std::abs(dirichlet_weight(0)(10.0)), 1e-4);
  EXPECT_LT(std::abs(dirichlet_weight(1)(10.0)), 1e-4);
  for (int a = 0; a < 8; ++a) EXPECT_LT(std::abs(triple_weight(a & 1, (a >> 1) & 1, (a >> 2) & 1)(20.0)), 1e-6);
  EXPECT_THROW((void)dirichlet_weight(0)(0.0), std::domain_error);
  EXPECT_THROW((void)dirichlet_weight(0)(-1.0), std::domain_error);
}

TEST(Weight, ContinuousAcrossOne) {
  const auto w = dirichlet_weight(1);
  EXPECT_NEAR(w(1.0 - 1e-9), w(1.0), 1e-8);
}

TEST(Hurwitz, SeriesFixture) {
  const auto& h = fixtures()["hurwitz"];
  Group G(5);
  const auto v = hurwitz_oracle(G.g.quadratic(), 2.0);
  EXPECT_NEAR(std::abs(v - cplx{h["q5_quadratic_s2_series"].get<double>(), 0.0}), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(v - fixture_complex(h["q5_quadratic_s2"])), 0.0, 1e-13);
  EXPECT_THROW(hurwitz_oracle(G.g.principal(), 0.5), std::domain_error);
}

TEST(Hurwitz, ZetaSpecialValues) {
  EXPECT_NEAR(std::abs(hurwitz_zeta(2.0, 1.0) - cplx{std::numbers::pi * std::numbers::pi / 6.0, 0.0}), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(hurwitz_zeta(0.5, 1.0) - cplx{-1.4603545088095868, 0.0}), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(gamma_complex(0.5) - cplx{std::sqrt(std::numbers::pi), 0.0}), 0.0, 1e-13);
}

TEST(DirichletCentral, QuadraticModFive) {
  Group G(5);
  const auto v = dirichlet_central(G.g, G.g.quadratic());
  EXPECT_NEAR(std::abs(v.value - fixture_complex(fixtures()["hurwitz"]["q5_quadratic_half"])), 0.0, 1e-10);
  EXPECT_THROW(dirichlet_central(G.g, G.g.principal()), std::domain_error);
}

TEST(DirichletCentral, FixturesModSevenAndHundredOne) {
  for (std::int64_t q : {7, 101}) {
    Group G(q);
    const auto& arr = fixtures()["hurwitz"][q == 7 ? "q7_half_by_index" : "q101_half_by_index"];
    const auto batch = DirichletAfe(G.g).batch();
    for (std::int64_t t = 1; t < q - 1; ++t) {
      const auto expected = fixture_complex(arr[static_cast<std::size_t>(t - 1)]);
      EXPECT_NEAR(std::abs(batch[static_cast<std::size_t>(t)] - expected), 0.0, 1e-8) << q << " " << t;
      EXPECT_NEAR(std::abs(dirichlet_central(G.g, G.g.character(t)).value - expected), 0.0, 1e-8);
    }
  }
}

TEST(DirichletCentral, ConjugateSymmetryAndQIndependence) {
  Group G(101);
  const auto batch = DirichletAfe(G.g).batch();
  for (std::size_t t = 1; t < 100; ++t) EXPECT_NEAR(std::abs(batch[100 - t] - std::conj(batch[t])), 0.0, 1e-10);
  EXPECT_TRUE(check_q_independence(G.g).pass);
  Group H(11);
  EXPECT_TRUE(check_afe_oracle(H.g).pass);
  EXPECT_TRUE(check_afe_oracle(H.g, kAlternateDamping).pass);
}

TEST(FunctionalEquation, RootNumberPhase) {
  Group G(101);
  EXPECT_TRUE(check_functional_equation(G.g, 20).pass);
  // The opposite phase only differs on odd characters, by O(1).
  EXPECT_GT(functional_equation_defect(G.g.character(1), {0.6, 0.3}, +1), 1e-2);
  EXPECT_LT(functional_equation_defect(G.g.character(2), {0.6, 0.3}, +1), 1e-8);
}

TEST(TripleProduct, MatchesFixtureAndProduct) {
  Group G(11);
  const auto one = G.g.principal();
  const auto r = triple_product_afe(G.g.character(1), one, one);
  EXPECT_NEAR(std::abs(r.value - fixture_complex(fixtures()["triple_product_q11_t1_trivial"])), 0.0, 1e-6);

  Group H(13);
  const auto batch = DirichletAfe(H.g).batch();
  for (auto [t, t1, t2] : {std::array<std::int64_t, 3>{1, 4, 7}, {2, 3, 5}, {5, 0, 9}}) {
    const auto v = triple_product_afe(H.g.character(t), H.g.character(t1), H.g.character(t2)).value;
    const auto expected = batch[static_cast<std::size_t>(t)] * batch[static_cast<std::size_t>((t + t1) % 12)] *
                          batch[static_cast<std::size_t>((t + t2) % 12)];
    EXPECT_NEAR(std::abs(v - expected), 0.0, 1e-6) << t;
    const auto c = triple_product_afe(H.g.character(t).conj(), H.g.character(t1).conj(), H.g.character(t2).conj());
    EXPECT_NEAR(std::abs(c.value), std::abs(v), 1e-8);
  }
  EXPECT_THROW(triple_product_afe(H.g.character(3), H.g.character(9), H.g.principal()), std::domain_error);
}

TEST(CuspTwist, RootNumberSelfConsistency) {
  Group G(101);
  const auto tau = build_tau(50 * 101 + 2);
  const CuspTwistAfe a(G.g, tau.lambda, 12, kDefaultDamping), b(G.g, tau.lambda, 12, kAlternateDamping);
  const auto va = a.batch(), vb = b.batch();
  double worst = 0.0;
  for (std::size_t t = 1; t < va.size(); ++t) worst = std::max(worst, std::abs(va[t] - vb[t]));
  EXPECT_LT(worst, 1e-7);

  const CuspTwistAfe wa(G.g, tau.lambda, 12, kDefaultDamping, -1.0), wb(G.g, tau.lambda, 12, kAlternateDamping, -1.0);
  const auto xa = wa.batch(), xb = wb.batch();
  double drift = 0.0;
  for (std::size_t t = 1; t < xa.size(); ++t) drift = std::max(drift, std::abs(xa[t] - xb[t]));
  EXPECT_GT(drift, 1e-3);

  for (std::size_t t = 1; t < va.size(); ++t) {
    EXPECT_NEAR(std::abs(va[va.size() - t] - std::conj(va[t])), 0.0, 1e-8);
  }
  EXPECT_NEAR(std::abs(a.central(G.g.character(7)).value - va[7]), 0.0, 1e-10);
  EXPECT_THROW((void)a.central(G.g.principal()), std::domain_error);
}

TEST(CuspTwist, ShortTableRejected) {
  Group G(101);
  const auto tau = build_tau(100);
  EXPECT_THROW(CuspTwistAfe(G.g, tau.lambda), std::invalid_argument);
}
