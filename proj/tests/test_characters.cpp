#include "common.hpp"

using namespace momentlab;
using momentlab::test::Group;

TEST(Characters, CountAndParity) {
  Group G(11);
  const auto all = G.g.all();
  EXPECT_EQ(all.size(), 10U);
  int even = 0;
  for (const auto& chi : all) {
    EXPECT_NEAR(std::abs(chi(-1) - cplx{chi.is_even() ? 1.0 : -1.0, 0.0}), 0.0, 1e-14);
    even += chi.is_even();
  }
  EXPECT_EQ(even, 5);
  EXPECT_EQ(G.g.character(0)(0), cplx{});
}

TEST(Characters, Multiplicative) {
  Group G(13);
  const auto chi = G.g.character(5);
  for (std::int64_t a = 1; a < 13; ++a) {
    for (std::int64_t b = 1; b < 13; ++b) EXPECT_NEAR(std::abs(chi(a * b) - chi(a) * chi(b)), 0.0, 1e-14);
  }
  const auto prod = G.g.character(5) * G.g.character(9);
  EXPECT_EQ(prod.index(), 2);
  EXPECT_EQ(G.g.character(5).conj().index(), 7);
}

TEST(GaussSum, NormalizedValues) {
  Group G(101);
  EXPECT_NEAR(std::abs(gauss_sum(G.g.principal()) - cplx{-1.0 / std::sqrt(101.0), 0.0}), 0.0, 1e-14);
  for (std::int64_t t = 1; t < 100; ++t) {
    const auto chi = G.g.character(t);
    EXPECT_NEAR(std::abs(gauss_sum(chi)), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(gauss_sum(chi) - oracle::direct_gauss(chi)), 0.0, 1e-12);
  }
}

TEST(GaussSum, QuadraticModFive) {
  Group G(5);
  EXPECT_NEAR(std::abs(gauss_sum(G.g.quadratic()) - cplx{1.0, 0.0}), 0.0, 1e-14);
  Group H(7);
  EXPECT_NEAR(std::abs(gauss_sum(H.g.quadratic()) - cplx{0.0, 1.0}), 0.0, 1e-14);
}

TEST(Orthogonality, SmallExamples) {
  Group G(7);
  EXPECT_NEAR(std::abs(even_orthogonality_sum(G.g, 1) - 2.0), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(even_orthogonality_sum(G.g, 6) - 2.0), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(even_orthogonality_sum(G.g, 2) + 1.0), 0.0, 1e-13);
  EXPECT_THROW(even_orthogonality_sum(G.g, 14), std::domain_error);
}

TEST(Identities, EvenAndGaussWeighted) {
  for (std::int64_t q : {5, 7, 11, 13, 101}) {
    Group G(q);
    EXPECT_TRUE(check_even_orthogonality(G.g).pass) << q;
    EXPECT_TRUE(check_gauss_weighted(G.g).pass) << q;
  }
}

TEST(Identities, DoubleAndTripleGauss) {
  for (std::int64_t q : {7, 11, 13, 101}) {
    Group G(q);
    const auto d = check_double_gauss(G.g, 5, 11);
    EXPECT_TRUE(d.pass) << q << " " << d.value;
    const auto t = check_triple_gauss(G.g, 5, 11);
    EXPECT_TRUE(t.pass) << q << " " << t.value;
  }
}

TEST(Identities, DoubleGaussTrivialTwistsAtSeven) {
  Group G(7);
  const auto one = G.g.principal();
  for (int parity = 0; parity < 2; ++parity) {
    const auto lhs = double_gauss_average(G.g, one, one, 1, parity);
    const auto rhs = double_gauss_closed_form(G.g, one, one, 1, parity);
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12) << parity;
  }
}
