#include <numeric>

#include "common.hpp"

using namespace momentlab;
using momentlab::test::Group;

namespace {

const HeckeTable& table() {
  static const HeckeTable t = build_tau(100000);
  return t;
}

}  // namespace

TEST(Tau, KnownValues) {
  const auto& t = table();
  EXPECT_EQ(to_string(t.tau_at(1)), "1");
  EXPECT_EQ(to_string(t.tau_at(2)), "-24");
  EXPECT_EQ(to_string(t.tau_at(12)), "-370944");
  EXPECT_EQ(to_string(t.tau_at(100)), "37534859200");
  EXPECT_THROW((void)t.tau_at(0), std::out_of_range);
  EXPECT_THROW((void)t.tau_at(100001), std::out_of_range);
}

TEST(Tau, MatchesDirectOracle) {
  const auto& fx = momentlab::test::fixtures()["tau_direct_1_to_9"];
  const auto direct = oracle::tau_direct(60);
  for (std::size_t n = 1; n <= 60; ++n) EXPECT_EQ(to_string(table().tau_at(n)), to_string(direct[n])) << n;
  for (std::size_t n = 1; n <= 9; ++n) EXPECT_EQ(to_string(table().tau_at(n)), fx[n - 1].get<std::string>());
}

TEST(Tau, HeckeRelationExact) {
  const auto& t = table();
  for (std::int64_t m = 1; m <= 300; ++m) {
    for (std::int64_t n = 1; n <= 300; ++n) {
      const auto g = std::gcd(m, n);
      int128 rhs = 0;
      for (std::int64_t d = 1; d <= g; ++d) {
        if (g % d != 0) continue;
        int128 d11 = 1;
        for (int i = 0; i < 11; ++i) d11 *= d;
        rhs += d11 * t.tau_at(static_cast<std::size_t>(m * n / (d * d)));
      }
      ASSERT_TRUE(t.tau_at(static_cast<std::size_t>(m)) * t.tau_at(static_cast<std::size_t>(n)) == rhs) << m << " " << n;
    }
  }
}

TEST(Lambda, PrimeSquareRelation) {
  const auto& t = table();
  const auto spf = spf_sieve(100);
  for (std::size_t p = 2; p <= 100; ++p) {
    if (spf[p] != p) continue;
    EXPECT_NEAR(t.lambda[p] * t.lambda[p] - t.lambda[p * p], 1.0, 1e-10) << p;
  }
}

TEST(Lambda, DeligneBound) {
  const auto& t = table();
  for (std::int64_t n = 1; n <= 10000; ++n) {
    EXPECT_LE(std::abs(t.lambda[static_cast<std::size_t>(n)]), static_cast<double>(divisor_count(n)) + 1e-12) << n;
  }
}

TEST(Mu, InverseOfLambda) {
  const auto& t = table();
  const auto mu = mu_f(t);
  EXPECT_DOUBLE_EQ(mu(1), 1.0);
  EXPECT_DOUBLE_EQ(mu(2), -t.lambda[2]);
  EXPECT_DOUBLE_EQ(mu(4), 1.0);
  EXPECT_DOUBLE_EQ(mu(8), 0.0);
  EXPECT_NEAR(mu(6), t.lambda[2] * t.lambda[3], 1e-15);
  for (std::size_t n = 1; n <= 10000; ++n) {
    double s = 0.0;
    for (std::size_t d = 1; d * d <= n; ++d) {
      if (n % d != 0) continue;
      s += mu(d) * t.lambda[n / d];
      if (d * d != n) s += mu(n / d) * t.lambda[d];
    }
    EXPECT_NEAR(s, n == 1 ? 1.0 : 0.0, 1e-9) << n;
  }
}

TEST(TwistedDivisor, Values) {
  Group G(13);
  const auto one = G.g.principal();
  EXPECT_NEAR(std::abs(twisted_divisor(one, 12, 0.0) - cplx{6.0, 0.0}), 0.0, 1e-13);
  const auto w = G.g.character(5);
  for (std::int64_t p : {2, 3, 5, 7}) {
    const cplx expected = std::polar(1.0, -0.0) + w(p);
    EXPECT_NEAR(std::abs(twisted_divisor(w, p, 0.0) - expected), 0.0, 1e-13);
  }
  // multiplicative in n
  for (auto [a, b] : {std::pair<std::int64_t, std::int64_t>{4, 9}, {5, 8}, {7, 11}}) {
    EXPECT_NEAR(std::abs(twisted_divisor(w, a * b, 1.3) - twisted_divisor(w, a, 1.3) * twisted_divisor(w, b, 1.3)), 0.0,
                1e-12);
  }
  EXPECT_THROW(twisted_divisor(w, 0, 0.0), std::invalid_argument);
}

TEST(TwistSum, DeterministicAndBounded) {
  const auto row = twist_sum_experiment(211, "kl3", "tau");
  const auto again = twist_sum_experiment(211, "kl3", "tau");
  EXPECT_EQ(row.result.value, again.result.value);
  const auto& fx = momentlab::test::fixtures()["twist_sum_kl3_tau"]["rows"][0];
  EXPECT_NEAR(std::abs(row.result.value - momentlab::test::fixture_complex(fx["value"])), 0.0, 1e-9);
  EXPECT_LT(row.result.ratio, 1.0);
  const auto div = twist_sum_experiment(211, "kl2", "divisor:3:1.5");
  EXPECT_GT(div.result.terms, 0U);
  EXPECT_THROW(twist_sum_experiment(211, "kl3", "bogus"), std::invalid_argument);
}

TEST(TwistedDivisor, UnitAndElementaryRelation) {
  Group G(101);
  for (std::int64_t t : {0, 3, 50}) {
    const auto w = G.g.character(t);
    EXPECT_NEAR(std::abs(twisted_divisor(w, 1, 0.7) - cplx{1.0, 0.0}), 0.0, 1e-14);
    for (std::int64_t p : {2, 3, 5, 7, 97}) {
      const cplx wb = std::conj(w(p));
      const auto lp = twisted_divisor(w, p, 0.7);
      EXPECT_NEAR(std::abs(lp * lp * wb - wb * twisted_divisor(w, p * p, 0.7) - cplx{1.0, 0.0}), 0.0, 1e-12);
    }
  }
  EXPECT_NEAR(std::abs(twisted_divisor(G.g.principal(), 13, 0.0) - cplx{2.0, 0.0}), 0.0, 1e-14);
}

TEST(TwistedDivisor, MultiplicativeUpToThousand) {
  Group G(101);
  const auto w = G.g.character(7);
  for (std::int64_t m = 1; m <= 40; ++m) {
    for (std::int64_t n = 1; m * n <= 1000; ++n) {
      if (std::gcd(m, n) != 1) continue;
      const auto lhs = twisted_divisor(w, m * n, 2.1);
      EXPECT_NEAR(std::abs(lhs - twisted_divisor(w, m, 2.1) * twisted_divisor(w, n, 2.1)), 0.0, 1e-11);
    }
  }
}

TEST(TwistSum, ConstantKernelIsPlainDivisorSum) {
  Group G(101);
  const auto tau = build_tau(10);
  const SmoothCutoff v(1.0);
  const auto r = twist_sum(EisensteinCoefficients{G.g.principal(), 0.0}, make_kernel(G.g, "one"), v, 101.0);
  double direct = 0.0;
  for (std::int64_t n = 101; n <= 202; ++n) direct += static_cast<double>(divisor_count(n)) * v(n / 101.0);
  EXPECT_NEAR(std::abs(r.value - cplx{direct, 0.0}), 0.0, 1e-9);
  EXPECT_THROW(twist_sum(CuspCoefficients{&tau}, make_kernel(G.g, "one"), v, 101.0), std::invalid_argument);
  EXPECT_THROW(twist_sum(CuspCoefficients{&tau}, make_kernel(G.g, "one"), v, 2000.0), std::invalid_argument);
}

// The additive kernel e(n/q) is smooth on the support n ~ q, so cusp
// coefficients cancel against it even harder than against Kl_3.
TEST(TwistSum, AdditiveKernelReported) {
  const auto kl3 = twist_sum_experiment(1009, "kl3", "tau");
  const auto add = twist_sum_experiment(1009, "additive", "tau");
  RecordProperty("kl3_ratio", std::to_string(kl3.result.ratio));
  RecordProperty("additive_ratio", std::to_string(add.result.ratio));
  EXPECT_LT(add.result.ratio, 1.0);
  EXPECT_LT(kl3.result.ratio, 1.0);
}
