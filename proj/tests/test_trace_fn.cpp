#include <set>

#include "common.hpp"

using namespace momentlab;
using momentlab::test::Group;

TEST(Fourier, Involution) {
  Group G(101);
  const auto k = make_kernel(G.g, "kl3");
  const auto kk = fourier(fourier(k, *G.ctx), *G.ctx);
  for (std::int64_t x = 0; x < 101; ++x) EXPECT_NEAR(std::abs(kk(x) - k(-x)), 0.0, 1e-10);
  EXPECT_NEAR(fourier(k, *G.ctx).l2_norm_squared(), k.l2_norm_squared(), 1e-10);
}

TEST(Fourier, DeltaAndAdditive) {
  Group G(13);
  const auto d = fourier(make_kernel(G.g, "delta"), *G.ctx);
  for (std::int64_t x = 0; x < 13; ++x) EXPECT_NEAR(std::abs(d(x) - cplx{1.0 / std::sqrt(13.0), 0.0}), 0.0, 1e-14);
  const auto a = fourier(make_kernel(G.g, "additive"), *G.ctx);
  EXPECT_NEAR(std::abs(a(-1)), std::sqrt(13.0), 1e-12);
  EXPECT_NEAR(a.l2_norm_squared(), 13.0, 1e-10);
}

TEST(Kernels, UnknownNameAndSupBound) {
  Group G(7);
  EXPECT_THROW(make_kernel(G.g, "nope"), std::invalid_argument);
  EXPECT_THROW(TraceFunction(7, CVec(6), "short"), std::invalid_argument);
  EXPECT_THROW(TraceFunction(7, CVec(7, 2.0), "bad", 1.0), std::invalid_argument);
  EXPECT_DOUBLE_EQ(make_kernel(G.g, "kl3").sup_bound(), 3.0);
}

TEST(ProjMatrix, Normalization) {
  auto ctx = build_context(13);
  const ProjMatrix a(2, 4, 6, 10, *ctx), b(1, 2, 3, 5, *ctx);
  EXPECT_EQ(a.a(), b.a());
  EXPECT_EQ(a.b(), b.b());
  EXPECT_EQ(a.c(), b.c());
  EXPECT_EQ(a.d(), b.d());
  const ProjMatrix w(0, 5, 5, 0, *ctx);
  EXPECT_EQ(w.c(), 1);
  EXPECT_EQ(w.b(), 1);
  EXPECT_THROW(ProjMatrix(1, 2, 2, 4, *ctx), std::invalid_argument);
}

TEST(Classify, Examples) {
  auto ctx = build_context(13);
  const auto par = classify(ProjMatrix(1, 1, 0, 1, *ctx), *ctx);
  EXPECT_EQ(par.tag, MatrixTag::parabolic);
  ASSERT_EQ(par.fixed_points.size(), 1U);
  EXPECT_TRUE(par.fixed_points[0].infinity);
  EXPECT_TRUE(par.in_B);

  const auto split = classify(ProjMatrix(5, 0, 0, 1, *ctx), *ctx);
  EXPECT_EQ(split.tag, MatrixTag::torus_split);
  EXPECT_TRUE(split.in_B);
  ASSERT_EQ(split.fixed_points.size(), 2U);
  EXPECT_EQ(split.fixed_points[0], (P1Point{false, 0}));
  EXPECT_TRUE(split.fixed_points[1].infinity);

  const auto weyl = classify(ProjMatrix(0, 1, 1, 0, *ctx), *ctx);
  EXPECT_EQ(weyl.tag, MatrixTag::normalizer_minus_torus);
  EXPECT_TRUE(weyl.in_Bw);
  EXPECT_TRUE(weyl.in_wB);
  EXPECT_FALSE(weyl.in_B);

  EXPECT_EQ(classify(ProjMatrix(1, 0, 0, 1, *ctx), *ctx).tag, MatrixTag::upper_triangular_B);

  // x^2 - x + 1 has no root mod 11 (disc -3 is a nonsquare).
  auto c11 = build_context(11);
  const auto ns = classify(ProjMatrix(1, -1, 1, 0, *c11), *c11);
  EXPECT_EQ(ns.tag, MatrixTag::torus_nonsplit);
  EXPECT_TRUE(ns.fixed_points.empty());
  EXPECT_TRUE(ns.conjugate_fixed_pair.has_value());
}

TEST(Classify, FixedPointsAreFixed) {
  auto ctx = build_context(11);
  for (const auto& g : enumerate_pgl2(*ctx)) {
    const auto c = classify(g, *ctx);
    for (const auto& p : c.fixed_points) EXPECT_EQ(g.act(p, *ctx), p);
    if (c.tag == MatrixTag::torus_split) {
      EXPECT_EQ(c.fixed_points.size(), 2U);
    }
    if (c.tag == MatrixTag::parabolic) {
      EXPECT_EQ(c.fixed_points.size(), 1U);
    }
  }
}

TEST(Pgl2, EnumerationIsComplete) {
  for (std::int64_t q : {5, 7, 13}) {
    auto ctx = build_context(q);
    const auto all = enumerate_pgl2(*ctx);
    EXPECT_EQ(static_cast<std::int64_t>(all.size()), q * q * q - q);
    std::set<std::array<std::int64_t, 4>> seen;
    for (const auto& g : all) seen.insert({g.a(), g.b(), g.c(), g.d()});
    EXPECT_EQ(seen.size(), all.size());
  }
}

TEST(Correlation, IdentityIsNorm) {
  Group G(13);
  const auto k = make_kernel(G.g, "kl3");
  const ProjMatrix id(1, 0, 0, 1, *G.ctx);
  EXPECT_NEAR(std::abs(correlation(k, G.g.principal(), id) - cplx{k.l2_norm_squared(), 0.0}), 0.0, 1e-9);
}

TEST(Correlation, ScanMatchesFixture) {
  const auto& fx = momentlab::test::fixtures()["correlation_kl3_q13"];
  Group G(13);
  const auto k = make_kernel(G.g, "kl3");
  const double M = median_threshold(k, G.g.principal());
  EXPECT_NEAR(M, fx["M"].get<double>(), 1e-12);
  const auto scan = correlation_scan(k, G.g.principal(), M, ScanMode::full());
  EXPECT_EQ(scan.visited, 13U * 13U * 13U - 13U);
  EXPECT_EQ(scan.exceeding, fx["exceeding"].get<std::size_t>());
  EXPECT_EQ(scan.parabolic_exceeding, fx["parabolic_exceeding"].get<std::size_t>());
  for (auto tag : kAllMatrixTags) {
    const auto it = scan.exceeding_histogram.find(tag);
    const std::size_t n = it == scan.exceeding_histogram.end() ? 0 : it->second;
    EXPECT_EQ(n, fx["exceeding_histogram"][to_string(tag)].get<std::size_t>()) << to_string(tag);
  }
  std::size_t total = 0;
  for (const auto& [tag, n] : scan.histogram) total += n;
  EXPECT_EQ(total, scan.visited);
  const double ceiling = k.sup_bound() * k.sup_bound() * 13.0 + 1e-6;
  for (const auto& r : scan.records) EXPECT_LE(std::abs(r.value), ceiling);
}

TEST(Correlation, ScanRefusesLargeExhaustive) {
  Group G(19);
  EXPECT_THROW(correlation_scan(make_kernel(G.g, "kl2"), G.g.principal(), 2.0, ScanMode::full()),
               std::invalid_argument);
  const auto s = correlation_scan(make_kernel(G.g, "kl2"), G.g.principal(), 2.0, ScanMode::sample(50, 3));
  EXPECT_EQ(s.visited, 50U);
}

TEST(Correlation, AdditiveKernelBreaksGoodness) {
  Group G(11);
  const auto scan = correlation_scan(make_kernel(G.g, "additive"), G.g.principal(), 1.0, ScanMode::full());
  EXPECT_FALSE(scan.fits_goodness);
  EXPECT_GT(scan.parabolic_exceeding, 0U);
}

TEST(SmoothCutoff, SupportAndDerivativeBounds) {
  const SmoothCutoff f(2.0);
  EXPECT_EQ(f(1.9), 0.0);
  EXPECT_EQ(f(4.1), 0.0);
  EXPECT_GT(f(3.0), 0.0);
  for (double x = 2.0; x <= 4.0; x += 0.01) {
    for (std::size_t nu = 0; nu < f.C().size(); ++nu) {
      EXPECT_LE(std::abs(std::pow(x, static_cast<double>(nu)) * f.derivative(x, nu)), f.C()[nu] * (1.0 + 1e-9));
    }
  }
  const double h = 1e-5;
  EXPECT_NEAR((f(3.1 + h) - f(3.1 - h)) / (2 * h), f.derivative(3.1, 1), 1e-6);
}

TEST(Polya, ConstantKernel) {
  Group G(101);
  const SmoothCutoff f(1.0);
  const double N = 50.0;
  const auto r = polya_check(make_kernel(G.g, "one"), f, N, *G.ctx);
  double sum = 0.0;
  for (int n = 50; n <= 100; ++n) sum += f(n / N);
  EXPECT_NEAR(std::abs(r.direct - cplx{sum, 0.0}), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(r.completed - r.direct), 0.0, 1e-6 * N);
}

TEST(Polya, DeltaAndKl3) {
  Group G(101);
  const SmoothCutoff f(1.0);
  const auto d = polya_check(make_kernel(G.g, "delta"), f, 101.0 * 3.0, *G.ctx);
  EXPECT_NEAR(std::abs(d.completed - d.direct), 0.0, 1e-6 * 303.0);
  const auto k = make_kernel(G.g, "kl3");
  const auto r = polya_check(k, f, 101.0, *G.ctx);
  EXPECT_NEAR(std::abs(r.completed - r.direct), 0.0, 1e-6 * 101.0 * 3.0);
}

TEST(Bilinear, RatiosBelowOne) {
  Group G(1009);
  const auto r = bilinear_experiment(make_kernel(G.g, "kl3"), 40, 40, 1);
  EXPECT_LT(r.ratio, 1.0);
  EXPECT_LT(r.type1_ratio, 1.0);
  const auto again = bilinear_experiment(make_kernel(G.g, "kl3"), 40, 40, 1);
  EXPECT_EQ(r.general_sum, again.general_sum);
}
