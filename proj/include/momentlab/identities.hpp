#pragma once

// Exact-identity checks shared by `verify` and the acceptance suite. Each
// returns the worst observed defect against its tolerance.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "momentlab/characters.hpp"
#include "momentlab/exp_sums.hpp"
#include "momentlab/l_values.hpp"
#include "momentlab/oracle.hpp"

namespace momentlab {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline CheckResult make_check(std::string name, double value, double tol) {
  return {std::move(name), value, tol, value <= tol};
}

/// Pairs of character indices drawn from a seeded generator.
inline std::vector<std::pair<std::int64_t, std::int64_t>> random_twists(std::int64_t q, std::size_t count,
                                                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> dist(0, q - 2);
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::size_t i = 0; i < count; ++i) {
    const auto a = dist(rng);
    const auto b = dist(rng);
    out.emplace_back(a, b);
  }
  return out;
}

inline CheckResult check_even_orthogonality(const CharacterGroup& g) {
  double worst = 0.0;
  for (std::int64_t a = 1; a < g.q(); ++a) {
    worst = std::max(worst, std::abs(even_orthogonality_sum(g, a) - even_orthogonality_closed_form(g.q(), a)));
  }
  return make_check("even orthogonality q=" + std::to_string(g.q()), worst, 1e-9);
}

inline CheckResult check_gauss_weighted(const CharacterGroup& g) {
  double worst = 0.0;
  for (int kappa = 0; kappa < 2; ++kappa) {
    for (std::int64_t m = 1; m < g.q(); ++m) {
      worst = std::max(worst, std::abs(gauss_weighted_average(g, kappa, m) -
                                       gauss_weighted_closed_form(g.context(), kappa, m)));
    }
  }
  return make_check("eps-weighted average q=" + std::to_string(g.q()), worst, 1e-9);
}

inline CheckResult check_double_gauss(const CharacterGroup& g, std::size_t pairs, std::uint64_t seed) {
  double worst = 0.0;
  for (const auto& [t1, t2] : random_twists(g.q(), pairs, seed)) {
    const auto w1 = g.character(t1), w2 = g.character(t2);
    for (int parity = 0; parity < 2; ++parity) {
      for (std::int64_t m = 1; m < g.q(); ++m) {
        worst = std::max(worst, std::abs(double_gauss_average(g, w1, w2, m, parity) -
                                         double_gauss_closed_form(g, w1, w2, m, parity)));
      }
    }
  }
  return make_check("double Gauss average q=" + std::to_string(g.q()), worst, 1e-8);
}

/// Residual in units of q^{-3/2}.
inline CheckResult check_triple_gauss(const CharacterGroup& g, std::size_t pairs, std::uint64_t seed) {
  double worst = 0.0;
  const double unit = std::pow(static_cast<double>(g.q()), -1.5);
  for (const auto& [t1, t2] : random_twists(g.q(), pairs, seed)) {
    const auto w1 = g.character(t1), w2 = g.character(t2);
    const auto kl3 = kloosterman_table(g, KloostermanSpec{3, {t1, t2, 0}});
    for (int parity = 0; parity < 2; ++parity) {
      for (std::int64_t m = 1; m < g.q(); ++m) {
        const auto r = triple_gauss_average(g, w1, w2, m, parity) - triple_gauss_closed_form(kl3, g.context(), m, parity);
        worst = std::max(worst, std::abs(r) / unit);
      }
    }
  }
  return make_check("triple Gauss residual / q^-3/2, q=" + std::to_string(g.q()), worst, 5.0);
}

inline CheckResult check_dft(const PrimeContext& ctx, std::uint64_t seed) {
  std::mt19937_64 rng(seed + static_cast<std::uint64_t>(ctx.q()));
  std::normal_distribution<double> nd;
  CVec v(static_cast<std::size_t>(ctx.q()));
  for (auto& x : v) x = {nd(rng), nd(rng)};
  const auto fast = dft_prime(v, ctx);
  const auto slow = oracle::naive_dft(v);
  double worst = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(fast[i] - slow[i]));
  return make_check("Rader vs naive DFT q=" + std::to_string(ctx.q()), worst, 1e-9);
}

inline CheckResult check_parseval(const PrimeContext& ctx, std::uint64_t seed) {
  std::mt19937_64 rng(seed + 7 * static_cast<std::uint64_t>(ctx.q()));
  std::normal_distribution<double> nd;
  CVec v(static_cast<std::size_t>(ctx.q()));
  for (auto& x : v) x = {nd(rng), nd(rng)};
  const auto f = dft_prime(v, ctx);
  double a = 0.0, b = 0.0;
  for (const auto& x : v) a += std::norm(x);
  for (const auto& x : f) b += std::norm(x);
  b /= static_cast<double>(ctx.q());
  return make_check("Parseval relative defect q=" + std::to_string(ctx.q()), std::abs(a - b) / a, 1e-10);
}

/// max_a |Kl_k(a)| - k over random twist tuples; passes when <= 1e-9.
inline CheckResult check_weil(const CharacterGroup& g, int k, std::size_t tuples, std::uint64_t seed) {
  std::mt19937_64 rng(seed + static_cast<std::uint64_t>(g.q()) * 31U + static_cast<std::uint64_t>(k));
  std::uniform_int_distribution<std::int64_t> dist(0, g.q() - 2);
  double worst = -static_cast<double>(k);
  for (std::size_t i = 0; i < tuples; ++i) {
    KloostermanSpec spec{k, {}};
    for (int j = 0; j < k; ++j) spec.twists.push_back(dist(rng));
    worst = std::max(worst, weil_scan(g, spec) - k);
  }
  return make_check("Weil bound Kl" + std::to_string(k) + " q=" + std::to_string(g.q()) + " (max - k)", worst, 1e-9);
}

/// |S_w(m,n;c)| / (tau(c) (m,n,c)^{1/2} c^{1/2}) on random triples.
inline CheckResult check_classical_weil(const CharacterGroup& g, std::int64_t c, std::size_t triples,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed + static_cast<std::uint64_t>(c));
  std::uniform_int_distribution<std::int64_t> dist(0, 4 * c);
  std::uniform_int_distribution<std::int64_t> tdist(0, g.q() - 2);
  double worst = 0.0;
  for (std::size_t i = 0; i < triples; ++i) {
    const auto m = dist(rng), n = dist(rng);
    const auto omega = g.character(tdist(rng));
    const auto s = classical_kloosterman(omega, m, n, c);
    worst = std::max(worst, std::abs(s) / classical_weil_bound(m, n, c));
  }
  return make_check("classical Weil ratio c=" + std::to_string(c), worst, 1.0 + 1e-9);
}

inline CheckResult check_functional_equation(const CharacterGroup& g, std::size_t count, cplx s = {0.6, 0.3}) {
  double worst = 0.0;
  const auto n = static_cast<std::size_t>(g.size() - 1);
  for (std::size_t i = 0; i < std::min(count, n); ++i) {
    const auto t = static_cast<std::int64_t>(1 + i * n / std::min(count, n));
    worst = std::max(worst, functional_equation_defect(g.character(t), s));
  }
  return make_check("functional equation q=" + std::to_string(g.q()), worst, 1e-8);
}

inline CheckResult check_afe_oracle(const CharacterGroup& g, Damping damping = kDefaultDamping) {
  const auto batch = DirichletAfe(g, damping).batch();
  double worst = 0.0;
  for (std::int64_t t = 1; t < g.size(); ++t) {
    worst = std::max(worst, std::abs(batch[static_cast<std::size_t>(t)] - hurwitz_oracle(g.character(t), 0.5)));
  }
  return make_check(std::string("AFE vs Hurwitz oracle q=") + std::to_string(g.q()) + " " + to_string(damping), worst,
                    1e-8);
}

inline CheckResult check_q_independence(const CharacterGroup& g) {
  const auto a = DirichletAfe(g, kDefaultDamping).batch();
  const auto b = DirichletAfe(g, kAlternateDamping).batch();
  double worst = 0.0;
  for (std::size_t t = 1; t < a.size(); ++t) worst = std::max(worst, std::abs(a[t] - b[t]));
  return make_check("Q-independence q=" + std::to_string(g.q()), worst, 1e-8);
}

/// The suite run by `verify identities --q p`.
inline std::vector<CheckResult> identity_suite(std::int64_t q, std::uint64_t seed) {
  auto ctx = build_context(q);
  CharacterGroup g(ctx);
  std::vector<CheckResult> out;
  out.push_back(check_dft(*ctx, seed));
  out.push_back(check_parseval(*ctx, seed));
  out.push_back(check_even_orthogonality(g));
  out.push_back(check_gauss_weighted(g));
  if (q >= 5) {
    out.push_back(check_double_gauss(g, 5, seed));
    out.push_back(check_triple_gauss(g, 5, seed));
  }
  out.push_back(check_weil(g, 2, 5, seed));
  if (q <= 400) out.push_back(check_weil(g, 3, 5, seed));
  if (q <= 500) {
    out.push_back(check_afe_oracle(g));
    out.push_back(check_q_independence(g));
    out.push_back(check_functional_equation(g, 20));
  }
  return out;
}

}  // namespace momentlab
