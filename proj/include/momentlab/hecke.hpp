#pragma once

// Ramanujan tau, its convolution inverse, twisted divisor functions and the
// twist-sum experiments.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "momentlab/characters.hpp"
#include "momentlab/parallel.hpp"
#include "momentlab/trace_fn.hpp"
#include "momentlab/trace_function.hpp"

namespace momentlab {

using int128 = __int128;

inline std::string to_string(int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  std::string s;
  while (v != 0) {
    const auto d = static_cast<int>(v % 10);
    s.push_back(static_cast<char>('0' + (neg ? -d : d)));
    v /= 10;
  }
  if (neg) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

/// Smallest-prime-factor sieve up to n.
inline std::vector<std::uint32_t> spf_sieve(std::size_t n) {
  std::vector<std::uint32_t> spf(n + 1, 0);
  for (std::size_t i = 2; i <= n; ++i) {
    if (spf[i] != 0) continue;
    for (std::size_t j = i; j <= n; j += i) {
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
    }
  }
  return spf;
}

struct HeckeTable {
  static constexpr int weight = 12;
  std::size_t n_max = 0;
  std::vector<int128> tau;      // index 0 unused
  std::vector<double> lambda;   // tau(n) / n^{11/2}

  [[nodiscard]] int128 tau_at(std::size_t n) const {
    if (n == 0 || n > n_max) throw std::out_of_range("HeckeTable: index out of range");
    return tau[n];
  }
};

/// tau(n) as the coefficient of q^n in q prod (1 - q^m)^24, computed as
/// (prod (1 - q^m)^3)^8 with Jacobi's series sum (-1)^k (2k+1) q^{k(k+1)/2}.
inline HeckeTable build_tau(std::size_t n_max) {
  if (n_max < 1 || n_max > 1000000) throw std::invalid_argument("build_tau: need 1 <= N_max <= 10^6");
  const std::size_t deg = n_max - 1;
  std::vector<std::pair<std::size_t, int128>> jacobi;
  for (std::size_t k = 0; k * (k + 1) / 2 <= deg; ++k) {
    jacobi.emplace_back(k * (k + 1) / 2, static_cast<int128>((k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(2 * k + 1)));
  }
  std::vector<int128> cur(deg + 1, 0);
  for (const auto& [e, c] : jacobi) cur[e] = c;
  for (int step = 1; step < 8; ++step) {
    std::vector<int128> next(deg + 1, 0);
    for (std::size_t i = 0; i <= deg; ++i) {
      if (cur[i] == 0) continue;
      for (const auto& [e, c] : jacobi) {
        if (i + e > deg) break;
        next[i + e] += cur[i] * c;
      }
    }
    cur = std::move(next);
  }
  HeckeTable t;
  t.n_max = n_max;
  t.tau.assign(n_max + 1, 0);
  t.lambda.assign(n_max + 1, 0.0);
  for (std::size_t n = 1; n <= n_max; ++n) {
    t.tau[n] = cur[n - 1];
    t.lambda[n] = static_cast<double>(static_cast<long double>(cur[n - 1]) /
                                      std::pow(static_cast<long double>(n), 5.5L));
  }
  return t;
}

/// Convolution inverse of lambda: mu(p) = -lambda(p), mu(p^2) = 1, mu(p^j) = 0 for j >= 3.
struct MuTable {
  std::vector<double> mu;  // index 0 unused

  [[nodiscard]] double operator()(std::size_t n) const { return mu.at(n); }
};

inline MuTable mu_f(const HeckeTable& table) {
  const auto n_max = table.n_max;
  const auto spf = spf_sieve(n_max);
  MuTable out;
  out.mu.assign(n_max + 1, 0.0);
  out.mu[1] = 1.0;
  for (std::size_t n = 2; n <= n_max; ++n) {
    const std::size_t p = spf[n];
    std::size_t m = n;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    const double local = e == 1 ? -table.lambda[p] : (e == 2 ? 1.0 : 0.0);
    out.mu[n] = local * out.mu[m];
  }
  return out;
}

/// lambda_omega(n, it) = sum_{ab = n} omega(a) (a/b)^{it}
inline cplx twisted_divisor(const DirichletCharacter& omega, std::int64_t n, double t) {
  if (n < 1) throw std::invalid_argument("twisted_divisor: n must be >= 1");
  cplx s{};
  for (std::int64_t a = 1; a * a <= n; ++a) {
    if (n % a != 0) continue;
    const auto b = n / a;
    const double l = std::log(static_cast<double>(a) / static_cast<double>(b));
    s += omega(a) * std::polar(1.0, t * l);
    if (a != b) s += omega(b) * std::polar(1.0, -t * l);
  }
  return s;
}

/// Coefficient families for twist sums.
struct CuspCoefficients {
  const HeckeTable* table = nullptr;
};
struct EisensteinCoefficients {
  DirichletCharacter omega;
  double t = 0.0;
};
using TwistCoefficients = std::variant<CuspCoefficients, EisensteinCoefficients>;

struct TwistSumResult {
  cplx value;
  double ratio = 0.0;  // |S| / (M q) with M = sup |K|
  std::size_t terms = 0;
};

/// S = sum_n coeff(n) K(n) V(n/X) over the support of V.
inline TwistSumResult twist_sum(const TwistCoefficients& coeff, const TraceFunction& k, const SmoothCutoff& v,
                                double X) {
  const auto q = static_cast<double>(k.q());
  if (!(X > 0.0) || X > 10.0 * q) throw std::invalid_argument("twist_sum: need 0 < X <= 10 q");
  const auto lo = static_cast<std::size_t>(std::max(1.0, std::floor(v.P() * X)));
  const auto hi = static_cast<std::size_t>(std::ceil(2.0 * v.P() * X));
  if (const auto* c = std::get_if<CuspCoefficients>(&coeff); c != nullptr && hi > c->table->n_max) {
    throw std::invalid_argument("twist_sum: Hecke table shorter than the summation range");
  }
  // Fixed block order keeps the sum independent of the thread count.
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (hi - lo + kBlock) / kBlock;
  CVec partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    cplx s{};
    const std::size_t start = lo + b * kBlock;
    const std::size_t end = std::min(hi, start + kBlock - 1);
    for (std::size_t n = start; n <= end; ++n) {
      const double w = v(static_cast<double>(n) / X);
      if (w == 0.0) continue;
      cplx a;
      if (const auto* c = std::get_if<CuspCoefficients>(&coeff)) {
        a = c->table->lambda[n];
      } else {
        const auto& e = std::get<EisensteinCoefficients>(coeff);
        a = twisted_divisor(e.omega, static_cast<std::int64_t>(n), e.t);
      }
      s += a * k(static_cast<std::int64_t>(n)) * w;
    }
    partial[b] = s;
  });
  TwistSumResult out;
  for (const auto& p : partial) out.value += p;
  out.terms = hi - lo + 1;
  out.ratio = std::abs(out.value) / (k.sup_bound() * q);
  return out;
}

}  // namespace momentlab
