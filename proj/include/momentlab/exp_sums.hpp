#pragma once

// Twisted hyper-Kloosterman sums over F_q and classical twisted Kloosterman
// sums S_omega(m, n; c).
//
//   Kl_k(a; w_1..w_k) = q^{-(k-1)/2} sum_{x_1...x_k = a} prod w_i(x_i) e((x_1+...+x_k)/q)

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "momentlab/characters.hpp"
#include "momentlab/trace_function.hpp"

namespace momentlab {

struct KloostermanSpec {
  int k = 2;
  std::vector<std::int64_t> twists;  // character indices, one per coordinate

  static KloostermanSpec untwisted(int k) { return {k, std::vector<std::int64_t>(static_cast<std::size_t>(k), 0)}; }

  void validate() const {
    if (k < 1 || k > 8) throw std::invalid_argument("KloostermanSpec: rank must lie in [1, 8]");
    if (static_cast<int>(twists.size()) != k) throw std::invalid_argument("KloostermanSpec: need exactly k twists");
  }

  [[nodiscard]] std::string describe() const {
    std::string s = "kl" + std::to_string(k);
    bool twisted = std::any_of(twists.begin(), twists.end(), [](auto t) { return t != 0; });
    if (twisted) {
      s += "(";
      for (std::size_t i = 0; i < twists.size(); ++i) s += (i ? "," : "") + std::to_string(twists[i]);
      s += ")";
    }
    return s;
  }
};

/// Value at a = 0 of a table built by Fourier recursion. The direct
/// definition only covers a != 0.
enum class ZeroConvention {
  fourier_completed,  // last step evaluated at 0, principal w_k read as 1 there
  extension_by_zero,
};

/// Direct O(q^{k-1}) enumeration.
inline cplx kloosterman_direct(const CharacterGroup& group, const KloostermanSpec& spec, std::int64_t a) {
  spec.validate();
  const auto& ctx = group.context();
  const auto q = ctx.q();
  if (ctx.reduce(a) == 0) throw std::domain_error("kloosterman_direct: a must be nonzero mod q");
  const double work = std::pow(static_cast<double>(q - 1), spec.k - 1);
  if (work > 2e8) throw std::invalid_argument("kloosterman_direct: q^(k-1) too large for direct enumeration");

  std::vector<DirichletCharacter> w;
  for (auto t : spec.twists) w.push_back(group.character(t));

  // Enumerate x_1..x_{k-1} by discrete log; x_k is forced.
  const int free_vars = spec.k - 1;
  std::vector<std::int64_t> logs(static_cast<std::size_t>(free_vars), 0);
  const auto la = ctx.dlog(a);
  cplx total{};
  while (true) {
    std::int64_t log_sum = 0;
    std::int64_t additive = 0;
    cplx weight{1.0, 0.0};
    for (int i = 0; i < free_vars; ++i) {
      const auto li = logs[static_cast<std::size_t>(i)];
      log_sum += li;
      weight *= w[static_cast<std::size_t>(i)].at_log(li);
      additive += ctx.gpow(li);
    }
    const auto lk = reduce_mod(la - log_sum, q - 1);
    weight *= w.back().at_log(lk);
    additive += ctx.gpow(lk);
    total += weight * ctx.e(additive);

    int pos = 0;
    while (pos < free_vars) {
      auto& li = logs[static_cast<std::size_t>(pos)];
      if (++li < q - 1) break;
      li = 0;
      ++pos;
    }
    if (pos == free_vars) break;
  }
  return total / std::pow(static_cast<double>(q), (spec.k - 1) / 2.0);
}

/// Full table over F_q by the recursion
///   Kl_j(a) = w_j(a) FT(x -> w_j(x) Kl_{j-1}(1/x))(a),  Kl_{j-1}(1/0) := 0.
inline TraceFunction kloosterman_table(const CharacterGroup& group, const KloostermanSpec& spec,
                                       ZeroConvention zero = ZeroConvention::fourier_completed) {
  spec.validate();
  const auto& ctx = group.context();
  const auto q = ctx.q();
  const auto uq = static_cast<std::size_t>(q);
  const double inv_sqrt_q = 1.0 / ctx.sqrt_q();

  const auto w1 = group.character(spec.twists[0]);
  CVec cur(uq);
  for (std::int64_t a = 1; a < q; ++a) cur[static_cast<std::size_t>(a)] = w1(a) * ctx.e(a);
  cur[0] = (zero == ZeroConvention::fourier_completed && w1.is_principal()) ? cplx{1.0, 0.0} : cplx{};

  for (int j = 2; j <= spec.k; ++j) {
    const auto wj = group.character(spec.twists[static_cast<std::size_t>(j - 1)]);
    CVec f(uq, cplx{});
    for (std::int64_t x = 1; x < q; ++x) f[static_cast<std::size_t>(x)] = wj(x) * cur[static_cast<std::size_t>(ctx.inverse(x))];
    auto ft = dft_prime(f, ctx);
    for (std::int64_t a = 1; a < q; ++a) ft[static_cast<std::size_t>(a)] *= wj(a) * inv_sqrt_q;
    if (zero == ZeroConvention::fourier_completed && wj.is_principal()) {
      ft[0] *= inv_sqrt_q;
    } else {
      ft[0] = cplx{};
    }
    cur = std::move(ft);
  }
  // Deligne's bound |Kl_k| <= k holds on F_q^x; the completed value at 0 is
  // at most k as well for these recursions.
  return TraceFunction(q, std::move(cur), spec.describe(), static_cast<double>(spec.k));
}

/// max over a in F_q^x of |Kl_k(a)|.
inline double weil_scan(const CharacterGroup& group, const KloostermanSpec& spec) {
  const auto table = kloosterman_table(group, spec);
  double m = 0.0;
  for (std::int64_t a = 1; a < group.q(); ++a) m = std::max(m, std::abs(table(a)));
  return m;
}

// ---------------------------------------------------------------------------
// Classical sums.

inline std::int64_t gcd3(std::int64_t a, std::int64_t b, std::int64_t c) {
  return std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c));
}

inline std::int64_t divisor_count(std::int64_t n) {
  if (n <= 0) throw std::invalid_argument("divisor_count: n must be positive");
  std::int64_t count = 0;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) count += (d * d == n) ? 1 : 2;
  }
  return count;
}

/// Inverse of d modulo c, requires gcd(d, c) = 1.
inline std::int64_t inverse_mod(std::int64_t d, std::int64_t c) {
  std::int64_t old_r = reduce_mod(d, c), r = c, old_s = 1, s = 0;
  while (r != 0) {
    const auto quot = old_r / r;
    old_r -= quot * r;
    std::swap(old_r, r);
    old_s -= quot * s;
    std::swap(old_s, s);
  }
  if (old_r != 1) throw std::domain_error("inverse_mod: not invertible");
  return reduce_mod(old_s, c);
}

/// S_omega(m, n; c) = sum_{d mod c, (d,c)=1} conj(omega)(d) e((m dbar + n d)/c),
/// with omega read as a function of d mod q.
inline cplx classical_kloosterman(const DirichletCharacter& omega, std::int64_t m, std::int64_t n, std::int64_t c) {
  if (c <= 0) throw std::invalid_argument("classical_kloosterman: c must be >= 1");
  cplx total{};
  for (std::int64_t d = 1; d <= c; ++d) {
    if (std::gcd(d, c) != 1) continue;
    const auto dbar = c == 1 ? 0 : inverse_mod(d, c);
    const cplx w = omega.is_principal() && reduce_mod(d, omega.q()) == 0 ? cplx{1.0, 0.0} : std::conj(omega(d));
    const auto phase = reduce_mod(static_cast<std::int64_t>((static_cast<__int128>(reduce_mod(m, c)) * dbar +
                                                             static_cast<__int128>(reduce_mod(n, c)) * d) %
                                                            c),
                                  c);
    total += w * unit_root(phase, c);
  }
  return total;
}

/// tau(c) (m, n, c)^{1/2} c^{1/2}
inline double classical_weil_bound(std::int64_t m, std::int64_t n, std::int64_t c) {
  return static_cast<double>(divisor_count(c)) * std::sqrt(static_cast<double>(gcd3(m, n, c))) *
         std::sqrt(static_cast<double>(c));
}

// ---------------------------------------------------------------------------
// Closed forms that pair with the character averages in characters.hpp.

/// q^{-1/2} sum_{+-} (+-1)^parity Kl_2(+-mbar; w1, w2)
///   + eps(conj(w1) w2) conj(w1)(m) (1 + (-1)^(kappa1 + parity)) / (q^{1/2} (q-1))
inline cplx double_gauss_closed_form(const CharacterGroup& group, const DirichletCharacter& omega1,
                                     const DirichletCharacter& omega2, std::int64_t m, int parity = 0) {
  const auto& ctx = group.context();
  const auto mbar = ctx.inverse(m);
  const KloostermanSpec spec{2, {omega1.index(), omega2.index()}};
  const double sign = parity % 2 == 0 ? 1.0 : -1.0;
  const double sq = ctx.sqrt_q();
  const cplx kl = kloosterman_direct(group, spec, mbar) + sign * kloosterman_direct(group, spec, -mbar);
  const double parity_factor = ((omega1.kappa() + parity) % 2 == 0) ? 2.0 : 0.0;
  const cplx tail = (omega1.conj() * omega2).gauss() * omega1.conj()(m) * parity_factor /
                    (sq * static_cast<double>(ctx.q() - 1));
  return kl / sq + tail;
}

/// q^{-1/2} sum_{+-} (+-1)^parity Kl_3(+-mbar; w1, w2, 1), read from a table.
inline cplx triple_gauss_closed_form(const TraceFunction& kl3_table, const PrimeContext& ctx, std::int64_t m,
                                     int parity = 0) {
  const auto mbar = ctx.inverse(m);
  const double sign = parity % 2 == 0 ? 1.0 : -1.0;
  return (kl3_table(mbar) + sign * kl3_table(-mbar)) / ctx.sqrt_q();
}

}  // namespace momentlab
