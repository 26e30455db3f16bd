#pragma once

// Slow, independent reference computations. Nothing here shares code paths
// with the fast transforms or the AFE.

#include <cmath>
#include <cstdint>
#include <vector>

#include "momentlab/characters.hpp"
#include "momentlab/hecke.hpp"
#include "momentlab/l_values.hpp"

namespace momentlab::oracle {

/// O(q^2) transform with the library's sign convention.
inline CVec naive_dft(const CVec& v, int sign = +1) {
  const auto n = static_cast<std::int64_t>(v.size());
  CVec out(v.size());
  for (std::int64_t y = 0; y < n; ++y) {
    cplx s{};
    for (std::int64_t x = 0; x < n; ++x) {
      const double th = sign * kTwoPi * static_cast<double>(x * y % n) / static_cast<double>(n);
      s += v[static_cast<std::size_t>(x)] * cplx{std::cos(th), std::sin(th)};
    }
    out[static_cast<std::size_t>(y)] = s;
  }
  return out;
}

/// q^{-1/2} sum_x chi(x) e(x/q), summed term by term.
inline cplx direct_gauss(const DirichletCharacter& chi) {
  const auto q = chi.q();
  cplx s{};
  for (std::int64_t x = 1; x < q; ++x) {
    const double th = kTwoPi * static_cast<double>(x) / static_cast<double>(q);
    s += chi(x) * cplx{std::cos(th), std::sin(th)};
  }
  return s / std::sqrt(static_cast<double>(q));
}

/// tau(1..n) from q prod (1 - q^m)^24 by 24 successive dense multiplications
/// per factor (1 - q^m).
inline std::vector<int128> tau_direct(std::size_t n) {
  std::vector<int128> c(n, 0);  // coefficient of q^k, k < n
  c[0] = 1;
  for (std::size_t m = 1; m < n; ++m) {
    for (int r = 0; r < 24; ++r) {
      for (std::size_t k = n - 1; k >= m; --k) c[k] -= c[k - m];
    }
  }
  std::vector<int128> out(n + 1, 0);
  for (std::size_t k = 0; k < n; ++k) out[k + 1] = c[k];
  return out;
}

/// Cubic moment from Hurwitz-zeta central values.
inline cplx cubic_moment(const CharacterGroup& g, std::int64_t t1, std::int64_t t2, std::int64_t ell) {
  const auto n = g.size();
  std::vector<cplx> L(static_cast<std::size_t>(n));
  for (std::int64_t t = 1; t < n; ++t) L[static_cast<std::size_t>(t)] = hurwitz_oracle(g.character(t), 0.5);
  cplx s{};
  for (std::int64_t t = 1; t < n; ++t) {
    const auto a = reduce_mod(t + t1, n), b = reduce_mod(t + t2, n);
    if (a == 0 || b == 0) continue;
    s += L[static_cast<std::size_t>(t)] * L[static_cast<std::size_t>(a)] * L[static_cast<std::size_t>(b)] *
         g.character(t)(ell);
  }
  return s / static_cast<double>(n);
}

}  // namespace momentlab::oracle
