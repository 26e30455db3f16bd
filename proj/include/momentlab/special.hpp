#pragma once

// Complex log-gamma (Stirling with upward shift) and Hurwitz zeta
// (Euler-Maclaurin). Used for the AFE gamma factors and as the independent
// L-value oracle.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "momentlab/ff_core.hpp"

namespace momentlab {

namespace detail {
// B_2, B_4, ..., B_30
inline constexpr std::array<double, 15> kBernoulliEven = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
};
}  // namespace detail

/// log Gamma(z) for Re z > 0, up to an additive multiple of 2 pi i.
inline cplx lgamma_complex(cplx z) {
  if (z.real() <= 0.0) throw std::domain_error("lgamma_complex: need Re z > 0");
  cplx shift{};
  while (std::abs(z) < 15.0) {
    shift -= std::log(z);
    z += 1.0;
  }
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series{};
  cplx p = inv;
  for (std::size_t k = 1; k <= 10; ++k) {
    const double kk = static_cast<double>(k);
    series += detail::kBernoulliEven[k - 1] / (2.0 * kk * (2.0 * kk - 1.0)) * p;
    p *= inv2;
  }
  return shift + (z - 0.5) * std::log(z) - z + 0.5 * std::log(kTwoPi) + series;
}

inline cplx gamma_complex(cplx z) { return std::exp(lgamma_complex(z)); }

/// zeta(s, a) = sum_{k >= 0} (k + a)^{-s} for 0 < a <= 1, s != 1.
inline cplx hurwitz_zeta(cplx s, double a) {
  if (!(a > 0.0)) throw std::domain_error("hurwitz_zeta: need a > 0");
  if (std::abs(s - 1.0) < 1e-14) throw std::domain_error("hurwitz_zeta: pole at s = 1");
  constexpr int kShift = 30;
  constexpr std::size_t kTerms = 15;
  cplx sum{};
  for (int k = 0; k < kShift; ++k) sum += std::pow(static_cast<double>(k) + a, -s);
  const double N = kShift + a;
  const cplx Ns = std::pow(N, -s);
  sum += N * Ns / (s - 1.0) + 0.5 * Ns;
  // sum_j B_2j / (2j)! * s (s+1) ... (s+2j-2) N^{-s-2j+1}
  cplx rising = s;  // s (s+1) ... (s+2j-2)
  double fact = 2.0;  // (2j)!
  cplx npow = Ns / N;  // N^{-s-1}
  for (std::size_t j = 1; j <= kTerms; ++j) {
    sum += detail::kBernoulliEven[j - 1] / fact * rising * npow;
    const double jj = static_cast<double>(j);
    rising *= (s + (2.0 * jj - 1.0)) * (s + 2.0 * jj);
    fact *= (2.0 * jj + 1.0) * (2.0 * jj + 2.0);
    npow /= N * N;
  }
  return sum;
}

}  // namespace momentlab
