#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace momentlab {

/// Truncated Taylor expansion f(x0 + h) = sum_k c[k] h^k, k < N. Arithmetic
/// on jets propagates exact derivatives through closed-form expressions.
template <std::size_t N>
struct Jet {
  std::array<double, N> c{};

  static Jet variable(double x0) {
    Jet j;
    j.c[0] = x0;
    if constexpr (N > 1) j.c[1] = 1.0;
    return j;
  }
  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }

  /// k-th derivative at the expansion point.
  [[nodiscard]] double derivative(std::size_t k) const {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return c[k] * f;
  }

  friend Jet operator+(Jet a, const Jet& b) {
    for (std::size_t i = 0; i < N; ++i) a.c[i] += b.c[i];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    for (std::size_t i = 0; i < N; ++i) a.c[i] -= b.c[i];
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; i + j < N; ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
  }
  friend Jet operator*(double s, Jet a) {
    for (auto& x : a.c) x *= s;
    return a;
  }
  friend Jet operator+(double s, Jet a) {
    a.c[0] += s;
    return a;
  }
  friend Jet operator-(double s, const Jet& a) { return s + (-1.0 * a); }

  [[nodiscard]] Jet reciprocal() const {
    Jet r;
    r.c[0] = 1.0 / c[0];
    for (std::size_t k = 1; k < N; ++k) {
      double s = 0.0;
      for (std::size_t i = 1; i <= k; ++i) s += c[i] * r.c[k - i];
      r.c[k] = -s / c[0];
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }
};

template <std::size_t N>
Jet<N> exp(const Jet<N>& a) {
  // r' = a' r  =>  k r_k = sum_{i=1}^{k} i a_i r_{k-i}
  Jet<N> r;
  r.c[0] = std::exp(a.c[0]);
  for (std::size_t k = 1; k < N; ++k) {
    double s = 0.0;
    for (std::size_t i = 1; i <= k; ++i) s += static_cast<double>(i) * a.c[i] * r.c[k - i];
    r.c[k] = s / static_cast<double>(k);
  }
  return r;
}

}  // namespace momentlab
