#pragma once

// Prime-field arithmetic and fast transforms of prime length.
//
// Sign convention used throughout: e(x) = exp(2*pi*i*x), and the forward
// transform of length q is out[y] = sum_x v[x] e(xy/q) (no normalization).

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace momentlab {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// e(num/den) computed from the reduced fraction, so large numerators do
/// not lose phase accuracy.
inline cplx unit_root(std::int64_t num, std::int64_t den) {
  num %= den;
  if (num < 0) num += den;
  const double theta = kTwoPi * static_cast<double>(num) / static_cast<double>(den);
  return {std::cos(theta), std::sin(theta)};
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  // Deterministic Miller-Rabin for 64-bit inputs.
  const auto un = static_cast<std::uint64_t>(n);
  std::uint64_t d = un - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, un);
    if (x == 1 || x == un - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, un);
      if (x == un - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::int64_t smallest_primitive_root(std::int64_t q) {
  const auto factors = prime_factors(q - 1);
  for (std::int64_t g = 2; g < q; ++g) {
    bool generator = true;
    for (auto p : factors) {
      if (pow_mod(static_cast<std::uint64_t>(g), static_cast<std::uint64_t>((q - 1) / p),
                  static_cast<std::uint64_t>(q)) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return g;
  }
  throw std::logic_error("no primitive root found for " + std::to_string(q));
}

inline std::int64_t reduce_mod(std::int64_t x, std::int64_t q) {
  x %= q;
  return x < 0 ? x + q : x;
}

// ---------------------------------------------------------------------------
// Power-of-two FFT and arbitrary-length cyclic transforms.

namespace detail {

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1U;
  return p;
}

}  // namespace detail

/// In-place radix-2 transform: sign=+1 computes sum_x v[x] exp(+2 pi i xy/n).
/// No normalization in either direction.
class Pow2Fft {
 public:
  explicit Pow2Fft(std::size_t n) : n_(n), twiddle_(n / 2) {
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("Pow2Fft: length must be a power of two");
    for (std::size_t k = 0; k < n / 2; ++k) {
      twiddle_[k] = unit_root(static_cast<std::int64_t>(k), static_cast<std::int64_t>(n));
    }
  }

  [[nodiscard]] std::size_t size() const { return n_; }

  void transform(std::span<cplx> v, int sign) const {
    if (v.size() != n_) throw std::invalid_argument("Pow2Fft: length mismatch");
    for (std::size_t i = 1, j = 0; i < n_; ++i) {
      std::size_t bit = n_ >> 1U;
      for (; j & bit; bit >>= 1U) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(v[i], v[j]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1U) {
      const std::size_t step = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t k = 0; k < len / 2; ++k) {
          cplx w = twiddle_[k * step];
          if (sign < 0) w = std::conj(w);
          const cplx a = v[start + k];
          const cplx b = v[start + k + len / 2] * w;
          v[start + k] = a + b;
          v[start + k + len / 2] = a - b;
        }
      }
    }
  }

 private:
  std::size_t n_;
  CVec twiddle_;
};

/// Length-n DFT for arbitrary n via Bluestein's chirp-z reduction:
/// out[k] = sum_j v[j] exp(sign * 2 pi i jk / n).
class ChirpDft {
 public:
  explicit ChirpDft(std::size_t n) : n_(n), fft_(detail::next_pow2(n == 0 ? 1 : 2 * n - 1)), chirp_(n) {
    if (n == 0) throw std::invalid_argument("ChirpDft: empty length");
    const auto two_n = static_cast<std::int64_t>(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto jj = static_cast<std::int64_t>(j);
      // exp(pi i j^2 / n) = e(j^2 / 2n), with j^2 reduced mod 2n.
      chirp_[j] = unit_root((jj * jj) % two_n, two_n);
    }
    kernel_.assign(fft_.size(), cplx{});
    kernel_[0] = chirp_[0];
    for (std::size_t j = 1; j < n; ++j) {
      kernel_[j] = chirp_[j];
      kernel_[fft_.size() - j] = chirp_[j];
    }
    fft_.transform(kernel_, +1);
  }

  [[nodiscard]] std::size_t size() const { return n_; }

  [[nodiscard]] CVec transform(std::span<const cplx> v, int sign) const {
    if (v.size() != n_) throw std::invalid_argument("ChirpDft: length mismatch");
    // jk = (j^2 + k^2 - (k-j)^2) / 2
    CVec buf(fft_.size(), cplx{});
    for (std::size_t j = 0; j < n_; ++j) buf[j] = v[j] * (sign > 0 ? chirp_[j] : std::conj(chirp_[j]));
    fft_.transform(buf, +1);
    // The kernel is symmetric, so the transform of its conjugate is the
    // conjugate of its transform.
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= (sign > 0 ? std::conj(kernel_[i]) : kernel_[i]);
    fft_.transform(buf, -1);
    const double scale = 1.0 / static_cast<double>(fft_.size());
    CVec out(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      const cplx c = sign > 0 ? chirp_[k] : std::conj(chirp_[k]);
      out[k] = buf[k] * scale * c;
    }
    return out;
  }

 private:
  std::size_t n_;
  Pow2Fft fft_;
  CVec chirp_;
  CVec kernel_;
};

// ---------------------------------------------------------------------------
// Prime context.

/// Precomputed transform of length q by Rader's reduction to a cyclic
/// convolution of length q-1, carried out with a zero-padded power-of-two FFT.
class RaderPlan {
 public:
  RaderPlan(std::int64_t q, std::span<const std::int64_t> gpow, std::span<const cplx> unity)
      : n_(static_cast<std::size_t>(q - 1)), fft_(detail::next_pow2(2 * static_cast<std::size_t>(q - 1) - 1)) {
    const std::size_t len = fft_.size();
    // Kernel h[k] = e(g^k / q), laid out for linear convolution of two
    // length-n sequences and then wrapped.
    kernel_.assign(len, cplx{});
    for (std::size_t k = 0; k + 1 < 2 * n_; ++k) {
      const std::size_t idx = (k + 1) % n_;  // (k - (n-1)) mod n
      kernel_[k] = unity[static_cast<std::size_t>(gpow[idx])];
    }
    fft_.transform(kernel_, +1);
  }

  // Output indexed by b (y = g^b) receiving sum_a v[g^{-a}] h[b - a] + v[0].
  void apply(std::span<const cplx> v, std::span<cplx> out, std::span<const std::int64_t> gpow, int sign) const {
    const std::size_t len = fft_.size();
    CVec buf(len, cplx{});
    // u[a] = v[g^{-a}] = v[gpow[(n - a) mod n]]
    for (std::size_t a = 0; a < n_; ++a) {
      const std::size_t idx = a == 0 ? 0 : n_ - a;
      const cplx x = v[static_cast<std::size_t>(gpow[idx])];
      buf[a] = sign > 0 ? x : std::conj(x);
    }
    fft_.transform(buf, +1);
    for (std::size_t i = 0; i < len; ++i) buf[i] *= kernel_[i];
    fft_.transform(buf, -1);
    const double scale = 1.0 / static_cast<double>(len);
    cplx total{};
    for (const auto& x : v) total += x;
    out[0] = total;
    const cplx v0 = v[0];
    for (std::size_t b = 0; b < n_; ++b) {
      // Linear convolution index b + n - 1 carries the wrapped terms.
      const cplx conv = buf[b + n_ - 1] * scale;
      const cplx val = sign > 0 ? conv : std::conj(conv);
      out[static_cast<std::size_t>(gpow[b])] = val + v0;
    }
  }

 private:
  std::size_t n_;
  Pow2Fft fft_;
  CVec kernel_;
};

/// Immutable tables for one odd prime q. Safe to share between threads.
class PrimeContext {
 public:
  explicit PrimeContext(std::int64_t q) : q_(q) {
    if (q <= 2) throw std::invalid_argument("build_context: q=" + std::to_string(q) + " must be an odd prime > 2");
    if (q >= (std::int64_t{1} << 31)) throw std::invalid_argument("build_context: q must be below 2^31");
    if (!is_prime(q)) throw std::invalid_argument("build_context: q=" + std::to_string(q) + " is not prime");
    g_ = smallest_primitive_root(q);
    const auto n = static_cast<std::size_t>(q - 1);
    gpow_.resize(n);
    dlog_.assign(static_cast<std::size_t>(q), -1);
    std::int64_t x = 1;
    for (std::size_t a = 0; a < n; ++a) {
      gpow_[a] = x;
      dlog_[static_cast<std::size_t>(x)] = static_cast<std::int64_t>(a);
      x = x * g_ % q;
    }
    unity_.resize(static_cast<std::size_t>(q));
    for (std::int64_t j = 0; j < q; ++j) unity_[static_cast<std::size_t>(j)] = unit_root(j, q);
    plan_ = std::make_shared<const RaderPlan>(q, gpow_, unity_);
  }

  [[nodiscard]] std::int64_t q() const { return q_; }
  [[nodiscard]] std::int64_t primitive_root() const { return g_; }
  [[nodiscard]] double sqrt_q() const { return std::sqrt(static_cast<double>(q_)); }

  /// log_g(a) for a coprime to q.
  [[nodiscard]] std::int64_t dlog(std::int64_t a) const {
    const auto r = reduce_mod(a, q_);
    if (r == 0) throw std::domain_error("dlog: argument divisible by q");
    return dlog_[static_cast<std::size_t>(r)];
  }
  [[nodiscard]] std::int64_t gpow(std::int64_t k) const {
    return gpow_[static_cast<std::size_t>(reduce_mod(k, q_ - 1))];
  }
  [[nodiscard]] std::span<const std::int64_t> gpow_table() const { return gpow_; }

  /// e(j/q)
  [[nodiscard]] cplx e(std::int64_t j) const { return unity_[static_cast<std::size_t>(reduce_mod(j, q_))]; }
  [[nodiscard]] std::span<const cplx> unity() const { return unity_; }

  [[nodiscard]] std::int64_t reduce(std::int64_t x) const { return reduce_mod(x, q_); }

  [[nodiscard]] std::int64_t inverse(std::int64_t x) const {
    const auto r = reduce_mod(x, q_);
    if (r == 0) throw std::domain_error("mod_inverse: " + std::to_string(x) + " is divisible by q=" + std::to_string(q_));
    return gpow_[static_cast<std::size_t>(reduce_mod(-dlog_[static_cast<std::size_t>(r)], q_ - 1))];
  }

  [[nodiscard]] const RaderPlan& plan() const { return *plan_; }

 private:
  std::int64_t q_;
  std::int64_t g_ = 0;
  std::vector<std::int64_t> gpow_;
  std::vector<std::int64_t> dlog_;
  CVec unity_;
  std::shared_ptr<const RaderPlan> plan_;
};

using ContextPtr = std::shared_ptr<const PrimeContext>;

inline ContextPtr build_context(std::int64_t q) { return std::make_shared<const PrimeContext>(q); }

inline std::int64_t mod_inverse(std::int64_t x, const PrimeContext& ctx) { return ctx.inverse(x); }

/// out[y] = sum_x v[x] e(xy/q).
inline CVec dft_prime(std::span<const cplx> v, const PrimeContext& ctx) {
  if (static_cast<std::int64_t>(v.size()) != ctx.q()) throw std::invalid_argument("dft_prime: vector length must equal q");
  CVec out(v.size());
  ctx.plan().apply(v, out, ctx.gpow_table(), +1);
  return out;
}

/// Inverse of dft_prime: out[x] = (1/q) sum_y v[y] e(-xy/q), so that
/// inverse_dft_prime(dft_prime(v)) == v.
inline CVec inverse_dft_prime(std::span<const cplx> v, const PrimeContext& ctx) {
  if (static_cast<std::int64_t>(v.size()) != ctx.q()) throw std::invalid_argument("inverse_dft_prime: vector length must equal q");
  CVec out(v.size());
  ctx.plan().apply(v, out, ctx.gpow_table(), -1);
  const double scale = 1.0 / static_cast<double>(ctx.q());
  for (auto& x : out) x *= scale;
  return out;
}

}  // namespace momentlab
