#pragma once

// Trace functions as value tables: normalized Fourier transform, twisted
// correlation sums over PGL_2(F_q), matrix classification, and the
// completion / bilinear cancellation experiments.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "momentlab/characters.hpp"
#include "momentlab/exp_sums.hpp"
#include "momentlab/jet.hpp"
#include "momentlab/parallel.hpp"
#include "momentlab/trace_function.hpp"

namespace momentlab {

/// FT(K)(y) = q^{-1/2} sum_x K(x) e(xy/q)
inline TraceFunction fourier(const TraceFunction& k, const PrimeContext& ctx) {
  if (k.q() != ctx.q()) throw std::invalid_argument("fourier: modulus mismatch");
  auto v = dft_prime(k.values(), ctx);
  const double s = 1.0 / ctx.sqrt_q();
  for (auto& x : v) x *= s;
  return TraceFunction(k.q(), std::move(v), "FT(" + k.kernel() + ")");
}

/// Stock kernels by name: one, delta, additive, legendre, kl2, kl3.
inline TraceFunction make_kernel(const CharacterGroup& group, const std::string& name) {
  const auto& ctx = group.context();
  const auto q = ctx.q();
  CVec v(static_cast<std::size_t>(q), cplx{});
  if (name == "one") {
    std::fill(v.begin(), v.end(), cplx{1.0, 0.0});
  } else if (name == "delta") {
    v[0] = 1.0;
  } else if (name == "additive") {
    for (std::int64_t x = 0; x < q; ++x) v[static_cast<std::size_t>(x)] = ctx.e(x);
  } else if (name == "legendre") {
    const auto chi = group.quadratic();
    for (std::int64_t x = 0; x < q; ++x) v[static_cast<std::size_t>(x)] = chi(x);
  } else if (name == "kl2") {
    return kloosterman_table(group, KloostermanSpec::untwisted(2));
  } else if (name == "kl3") {
    return kloosterman_table(group, KloostermanSpec::untwisted(3));
  } else {
    throw std::invalid_argument("unknown kernel '" + name + "' (expected one, delta, additive, legendre, kl2, kl3)");
  }
  return TraceFunction(q, std::move(v), name);
}

// ---------------------------------------------------------------------------
// PGL_2(F_q)

/// Point of P^1(F_q).
struct P1Point {
  bool infinity = false;
  std::int64_t x = 0;
  auto operator<=>(const P1Point&) const = default;
};

class ProjMatrix {
 public:
  /// Normalizes so that the first nonzero entry in the order a, c, b, d is 1.
  ProjMatrix(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, const PrimeContext& ctx)
      : q_(ctx.q()), e_{ctx.reduce(a), ctx.reduce(b), ctx.reduce(c), ctx.reduce(d)} {
    if (det() == 0) throw std::invalid_argument("ProjMatrix: singular matrix");
    std::int64_t lead = e_[0] != 0 ? e_[0] : (e_[2] != 0 ? e_[2] : (e_[1] != 0 ? e_[1] : e_[3]));
    const auto inv = ctx.inverse(lead);
    for (auto& x : e_) x = x * inv % q_;
  }

  [[nodiscard]] std::int64_t a() const { return e_[0]; }
  [[nodiscard]] std::int64_t b() const { return e_[1]; }
  [[nodiscard]] std::int64_t c() const { return e_[2]; }
  [[nodiscard]] std::int64_t d() const { return e_[3]; }
  [[nodiscard]] std::int64_t q() const { return q_; }
  [[nodiscard]] std::int64_t det() const { return reduce_mod(e_[0] * e_[3] - e_[1] * e_[2], q_); }
  [[nodiscard]] std::int64_t trace() const { return (e_[0] + e_[3]) % q_; }
  [[nodiscard]] bool is_scalar() const { return e_[1] == 0 && e_[2] == 0 && e_[0] == e_[3]; }

  /// Mobius action on P^1(F_q).
  [[nodiscard]] P1Point act(const P1Point& z, const PrimeContext& ctx) const {
    if (z.infinity) {
      if (c() == 0) return {true, 0};
      return {false, a() * ctx.inverse(c()) % q_};
    }
    const auto den = (c() * z.x + d()) % q_;
    if (den == 0) return {true, 0};
    return {false, (a() * z.x + b()) % q_ * ctx.inverse(den) % q_};
  }

  bool operator==(const ProjMatrix& o) const { return q_ == o.q_ && e_ == o.e_; }
  bool operator<(const ProjMatrix& o) const { return e_ < o.e_; }

 private:
  std::int64_t q_;
  std::array<std::int64_t, 4> e_;
};

enum class MatrixTag {
  upper_triangular_B,
  B_times_w,
  w_times_B,
  parabolic,
  torus_split,
  torus_nonsplit,
  normalizer_minus_torus,
};

inline const char* to_string(MatrixTag t) {
  switch (t) {
    case MatrixTag::upper_triangular_B: return "upper_triangular_B";
    case MatrixTag::B_times_w: return "B_times_w";
    case MatrixTag::w_times_B: return "w_times_B";
    case MatrixTag::parabolic: return "parabolic";
    case MatrixTag::torus_split: return "torus_split";
    case MatrixTag::torus_nonsplit: return "torus_nonsplit";
    case MatrixTag::normalizer_minus_torus: return "normalizer_minus_torus";
  }
  return "?";
}

inline constexpr std::array<MatrixTag, 7> kAllMatrixTags = {
    MatrixTag::upper_triangular_B, MatrixTag::B_times_w,      MatrixTag::w_times_B,
    MatrixTag::parabolic,          MatrixTag::torus_split,    MatrixTag::torus_nonsplit,
    MatrixTag::normalizer_minus_torus};

/// Geometric type of gamma plus its Bruhat-cell memberships.
///
/// The primary tag partitions PGL_2(F_q):
///   identity                          -> upper_triangular_B
///   tr^2 = 4 det, non-scalar          -> parabolic
///   tr = 0 (involution)               -> normalizer_minus_torus
///   disc a nonzero square / nonsquare -> torus_split / torus_nonsplit
/// An involution lies in N^{x,y} - T^{x,y} for every pair {x, y} it swaps;
/// its own fixed points are still reported.
struct MatrixClass {
  MatrixTag tag = MatrixTag::upper_triangular_B;
  bool in_B = false;   // fixes infinity
  bool in_Bw = false;  // maps 0 to infinity
  bool in_wB = false;  // maps infinity to 0
  std::vector<P1Point> fixed_points;  // rational fixed points
  // Nonsplit case: the fixed points are the roots of z^2 + p1 z + p0 in F_{q^2}.
  std::optional<std::pair<std::int64_t, std::int64_t>> conjugate_fixed_pair;

  [[nodiscard]] bool in_bruhat_cells() const { return in_B || in_Bw || in_wB; }
};

inline bool is_square_mod(std::int64_t x, std::int64_t q) {
  x = reduce_mod(x, q);
  if (x == 0) return true;
  return pow_mod(static_cast<std::uint64_t>(x), static_cast<std::uint64_t>((q - 1) / 2), static_cast<std::uint64_t>(q)) == 1;
}

/// A square root of a nonzero square, via the discrete log table.
inline std::int64_t sqrt_mod(std::int64_t x, const PrimeContext& ctx) {
  const auto r = ctx.reduce(x);
  if (r == 0) return 0;
  const auto l = ctx.dlog(r);
  if (l % 2 != 0) throw std::domain_error("sqrt_mod: not a square");
  return ctx.gpow(l / 2);
}

inline MatrixClass classify(const ProjMatrix& g, const PrimeContext& ctx) {
  const auto q = ctx.q();
  MatrixClass out;
  out.in_B = g.c() == 0;
  out.in_Bw = g.d() == 0;
  out.in_wB = g.a() == 0;

  if (g.is_scalar()) {
    out.tag = MatrixTag::upper_triangular_B;
    return out;
  }
  const auto tr = g.trace();
  const auto disc = reduce_mod(tr * tr - 4 * g.det(), q);

  // Fixed points: c z^2 + (d - a) z - b = 0 on P^1.
  if (g.c() == 0) {
    out.fixed_points.push_back({true, 0});
    const auto diff = reduce_mod(g.d() - g.a(), q);
    if (diff != 0) out.fixed_points.push_back({false, g.b() * ctx.inverse(diff) % q});
  } else if (is_square_mod(disc, q)) {
    const auto root = sqrt_mod(disc, ctx);
    const auto inv2c = ctx.inverse(2 * g.c());
    const auto base = reduce_mod(g.a() - g.d(), q);
    out.fixed_points.push_back({false, reduce_mod(base + root, q) * inv2c % q});
    if (root != 0) out.fixed_points.push_back({false, reduce_mod(base - root, q) * inv2c % q});
  } else {
    const auto invc = ctx.inverse(g.c());
    out.conjugate_fixed_pair = std::make_pair(reduce_mod(g.d() - g.a(), q) * invc % q, reduce_mod(-g.b(), q) * invc % q);
  }
  std::sort(out.fixed_points.begin(), out.fixed_points.end());

  if (disc == 0) {
    out.tag = MatrixTag::parabolic;
  } else if (tr == 0) {
    out.tag = MatrixTag::normalizer_minus_torus;
  } else if (is_square_mod(disc, q)) {
    out.tag = MatrixTag::torus_split;
  } else {
    out.tag = MatrixTag::torus_nonsplit;
  }
  return out;
}

/// Evaluates C(K, omega; gamma) against a cached Fourier transform.
class CorrelationEvaluator {
 public:
  CorrelationEvaluator(const TraceFunction& k, DirichletCharacter omega)
      : ctx_(omega.context()), omega_(std::move(omega)), khat_(fourier(k, omega_.context())),
        sup_(k.sup_bound()), l2sq_(k.l2_norm_squared()) {
    if (k.q() != omega_.q()) throw std::invalid_argument("CorrelationEvaluator: modulus mismatch");
  }

  /// sum over z in F_q with cz+d != 0 of conj(omega)(cz+d) Khat(gamma z) conj(Khat(z)).
  [[nodiscard]] cplx operator()(const ProjMatrix& g) const {
    const auto q = ctx_.q();
    cplx sum{};
    for (std::int64_t z = 0; z < q; ++z) {
      const auto den = (g.c() * z + g.d()) % q;
      if (den == 0) continue;
      const auto image = (g.a() * z + g.b()) % q * ctx_.inverse(den) % q;
      const cplx w = omega_.is_principal() ? cplx{1.0, 0.0} : std::conj(omega_(den));
      sum += w * khat_(image) * std::conj(khat_(z));
    }
    return sum;
  }

  [[nodiscard]] const TraceFunction& khat() const { return khat_; }
  [[nodiscard]] double sup_bound() const { return sup_; }
  [[nodiscard]] double l2_norm_squared() const { return l2sq_; }
  [[nodiscard]] const PrimeContext& context() const { return ctx_; }

 private:
  const PrimeContext& ctx_;
  DirichletCharacter omega_;
  TraceFunction khat_;
  double sup_;
  double l2sq_;
};

inline cplx correlation(const TraceFunction& k, const DirichletCharacter& omega, const ProjMatrix& g) {
  return CorrelationEvaluator(k, omega)(g);
}

struct CorrelationRecord {
  ProjMatrix gamma;
  cplx value;
  bool exceeds = false;
  MatrixClass cls;
};

struct ScanMode {
  bool exhaustive = true;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  static ScanMode full() { return {true, 0, 0}; }
  static ScanMode sample(std::size_t n, std::uint64_t seed) { return {false, n, seed}; }
};

struct CorrelationScan {
  std::vector<CorrelationRecord> records;
  std::map<MatrixTag, std::size_t> histogram;            // all visited classes
  std::map<MatrixTag, std::size_t> exceeding_histogram;  // |C| > M sqrt q
  double threshold_M = 0.0;
  std::size_t visited = 0;
  std::size_t exceeding = 0;
  std::size_t parabolic_exceeding = 0;
  std::size_t outside_bruhat_exceeding = 0;
  std::size_t point_pairs_needed = 0;  // greedy count of tori/normalizers used
  bool fits_goodness = false;
};

/// All q^3 - q canonical representatives of PGL_2(F_q), in lexicographic order.
inline std::vector<ProjMatrix> enumerate_pgl2(const PrimeContext& ctx) {
  const auto q = ctx.q();
  std::vector<ProjMatrix> out;
  out.reserve(static_cast<std::size_t>(q * q * q - q));
  for (std::int64_t b = 0; b < q; ++b) {
    for (std::int64_t c = 0; c < q; ++c) {
      for (std::int64_t d = 0; d < q; ++d) {
        if (reduce_mod(d - b * c, q) != 0) out.emplace_back(1, b, c, d, ctx);
      }
    }
  }
  for (std::int64_t b = 1; b < q; ++b) {
    for (std::int64_t d = 0; d < q; ++d) out.emplace_back(0, b, 1, d, ctx);
  }
  return out;
}

namespace detail {

// Greedy count of point pairs {x, y} whose tori and normalizers cover the
// exceeding matrices outside the Bruhat cells.
inline std::size_t count_point_pairs(const std::vector<const CorrelationRecord*>& recs, const PrimeContext& ctx) {
  using SplitPair = std::pair<P1Point, P1Point>;
  std::set<SplitPair> split;
  std::set<std::pair<std::int64_t, std::int64_t>> nonsplit;
  std::vector<const CorrelationRecord*> involutions;
  for (const auto* r : recs) {
    const auto& cls = r->cls;
    if (cls.tag == MatrixTag::torus_split && cls.fixed_points.size() == 2) {
      split.insert({cls.fixed_points[0], cls.fixed_points[1]});
    } else if (cls.tag == MatrixTag::torus_nonsplit && cls.conjugate_fixed_pair) {
      nonsplit.insert(*cls.conjugate_fixed_pair);
    } else if (cls.tag == MatrixTag::normalizer_minus_torus) {
      involutions.push_back(r);
    }
  }
  for (const auto* r : involutions) {
    bool covered = false;
    for (const auto& [x, y] : split) {
      if (r->gamma.act(x, ctx) == y) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      P1Point inf{true, 0};
      auto img = r->gamma.act(inf, ctx);
      SplitPair p = inf < img ? SplitPair{inf, img} : SplitPair{img, inf};
      split.insert(p);
    }
  }
  return split.size() + nonsplit.size();
}

}  // namespace detail

/// Evaluates |C| over PGL_2(F_q) (or a seeded sample) and classifies the
/// matrices with |C| > M sqrt(q).
inline CorrelationScan correlation_scan(const TraceFunction& k, const DirichletCharacter& omega, double threshold_M,
                                        ScanMode mode) {
  const auto& ctx = omega.context();
  const auto q = ctx.q();
  if (mode.exhaustive && q > 17) {
    throw std::invalid_argument("correlation_scan: exhaustive mode is limited to q <= 17; use sample:<n>:<seed>");
  }
  std::vector<ProjMatrix> gammas;
  if (mode.exhaustive) {
    gammas = enumerate_pgl2(ctx);
  } else {
    std::mt19937_64 rng(mode.seed);
    std::uniform_int_distribution<std::int64_t> dist(0, q - 1);
    gammas.reserve(mode.samples);
    while (gammas.size() < mode.samples) {
      const auto a = dist(rng), b = dist(rng), c = dist(rng), d = dist(rng);
      if (reduce_mod(a * d - b * c, q) != 0) gammas.emplace_back(a, b, c, d, ctx);
    }
  }

  const CorrelationEvaluator eval(k, omega);
  const double cut = threshold_M * ctx.sqrt_q();
  std::vector<std::optional<CorrelationRecord>> slots(gammas.size());
  parallel_for(gammas.size(), [&](std::size_t i) {
    const auto v = eval(gammas[i]);
    slots[i] = CorrelationRecord{gammas[i], v, std::abs(v) > cut, classify(gammas[i], ctx)};
  });

  CorrelationScan out;
  out.threshold_M = threshold_M;
  out.records.reserve(slots.size());
  for (auto& s : slots) out.records.push_back(std::move(*s));
  out.visited = out.records.size();
  std::vector<const CorrelationRecord*> outside;
  for (const auto& r : out.records) {
    ++out.histogram[r.cls.tag];
    if (!r.exceeds) continue;
    ++out.exceeding;
    ++out.exceeding_histogram[r.cls.tag];
    if (r.cls.tag == MatrixTag::parabolic) ++out.parabolic_exceeding;
    if (!r.cls.in_bruhat_cells()) {
      ++out.outside_bruhat_exceeding;
      outside.push_back(&r);
    }
  }
  out.point_pairs_needed = detail::count_point_pairs(outside, ctx);
  out.fits_goodness = out.parabolic_exceeding == 0 && static_cast<double>(out.point_pairs_needed) <= threshold_M;
  return out;
}

// ---------------------------------------------------------------------------
// Smooth cutoffs and completion.

/// Bump supported on [P, 2P]: f(x) = exp(1 - 1/(1 - u^2)), u = (2x - 3P)/P.
/// Derivative bounds |x^nu f^(nu)(x)| <= C_nu Q^nu (nu <= 4) are measured on
/// a dense grid at construction.
class SmoothCutoff {
 public:
  static constexpr std::size_t kOrders = 5;

  explicit SmoothCutoff(double P, double Q = 1.0) : P_(P), Q_(Q) {
    if (!(P > 0.0) || !(Q >= 1.0)) throw std::invalid_argument("SmoothCutoff: need P > 0 and Q >= 1");
    constexpr int kGrid = 20000;
    for (int i = 1; i < kGrid; ++i) {
      const double x = P_ * (1.0 + static_cast<double>(i) / kGrid);
      const auto j = jet(x);
      double xp = 1.0;
      for (std::size_t nu = 0; nu < kOrders; ++nu) {
        C_[nu] = std::max(C_[nu], std::abs(xp * j.derivative(nu)) / std::pow(Q_, static_cast<double>(nu)));
        xp *= x;
      }
    }
    for (auto& c : C_) c *= 1.02;
  }

  [[nodiscard]] double P() const { return P_; }
  [[nodiscard]] double Q() const { return Q_; }
  [[nodiscard]] const std::array<double, kOrders>& C() const { return C_; }
  [[nodiscard]] std::string shape() const { return "bump"; }

  [[nodiscard]] double operator()(double x) const {
    if (x <= P_ || x >= 2.0 * P_) return 0.0;
    const double u = (2.0 * x - 3.0 * P_) / P_;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
  }

  [[nodiscard]] double derivative(double x, std::size_t nu) const {
    if (x <= P_ || x >= 2.0 * P_) return 0.0;
    return jet(x).derivative(nu);
  }

  /// int f(x) e^{-2 pi i x y} dx, trapezoid rule on the support.
  [[nodiscard]] cplx fourier(double y) const {
    const auto n = static_cast<std::size_t>(std::max(4000.0, std::ceil(80.0 * std::abs(y) * P_)));
    const double h = P_ / static_cast<double>(n);
    cplx s{};
    for (std::size_t i = 1; i < n; ++i) {
      const double x = P_ + h * static_cast<double>(i);
      const double th = -kTwoPi * x * y;
      s += (*this)(x) * cplx{std::cos(th), std::sin(th)};
    }
    return s * h;
  }

 private:
  [[nodiscard]] Jet<kOrders> jet(double x) const {
    const auto X = Jet<kOrders>::variable(x);
    const auto u = (2.0 / P_) * X + Jet<kOrders>::constant(-3.0);
    const auto one = Jet<kOrders>::constant(1.0);
    return exp(one - one / (one - u * u));
  }

  double P_;
  double Q_;
  std::array<double, kOrders> C_{};
};

struct PolyaResult {
  cplx direct;
  cplx completed;
  std::size_t dual_terms = 0;
};

/// sum_n K(n) f(n/N) evaluated directly and through Poisson summation,
/// (N / sqrt q) sum_h Khat(h) fhat(hN/q).
inline PolyaResult polya_check(const TraceFunction& k, const SmoothCutoff& f, double N, const PrimeContext& ctx) {
  const auto q = static_cast<double>(ctx.q());
  if (!(N > 0.0) || N > q * q) throw std::invalid_argument("polya_check: need 0 < N <= q^2");
  PolyaResult out;
  const auto lo = static_cast<std::int64_t>(std::floor(f.P() * N));
  const auto hi = static_cast<std::int64_t>(std::ceil(2.0 * f.P() * N));
  for (std::int64_t n = lo; n <= hi; ++n) out.direct += k(n) * f(static_cast<double>(n) / N);

  const auto khat = fourier(k, ctx);
  const double scale = std::abs(f.fourier(0.0));
  out.completed = khat(0) * f.fourier(0.0);
  out.dual_terms = 1;
  int quiet = 0;
  for (std::int64_t h = 1; quiet < 16 && h < 10000000; ++h) {
    const double y = static_cast<double>(h) * N / q;
    const cplx fp = f.fourier(y);
    const cplx fm = f.fourier(-y);
    out.completed += khat(h) * fp + khat(-h) * fm;
    out.dual_terms += 2;
    const bool small = std::max(std::abs(fp), std::abs(fm)) < 1e-10 * 1e-2 * scale;
    quiet = small ? quiet + 1 : 0;
  }
  out.completed *= N / std::sqrt(q);
  return out;
}

struct BilinearResult {
  cplx general_sum;      // sum alpha_m beta_n K(mn)
  cplx type1_sum;        // beta = 1
  double ratio = 0.0;    // |general| / (|alpha|_2 |beta|_2 sqrt(MN))
  double type1_ratio = 0.0;
  double prime_factor = 0.0;  // q^{-1/4} + M^{-1/2} + q^{1/4} log^{1/2} q / N^{1/2}
  double sawin_factor = 0.0;  // type-I bound, same normalization as type1_ratio
};

/// Random unit coefficients from a seeded generator; m in [1, M], n in [1, N].
inline BilinearResult bilinear_experiment(const TraceFunction& k, std::int64_t M, std::int64_t N, std::uint64_t seed) {
  const auto q = k.q();
  if (M < 1 || N < 1 || M >= q || N >= q) throw std::invalid_argument("bilinear_experiment: ranges must lie in [1, q)");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  CVec alpha(static_cast<std::size_t>(M)), beta(static_cast<std::size_t>(N));
  for (auto& a : alpha) a = std::polar(1.0, angle(rng));
  for (auto& b : beta) b = std::polar(1.0, angle(rng));

  BilinearResult out;
  for (std::int64_t m = 1; m <= M; ++m) {
    cplx inner{}, inner1{};
    for (std::int64_t n = 1; n <= N; ++n) {
      const cplx kv = k(m * n);
      inner += beta[static_cast<std::size_t>(n - 1)] * kv;
      inner1 += kv;
    }
    out.general_sum += alpha[static_cast<std::size_t>(m - 1)] * inner;
    out.type1_sum += alpha[static_cast<std::size_t>(m - 1)] * inner1;
  }
  const double Md = static_cast<double>(M), Nd = static_cast<double>(N), qd = static_cast<double>(q);
  const double a2 = std::sqrt(Md), b2 = std::sqrt(Nd), a1 = Md;  // unit coefficients
  const double norm = a2 * b2 * std::sqrt(Md * Nd);
  out.ratio = std::abs(out.general_sum) / norm;
  out.type1_ratio = std::abs(out.type1_sum) / norm;
  out.prime_factor = std::pow(qd, -0.25) + 1.0 / std::sqrt(Md) + std::pow(qd, 0.25) * std::sqrt(std::log(qd)) / std::sqrt(Nd);
  const double sawin = std::sqrt(a1) * std::sqrt(a2) * std::pow(Md, 0.25) * Nd *
                       std::pow(Md * Md * std::pow(Nd, 5.0) / (qd * qd * qd), -1.0 / 12.0);
  out.sawin_factor = sawin / norm;
  return out;
}

}  // namespace momentlab
