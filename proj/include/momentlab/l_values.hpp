#pragma once

// Central values by approximate functional equations.
//
//   V(x) = (1/2 pi i) int_(sigma) G(u) Q(u) x^{-u} du/u,   G(u) = prod_j gamma_j(1/2+u)/gamma_j(1/2)
//
// Dirichlet factor gamma(s) = pi^{-s/2} Gamma((s+kappa)/2), argument n/sqrt(q).
// Holomorphic factor gamma(s) = (2 pi)^{-s} Gamma(s+(k-1)/2), argument n/q.
// Root numbers: W(chi) = i^{-kappa} eps(chi); level-1 twist w = eps(chi)^2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "momentlab/characters.hpp"
#include "momentlab/parallel.hpp"
#include "momentlab/special.hpp"

namespace momentlab {

struct GammaFactor {
  enum class Kind { dirichlet, holomorphic };
  Kind kind = Kind::dirichlet;
  int param = 0;  // parity kappa, or the weight k

  static GammaFactor dirichlet(int kappa) { return {Kind::dirichlet, kappa}; }
  static GammaFactor holomorphic(int k) { return {Kind::holomorphic, k}; }
};

/// Even entire damping functions Q(u) = exp(u^2/beta), Q(0) = 1. A larger
/// beta keeps Q from swamping the gamma decay along the real axis; with
/// beta = 1 the weights need x ~ 1e4 to fall below 1e-12.
enum class Damping { exp_s2, exp_s2_over_16, exp_s2_over_64 };

inline double damping_scale(Damping d) {
  switch (d) {
    case Damping::exp_s2: return 1.0;
    case Damping::exp_s2_over_16: return 16.0;
    case Damping::exp_s2_over_64: return 64.0;
  }
  return 1.0;
}

inline const char* to_string(Damping d) {
  switch (d) {
    case Damping::exp_s2: return "exp(s^2)";
    case Damping::exp_s2_over_16: return "exp(s^2/16)";
    case Damping::exp_s2_over_64: return "exp(s^2/64)";
  }
  return "?";
}

inline constexpr Damping kDefaultDamping = Damping::exp_s2_over_16;
inline constexpr Damping kAlternateDamping = Damping::exp_s2_over_64;

struct AfeWeight {
  std::vector<GammaFactor> factors;
  Damping damping = kDefaultDamping;
  double sigma_right = 1.5;   // used for x >= 1
  double sigma_left = -0.25;  // used for x < 1, plus the residue 1 at u = 0
  double height = 0.0;        // 0: sqrt(40 beta) + 10
  double step = 0.025;
};

inline cplx gamma_ratio(const GammaFactor& f, cplx u) {
  if (f.kind == GammaFactor::Kind::dirichlet) {
    const double a = 0.5 + f.param;
    return std::exp(-0.5 * u * std::log(M_PI) + lgamma_complex((a + u) / 2.0) - lgamma_complex(cplx{a / 2.0, 0.0}));
  }
  const double a = 0.5 + (f.param - 1) / 2.0;
  return std::exp(-u * std::log(kTwoPi) + lgamma_complex(a + u) - lgamma_complex(cplx{a, 0.0}));
}

inline cplx damping_value(Damping d, cplx u) { return std::exp(u * u / damping_scale(d)); }

/// Weight with the integrand tabulated on both contours.
class WeightFunction {
 public:
  explicit WeightFunction(AfeWeight spec) : spec_(std::move(spec)) {
    if (spec_.factors.empty()) throw std::invalid_argument("AfeWeight: no gamma factors");
    if (spec_.height <= 0.0) spec_.height = std::sqrt(40.0 * damping_scale(spec_.damping)) + 10.0;
    const auto n = static_cast<std::size_t>(std::ceil(spec_.height / spec_.step));
    right_ = tabulate(spec_.sigma_right, n);
    left_ = tabulate(spec_.sigma_left, n);
  }

  [[nodiscard]] const AfeWeight& spec() const { return spec_; }

  [[nodiscard]] double operator()(double x) const {
    if (!(x > 0.0)) throw std::domain_error("weight_eval: x must be positive");
    if (x >= 1.0) return integrate(right_, spec_.sigma_right, x);
    return 1.0 + integrate(left_, spec_.sigma_left, x);
  }

  /// Smallest x >= 1 (on a 2% geometric grid) beyond which |V| < tol.
  [[nodiscard]] double cutoff(double tol = 1e-12) const {
    double x = 1.0;
    int below = 0;
    double first = 0.0;
    while (below < 4 && x < 1e6) {
      if (std::abs((*this)(x)) < tol) {
        if (below++ == 0) first = x;
      } else {
        below = 0;
      }
      x *= 1.02;
    }
    return below > 0 ? first : x;
  }

 private:
  // F(sigma + i t_j) for t_j = j h, j = 0..n
  [[nodiscard]] CVec tabulate(double sigma, std::size_t n) const {
    CVec out(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      const cplx u{sigma, spec_.step * static_cast<double>(j)};
      cplx g{1.0, 0.0};
      for (const auto& f : spec_.factors) g *= gamma_ratio(f, u);
      out[j] = g * damping_value(spec_.damping, u) / u;
    }
    return out;
  }

  // (h / 2 pi) x^{-sigma} [F_0 + 2 Re sum_{j>0} F_j e^{-i t_j log x}]
  [[nodiscard]] double integrate(const CVec& F, double sigma, double x) const {
    const double L = std::log(x);
    const cplx z = std::polar(1.0, -spec_.step * L);
    cplx p = z;
    double acc = 0.0;
    for (std::size_t j = 1; j < F.size(); ++j) {
      acc += (F[j] * p).real();
      p *= z;
    }
    return spec_.step / kTwoPi * std::exp(-sigma * L) * (F[0].real() + 2.0 * acc);
  }

  AfeWeight spec_;
  CVec right_;
  CVec left_;
};

inline double weight_eval(const WeightFunction& w, double x) { return w(x); }

struct LValue {
  enum class Which { dirichlet, delta_twist, triple_product };
  enum class Method { afe, oracle };
  std::int64_t index = 0;
  Which which = Which::dirichlet;
  cplx value;
  Method method = Method::afe;
  std::size_t terms_used = 0;
};

/// i^{-kappa} eps(chi)
inline cplx root_number(const DirichletCharacter& chi) {
  return (chi.kappa() == 0 ? cplx{1.0, 0.0} : cplx{0.0, -1.0}) * chi.gauss();
}

namespace detail {
inline std::size_t cut_terms(const WeightFunction& w, double scale, double sqrt_conductor) {
  const double n = std::ceil(w.cutoff() * scale);
  return static_cast<std::size_t>(std::min(n, std::ceil(50.0 * sqrt_conductor)));
}

// A[j] = sum_{n <= N, n = g^j mod q} coeff[n]; coeff indexed from 1.
inline CVec fold_by_dlog(const std::vector<double>& coeff, const PrimeContext& ctx) {
  CVec a(static_cast<std::size_t>(ctx.q() - 1), cplx{});
  for (std::size_t n = 1; n < coeff.size(); ++n) {
    const auto r = static_cast<std::int64_t>(n % static_cast<std::size_t>(ctx.q()));
    if (r == 0) continue;
    a[static_cast<std::size_t>(ctx.dlog(r))] += coeff[n];
  }
  return a;
}

// For every character index t: (sum_n chi_t(n) c_n, sum_n conj(chi_t)(n) c_n).
inline std::pair<CVec, CVec> character_transforms(const CVec& folded) {
  ChirpDft dft(folded.size());
  return {dft.transform(folded, +1), dft.transform(folded, -1)};
}
}  // namespace detail

/// Dirichlet central values mod q, single or all at once.
class DirichletAfe {
 public:
  explicit DirichletAfe(const CharacterGroup& group, Damping damping = kDefaultDamping) : group_(group) {
    const auto& ctx = group.context();
    const double sq = ctx.sqrt_q();
    for (int kappa = 0; kappa < 2; ++kappa) {
      WeightFunction w(AfeWeight{{GammaFactor::dirichlet(kappa)}, damping});
      const auto N = detail::cut_terms(w, sq, sq);
      auto& c = coeff_[kappa];
      c.assign(N + 1, 0.0);
      parallel_for(N, [&](std::size_t i) {
        const double n = static_cast<double>(i + 1);
        c[i + 1] = w(n / sq) / std::sqrt(n);
      });
    }
  }

  [[nodiscard]] std::size_t terms(int kappa) const { return coeff_[kappa].size() - 1; }

  [[nodiscard]] LValue central(const DirichletCharacter& chi) const {
    if (chi.is_principal()) throw std::domain_error("dirichlet_central: principal character");
    const auto& c = coeff_[chi.kappa()];
    cplx direct{}, dual{};
    for (std::size_t n = 1; n < c.size(); ++n) {
      const cplx v = chi(static_cast<std::int64_t>(n));
      direct += v * c[n];
      dual += std::conj(v) * c[n];
    }
    return {chi.index(), LValue::Which::dirichlet, direct + root_number(chi) * dual, LValue::Method::afe, c.size() - 1};
  }

  /// L(chi_t, 1/2) for every t; entry 0 (principal) is NaN.
  [[nodiscard]] CVec batch() const {
    const auto& ctx = group_.context();
    const auto n = static_cast<std::size_t>(ctx.q() - 1);
    CVec out(n);
    for (int kappa = 0; kappa < 2; ++kappa) {
      const auto [F, G] = detail::character_transforms(detail::fold_by_dlog(coeff_[kappa], ctx));
      for (std::size_t t = static_cast<std::size_t>(kappa); t < n; t += 2) {
        out[t] = F[t] + root_number(group_.character(static_cast<std::int64_t>(t))) * G[t];
      }
    }
    out[0] = cplx{std::nan(""), std::nan("")};
    return out;
  }

 private:
  const CharacterGroup& group_;
  std::vector<double> coeff_[2];
};

inline LValue dirichlet_central(const CharacterGroup& group, const DirichletCharacter& chi,
                                Damping damping = kDefaultDamping) {
  return DirichletAfe(group, damping).central(chi);
}

// ---------------------------------------------------------------------------
// Oracle and completed L-function.

/// L(chi, s) = q^{-s} sum_{a=1}^{q-1} chi(a) zeta(s, a/q).
inline cplx hurwitz_oracle(const DirichletCharacter& chi, cplx s) {
  if (chi.is_principal()) throw std::domain_error("hurwitz_oracle: principal character excluded");
  const auto q = chi.q();
  cplx sum{};
  for (std::int64_t a = 1; a < q; ++a) {
    sum += chi(a) * hurwitz_zeta(s, static_cast<double>(a) / static_cast<double>(q));
  }
  return std::pow(static_cast<double>(q), -s) * sum;
}

/// Lambda(chi, s) = (q/pi)^{s/2} Gamma((s+kappa)/2) L(chi, s).
inline cplx completed_l(const DirichletCharacter& chi, cplx s) {
  const double q = static_cast<double>(chi.q());
  return std::exp(0.5 * s * std::log(q / M_PI) + lgamma_complex((s + static_cast<double>(chi.kappa())) / 2.0)) *
         hurwitz_oracle(chi, s);
}

/// |Lambda(chi, s) - i^{phase * kappa} eps(chi) Lambda(conj chi, 1 - s)|.
/// phase = -1 is the correct root number; phase = +1 is kept for comparison.
inline double functional_equation_defect(const DirichletCharacter& chi, cplx s, int phase = -1) {
  const cplx ik = chi.kappa() == 0 ? cplx{1.0, 0.0} : cplx{0.0, static_cast<double>(phase)};
  return std::abs(completed_l(chi, s) - ik * chi.gauss() * completed_l(chi.conj(), 1.0 - s));
}

// ---------------------------------------------------------------------------
// Triple product.

/// D(N) = sum_{n0 n1 n2 = N} w1(n1) w2(n2) for N <= n_max (index 0 unused).
inline CVec triple_divisor_coefficients(const DirichletCharacter& omega1, const DirichletCharacter& omega2,
                                        std::size_t n_max) {
  CVec e(n_max + 1, cplx{}), d(n_max + 1, cplx{});
  for (std::size_t a = 1; a <= n_max; ++a) {
    const cplx w = omega2(static_cast<std::int64_t>(a));
    if (w == cplx{}) continue;
    for (std::size_t m = a; m <= n_max; m += a) e[m] += w;
  }
  for (std::size_t a = 1; a <= n_max; ++a) {
    const cplx w = omega1(static_cast<std::int64_t>(a));
    if (w == cplx{}) continue;
    for (std::size_t m = a, k = 1; m <= n_max; m += a, ++k) d[m] += w * e[k];
  }
  return d;
}

inline WeightFunction triple_weight(int a0, int a1, int a2, Damping damping = kDefaultDamping) {
  return WeightFunction(
      AfeWeight{{GammaFactor::dirichlet(a0), GammaFactor::dirichlet(a1), GammaFactor::dirichlet(a2)}, damping});
}

struct TripleProductResult {
  cplx value;
  std::size_t terms_used = 0;
};

/// L(chi) L(chi w1) L(chi w2) at 1/2 from the cubic-product AFE:
///   sum_N chi(N) D(N) N^{-1/2} V(N/q^{3/2}) + W sum_N conj(chi)(N) conj(D(N)) N^{-1/2} V(N/q^{3/2}),
/// with W the product of the three root numbers.
inline TripleProductResult triple_product_afe(const DirichletCharacter& chi, const DirichletCharacter& omega1,
                                              const DirichletCharacter& omega2, Damping damping = kDefaultDamping) {
  const auto c1 = chi * omega1;
  const auto c2 = chi * omega2;
  if (chi.is_principal() || c1.is_principal() || c2.is_principal()) {
    throw std::domain_error("triple_product_afe: chi must avoid 1, conj(omega1), conj(omega2)");
  }
  const auto w = triple_weight(chi.kappa(), c1.kappa(), c2.kappa(), damping);
  const double scale = std::pow(static_cast<double>(chi.q()), 1.5);
  const auto N = detail::cut_terms(w, scale, scale);
  const auto D = triple_divisor_coefficients(omega1, omega2, N);
  std::vector<double> v(N + 1, 0.0);
  parallel_for(N, [&](std::size_t i) {
    const double n = static_cast<double>(i + 1);
    v[i + 1] = w(n / scale) / std::sqrt(n);
  });
  cplx direct{}, dual{};
  for (std::size_t n = 1; n <= N; ++n) {
    const cplx x = chi(static_cast<std::int64_t>(n)) * D[n];
    direct += x * v[n];
    dual += std::conj(x) * v[n];
  }
  const cplx W = root_number(chi) * root_number(c1) * root_number(c2);
  return {direct + W * dual, N};
}

// ---------------------------------------------------------------------------
// Twist of a level-1 holomorphic form.

/// L(f x chi, 1/2) for a level-1 weight-k form given normalized Hecke
/// eigenvalues lambda[n] (index 0 unused).
class CuspTwistAfe {
 public:
  CuspTwistAfe(const CharacterGroup& group, const std::vector<double>& lambda, int weight = 12,
               Damping damping = kDefaultDamping, double root_sign = 1.0)
      : group_(group), weight_(weight), root_sign_(root_sign) {
    const double q = static_cast<double>(group.q());
    WeightFunction w(AfeWeight{{GammaFactor::holomorphic(weight)}, damping});
    const auto N = detail::cut_terms(w, q, q);
    if (lambda.size() <= N) {
      throw std::invalid_argument("cusp_twist_central: Hecke table too short, need n <= " + std::to_string(N));
    }
    coeff_.assign(N + 1, 0.0);
    parallel_for(N, [&](std::size_t i) {
      const double n = static_cast<double>(i + 1);
      coeff_[i + 1] = lambda[i + 1] * w(n / q) / std::sqrt(n);
    });
  }

  [[nodiscard]] std::size_t terms() const { return coeff_.size() - 1; }

  /// i^k eps(chi)^2, times root_sign (-1 only for the consistency test).
  [[nodiscard]] cplx root(const DirichletCharacter& chi) const {
    const cplx ik = std::pow(cplx{0.0, 1.0}, weight_ % 4);
    return root_sign_ * ik * chi.gauss() * chi.gauss();
  }

  [[nodiscard]] LValue central(const DirichletCharacter& chi) const {
    if (chi.is_principal()) throw std::domain_error("cusp_twist_central: principal character");
    cplx direct{}, dual{};
    for (std::size_t n = 1; n < coeff_.size(); ++n) {
      const cplx v = chi(static_cast<std::int64_t>(n));
      direct += v * coeff_[n];
      dual += std::conj(v) * coeff_[n];
    }
    return {chi.index(), LValue::Which::delta_twist, direct + root(chi) * dual, LValue::Method::afe, terms()};
  }

  [[nodiscard]] CVec batch() const {
    const auto& ctx = group_.context();
    const auto [F, G] = detail::character_transforms(detail::fold_by_dlog(coeff_, ctx));
    CVec out(F.size());
    for (std::size_t t = 1; t < out.size(); ++t) {
      out[t] = F[t] + root(group_.character(static_cast<std::int64_t>(t))) * G[t];
    }
    out[0] = cplx{std::nan(""), std::nan("")};
    return out;
  }

 private:
  const CharacterGroup& group_;
  int weight_;
  double root_sign_;
  std::vector<double> coeff_;
};

}  // namespace momentlab
