#pragma once

// Twisted cubic moments, mollified moments, the arithmetic-side cross-check
// and the non-vanishing census. One batch of central values per q serves
// every twist: L(chi_t omega_s) is entry t + s of the same batch.

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "momentlab/characters.hpp"
#include "momentlab/exp_sums.hpp"
#include "momentlab/hecke.hpp"
#include "momentlab/l_values.hpp"

namespace momentlab {

/// Central values for one prime: Dirichlet always, the Delta twist on demand.
class MomentContext {
 public:
  explicit MomentContext(std::int64_t q, bool with_cusp = false, Damping damping = kDefaultDamping)
      : ctx_(build_context(q)), group_(ctx_), damping_(damping) {
    dirichlet_ = DirichletAfe(group_, damping).batch();
    if (with_cusp) ensure_cusp();
  }

  [[nodiscard]] std::int64_t q() const { return ctx_->q(); }
  [[nodiscard]] const PrimeContext& context() const { return *ctx_; }
  [[nodiscard]] const CharacterGroup& group() const { return group_; }
  [[nodiscard]] Damping damping() const { return damping_; }

  /// L(chi_t, 1/2), t taken mod q-1; t = 0 is an error.
  [[nodiscard]] cplx dirichlet(std::int64_t t) const {
    const auto i = reduce_mod(t, q() - 1);
    if (i == 0) throw std::domain_error("MomentContext: principal character has no central value");
    return dirichlet_[static_cast<std::size_t>(i)];
  }

  [[nodiscard]] cplx cusp(std::int64_t t) const {
    if (!cusp_) throw std::logic_error("MomentContext: cusp batch not built");
    const auto i = reduce_mod(t, q() - 1);
    if (i == 0) throw std::domain_error("MomentContext: principal character has no twisted value");
    return (*cusp_)[static_cast<std::size_t>(i)];
  }

  [[nodiscard]] bool has_cusp() const { return cusp_.has_value(); }

  /// Builds Delta's Hecke table and the twisted batch.
  void ensure_cusp() {
    if (cusp_) return;
    hecke_ = std::make_shared<HeckeTable>(build_tau(static_cast<std::size_t>(50 * q() + 2)));
    cusp_ = CuspTwistAfe(group_, hecke_->lambda, HeckeTable::weight, damping_).batch();
  }

  [[nodiscard]] const HeckeTable& hecke() const {
    if (!hecke_) throw std::logic_error("MomentContext: Hecke table not built");
    return *hecke_;
  }

 private:
  ContextPtr ctx_;
  CharacterGroup group_;
  Damping damping_;
  CVec dirichlet_;
  std::optional<CVec> cusp_;
  std::shared_ptr<HeckeTable> hecke_;
};

struct MomentResult {
  std::int64_t q = 0;
  std::int64_t ell = 1;
  std::int64_t omega1 = 0;
  std::int64_t omega2 = 0;
  cplx value;
  int main_term = 0;
  double defect = 0.0;
  std::size_t characters_used = 0;
  bool ell_in_range = true;  // ell <= q^{3/13}
};

namespace detail {
inline void check_ell(const PrimeContext& ctx, std::int64_t ell) {
  if (ell < 1) throw std::invalid_argument("moment: ell must be >= 1");
  if (ell % ctx.q() == 0) throw std::domain_error("moment: ell must be coprime to q");
}

inline MomentResult finish(const MomentContext& mc, std::int64_t ell, std::int64_t t1, std::int64_t t2, cplx sum,
                           std::size_t used) {
  MomentResult r;
  r.q = mc.q();
  r.ell = ell;
  r.omega1 = reduce_mod(t1, mc.q() - 1);
  r.omega2 = reduce_mod(t2, mc.q() - 1);
  r.value = sum / static_cast<double>(mc.q() - 1);
  r.main_term = ell == 1 ? 1 : 0;
  r.defect = std::abs(r.value - static_cast<double>(r.main_term));
  r.characters_used = used;
  r.ell_in_range = static_cast<double>(ell) <= std::pow(static_cast<double>(mc.q()), 3.0 / 13.0);
  return r;
}

inline bool admissible(std::int64_t t, std::int64_t t1, std::int64_t t2, std::int64_t n) {
  return reduce_mod(t, n) != 0 && reduce_mod(t + t1, n) != 0 && reduce_mod(t + t2, n) != 0;
}
}  // namespace detail

/// (1/(q-1)) sum_{chi != 1, conj w1, conj w2} L(chi) L(chi w1) L(chi w2) chi(ell)
inline MomentResult cubic_moment_dirichlet(const MomentContext& mc, std::int64_t t1, std::int64_t t2,
                                           std::int64_t ell) {
  detail::check_ell(mc.context(), ell);
  const auto n = mc.q() - 1;
  const auto& g = mc.group();
  const auto le = mc.context().dlog(mc.context().reduce(ell));
  cplx sum{};
  std::size_t used = 0;
  for (std::int64_t t = 1; t < n; ++t) {
    if (!detail::admissible(t, t1, t2, n)) continue;
    sum += mc.dirichlet(t) * mc.dirichlet(t + t1) * mc.dirichlet(t + t2) * g.root(t * le);
    ++used;
  }
  return detail::finish(mc, ell, t1, t2, sum, used);
}

/// (1/(q-1)) sum_{chi != 1} L(Delta x chi) L(chi) chi(ell)
inline MomentResult cubic_moment_cusp(const MomentContext& mc, std::int64_t ell) {
  detail::check_ell(mc.context(), ell);
  const auto n = mc.q() - 1;
  const auto le = mc.context().dlog(mc.context().reduce(ell));
  cplx sum{};
  std::size_t used = 0;
  for (std::int64_t t = 1; t < n; ++t) {
    sum += mc.cusp(t) * mc.dirichlet(t) * mc.group().root(t * le);
    ++used;
  }
  return detail::finish(mc, ell, 0, 0, sum, used);
}

// ---------------------------------------------------------------------------
// Mollifiers.

struct MollifierSpec {
  enum class Kind { dirichlet, cusp };
  Kind kind = Kind::dirichlet;
  std::int64_t length = 1;
  std::vector<double> x;  // x[l] for 1 <= l <= length, index 0 unused
};

inline std::int64_t moebius(std::int64_t n) {
  std::int64_t mu = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  return n > 1 ? -mu : mu;
}

/// x(l) = mu(l) (log(L/l)/log L)^2; L = 1 gives the constant mollifier 1.
inline MollifierSpec dirichlet_mollifier(std::int64_t L) {
  if (L < 1) throw std::invalid_argument("mollifier: L must be >= 1");
  MollifierSpec m{MollifierSpec::Kind::dirichlet, L, std::vector<double>(static_cast<std::size_t>(L + 1), 0.0)};
  m.x[1] = 1.0;
  const double logL = std::log(static_cast<double>(L));
  for (std::int64_t l = 2; l <= L; ++l) {
    const double r = std::log(static_cast<double>(L) / static_cast<double>(l)) / logL;
    m.x[static_cast<std::size_t>(l)] = static_cast<double>(moebius(l)) * r * r;
  }
  return m;
}

/// x_f(l) = mu_f(l) log(L/l)/log L
inline MollifierSpec cusp_mollifier(std::int64_t L, const MuTable& mu) {
  if (L < 1) throw std::invalid_argument("mollifier: L must be >= 1");
  if (static_cast<std::size_t>(L) >= mu.mu.size()) throw std::invalid_argument("mollifier: mu table too short");
  MollifierSpec m{MollifierSpec::Kind::cusp, L, std::vector<double>(static_cast<std::size_t>(L + 1), 0.0)};
  m.x[1] = 1.0;
  const double logL = std::log(static_cast<double>(L));
  for (std::int64_t l = 2; l <= L; ++l) {
    m.x[static_cast<std::size_t>(l)] =
        mu(static_cast<std::size_t>(l)) * std::log(static_cast<double>(L) / static_cast<double>(l)) / logL;
  }
  return m;
}

/// M(chi_t; L) = sum_{l <= L} x(l) chi_t(l) l^{-1/2}
inline cplx mollifier_value(const MollifierSpec& m, const CharacterGroup& g, std::int64_t t) {
  const auto chi = g.character(t);
  cplx s{};
  for (std::int64_t l = 1; l <= m.length; ++l) {
    s += m.x[static_cast<std::size_t>(l)] * chi(l) / std::sqrt(static_cast<double>(l));
  }
  return s;
}

struct MollifiedCubic {
  cplx path_a;  // direct character average
  cplx path_b;  // expansion into twisted cubic moments
};

/// (1/(q-1)) sum_chi prod_{i=0,1,2} L(chi w_i) M(chi w_i; L), with w_0 = 1, two ways.
/// Path B: sum x(l1) x(l2) x(l3) (l1 l2 l3)^{-1/2} w1(l2) w2(l3) T3(w1, w2, l1 l2 l3).
inline MollifiedCubic mollified_cubic(const MomentContext& mc, std::int64_t t1, std::int64_t t2,
                                      const MollifierSpec& m) {
  const auto n = mc.q() - 1;
  const auto& g = mc.group();
  MollifiedCubic out;
  for (std::int64_t t = 1; t < n; ++t) {
    if (!detail::admissible(t, t1, t2, n)) continue;
    out.path_a += mc.dirichlet(t) * mollifier_value(m, g, t) * mc.dirichlet(t + t1) * mollifier_value(m, g, t + t1) *
                  mc.dirichlet(t + t2) * mollifier_value(m, g, t + t2);
  }
  out.path_a /= static_cast<double>(n);

  const auto w1 = g.character(t1);
  const auto w2 = g.character(t2);
  for (std::int64_t l1 = 1; l1 <= m.length; ++l1) {
    for (std::int64_t l2 = 1; l2 <= m.length; ++l2) {
      for (std::int64_t l3 = 1; l3 <= m.length; ++l3) {
        const double x = m.x[static_cast<std::size_t>(l1)] * m.x[static_cast<std::size_t>(l2)] *
                         m.x[static_cast<std::size_t>(l3)];
        if (x == 0.0) continue;
        const auto ell = l1 * l2 * l3;
        if (ell % mc.q() == 0) throw std::domain_error("mollified_cubic: l1 l2 l3 divisible by q");
        out.path_b += x / std::sqrt(static_cast<double>(ell)) * w1(l2) * w2(l3) *
                      cubic_moment_dirichlet(mc, t1, t2, ell).value;
      }
    }
  }
  return out;
}

/// (1/(q-1)) sum_{chi != 1} |L(chi) M(chi; L)|^4
inline double mollified_fourth(const MomentContext& mc, const MollifierSpec& m) {
  double s = 0.0;
  for (std::int64_t t = 1; t < mc.q() - 1; ++t) {
    s += std::pow(std::norm(mc.dirichlet(t) * mollifier_value(m, mc.group(), t)), 2.0);
  }
  return s / static_cast<double>(mc.q() - 1);
}

/// (1/(q-1)) sum_{chi != 1} |L(Delta x chi) M_f(chi; L')|^2
inline double mollified_fourth_cusp(const MomentContext& mc, const MollifierSpec& m) {
  double s = 0.0;
  for (std::int64_t t = 1; t < mc.q() - 1; ++t) s += std::norm(mc.cusp(t) * mollifier_value(m, mc.group(), t));
  return s / static_cast<double>(mc.q() - 1);
}

// ---------------------------------------------------------------------------
// Arithmetic side of the cubic moment restricted to one parity class.

struct ArithmeticMoment {
  cplx arithmetic;         // S1^+ + (-1)^nu S1^- + phase (S2^+ + (-1)^nu S2^-)
  cplx direct;             // (2/(q-1)) sum over admissible chi of parity nu
  cplx s1;
  cplx s2;
  double main_isolated = 0.0;  // V(q^{-3/2}), the N = l = 1 term
  double tolerance = 0.0;      // 10 l q^{-1/2}
  std::size_t terms = 0;
};

/// Requires q <= 400: the congruence sum runs to a multiple of q^{3/2}.
inline ArithmeticMoment moment_via_arithmetic(const MomentContext& mc, std::int64_t t1, std::int64_t t2,
                                              std::int64_t ell, int parity = 0) {
  const auto& ctx = mc.context();
  const auto& g = mc.group();
  const auto q = mc.q();
  if (q > 400) throw std::invalid_argument("moment_via_arithmetic: q too large (limit 400)");
  detail::check_ell(ctx, ell);
  const int nu = parity % 2;
  const auto w1 = g.character(t1);
  const auto w2 = g.character(t2);
  const int a0 = nu, a1 = (nu + w1.kappa()) % 2, a2 = (nu + w2.kappa()) % 2;

  const auto weight = triple_weight(a0, a1, a2, mc.damping());
  const double scale = std::pow(static_cast<double>(q), 1.5);
  const auto N = detail::cut_terms(weight, scale, scale);
  const auto D = triple_divisor_coefficients(w1, w2, N);
  std::vector<double> v(N + 1, 0.0);
  parallel_for(N, [&](std::size_t i) {
    const double n = static_cast<double>(i + 1);
    v[i + 1] = weight(n / scale) / std::sqrt(n);
  });

  const auto kl3 = kloosterman_table(g, KloostermanSpec{3, {w1.index(), w2.index(), 0}});
  const auto ell_inv = ctx.inverse(ell);
  const double sign = nu == 0 ? 1.0 : -1.0;
  ArithmeticMoment out;
  for (std::size_t n = 1; n <= N; ++n) {
    const auto r = static_cast<std::int64_t>(n % static_cast<std::size_t>(q));
    if (r == 0) continue;
    const auto nl = r * (ell % q) % q;
    if (nl == 1) out.s1 += D[n] * v[n];
    if (nl == q - 1) out.s1 += sign * D[n] * v[n];
    const auto m = r * ell_inv % q;
    out.s2 += std::conj(D[n]) * v[n] * (kl3(m) + sign * kl3(-m));
  }
  out.s2 /= ctx.sqrt_q();
  const cplx phase = std::pow(cplx{0.0, -1.0}, a0 + a1 + a2);
  out.arithmetic = out.s1 + phase * out.s2;
  out.terms = N;
  out.main_isolated = weight(1.0 / scale);
  out.tolerance = 10.0 * static_cast<double>(ell) / ctx.sqrt_q();

  const auto n_chars = q - 1;
  const auto le = ctx.dlog(ctx.reduce(ell));
  for (std::int64_t t = nu; t < n_chars; t += 2) {
    if (!detail::admissible(t, t1, t2, n_chars)) continue;
    out.direct += mc.dirichlet(t) * mc.dirichlet(t + t1) * mc.dirichlet(t + t2) * g.root(t * le);
  }
  out.direct *= 2.0 / static_cast<double>(n_chars);
  return out;
}

// ---------------------------------------------------------------------------
// Census.

struct CensusResult {
  std::int64_t q = 0;
  std::vector<double> thresholds;
  std::size_t count = 0;
  double proportion = 0.0;
  std::int64_t omega1 = 0;
  std::int64_t omega2 = 0;
};

/// chi with |L(chi)|, |L(chi w1)|, |L(chi w2)| all >= threshold (default 1/log q).
inline CensusResult census(const MomentContext& mc, std::int64_t t1, std::int64_t t2,
                           std::optional<double> threshold = std::nullopt) {
  const double thr = threshold.value_or(1.0 / std::log(static_cast<double>(mc.q())));
  const auto n = mc.q() - 1;
  CensusResult r{mc.q(), {thr}, 0, 0.0, reduce_mod(t1, n), reduce_mod(t2, n)};
  for (std::int64_t t = 1; t < n; ++t) {
    if (!detail::admissible(t, t1, t2, n)) continue;
    if (std::abs(mc.dirichlet(t)) >= thr && std::abs(mc.dirichlet(t + t1)) >= thr &&
        std::abs(mc.dirichlet(t + t2)) >= thr) {
      ++r.count;
    }
  }
  r.proportion = static_cast<double>(r.count) / static_cast<double>(n);
  return r;
}

/// chi with |L(Delta x chi)| >= 1/log^2 q and |L(chi)| >= 1/log q (overridable).
inline CensusResult census_cusp(const MomentContext& mc, std::optional<double> cusp_threshold = std::nullopt,
                                std::optional<double> dirichlet_threshold = std::nullopt) {
  const double lq = std::log(static_cast<double>(mc.q()));
  const double tf = cusp_threshold.value_or(1.0 / (lq * lq));
  const double td = dirichlet_threshold.value_or(1.0 / lq);
  const auto n = mc.q() - 1;
  CensusResult r{mc.q(), {tf, td}, 0, 0.0, 0, 0};
  for (std::int64_t t = 1; t < n; ++t) {
    if (std::abs(mc.cusp(t)) >= tf && std::abs(mc.dirichlet(t)) >= td) ++r.count;
  }
  r.proportion = static_cast<double>(r.count) / static_cast<double>(n);
  return r;
}

}  // namespace momentlab
