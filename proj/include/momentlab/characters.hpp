#pragma once

// Dirichlet characters modulo an odd prime q, indexed by exponent:
// chi_t(g^a) = e(ta/(q-1)) for the smallest primitive root g.

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "momentlab/ff_core.hpp"

namespace momentlab {

namespace detail {

struct CharacterTables {
  ContextPtr ctx;
  CVec roots;  // e(k/(q-1))
  CVec gauss;  // normalized Gauss sum for each index t
};

}  // namespace detail

class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const detail::CharacterTables> tables, std::int64_t t)
      : tables_(std::move(tables)), t_(reduce_mod(t, tables_->ctx->q() - 1)) {}

  [[nodiscard]] std::int64_t q() const { return tables_->ctx->q(); }
  [[nodiscard]] std::int64_t index() const { return t_; }
  [[nodiscard]] int kappa() const { return static_cast<int>(t_ % 2); }
  [[nodiscard]] bool is_principal() const { return t_ == 0; }
  [[nodiscard]] bool is_even() const { return kappa() == 0; }
  [[nodiscard]] const PrimeContext& context() const { return *tables_->ctx; }

  /// chi(x), zero when q | x (also for the principal character).
  [[nodiscard]] cplx operator()(std::int64_t x) const {
    const auto r = reduce_mod(x, q());
    if (r == 0) return {0.0, 0.0};
    return at_log(tables_->ctx->dlog(r));
  }

  /// chi(g^a)
  [[nodiscard]] cplx at_log(std::int64_t a) const {
    const auto n = q() - 1;
    return tables_->roots[static_cast<std::size_t>(reduce_mod(t_ * reduce_mod(a, n), n))];
  }

  /// epsilon(chi) = q^{-1/2} sum_{x != 0} chi(x) e(x/q)
  [[nodiscard]] cplx gauss() const { return tables_->gauss[static_cast<std::size_t>(t_)]; }

  [[nodiscard]] DirichletCharacter conj() const { return {tables_, -t_}; }
  [[nodiscard]] DirichletCharacter operator*(const DirichletCharacter& other) const {
    if (other.q() != q()) throw std::invalid_argument("character product: moduli differ");
    return {tables_, t_ + other.t_};
  }
  bool operator==(const DirichletCharacter& other) const { return q() == other.q() && t_ == other.t_; }

 private:
  std::shared_ptr<const detail::CharacterTables> tables_;
  std::int64_t t_;
};

/// The full group of q-1 characters with all Gauss sums precomputed by a
/// single length-(q-1) transform.
class CharacterGroup {
 public:
  explicit CharacterGroup(ContextPtr ctx) {
    auto tables = std::make_shared<detail::CharacterTables>();
    tables->ctx = std::move(ctx);
    const auto& c = *tables->ctx;
    const auto n = static_cast<std::size_t>(c.q() - 1);
    tables->roots.resize(n);
    for (std::size_t k = 0; k < n; ++k) tables->roots[k] = unit_root(static_cast<std::int64_t>(k), c.q() - 1);
    // sum_a e(ta/(q-1)) e(g^a/q) for all t at once.
    CVec h(n);
    for (std::size_t a = 0; a < n; ++a) h[a] = c.e(c.gpow(static_cast<std::int64_t>(a)));
    tables->gauss = ChirpDft(n).transform(h, +1);
    const double inv_sqrt_q = 1.0 / c.sqrt_q();
    for (auto& x : tables->gauss) x *= inv_sqrt_q;
    tables_ = std::move(tables);
  }

  [[nodiscard]] std::int64_t q() const { return tables_->ctx->q(); }
  [[nodiscard]] std::int64_t size() const { return q() - 1; }
  [[nodiscard]] const PrimeContext& context() const { return *tables_->ctx; }
  [[nodiscard]] ContextPtr context_ptr() const { return tables_->ctx; }

  [[nodiscard]] DirichletCharacter character(std::int64_t t) const { return {tables_, t}; }
  [[nodiscard]] DirichletCharacter principal() const { return character(0); }
  /// The unique character of order two.
  [[nodiscard]] DirichletCharacter quadratic() const { return character((q() - 1) / 2); }

  [[nodiscard]] std::vector<DirichletCharacter> all() const {
    std::vector<DirichletCharacter> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::int64_t t = 0; t < size(); ++t) out.push_back(character(t));
    return out;
  }

  /// e(k/(q-1))
  [[nodiscard]] cplx root(std::int64_t k) const {
    return tables_->roots[static_cast<std::size_t>(reduce_mod(k, q() - 1))];
  }

 private:
  std::shared_ptr<const detail::CharacterTables> tables_;
};

inline std::vector<DirichletCharacter> enumerate_characters(const ContextPtr& ctx) {
  return CharacterGroup(ctx).all();
}

inline cplx gauss_sum(const DirichletCharacter& chi) { return chi.gauss(); }

// ---------------------------------------------------------------------------
// Character-average identities. Each function evaluates the character sum
// directly; the matching closed_form evaluates the other side independently.

/// Sum over even nontrivial chi of chi(a).
inline cplx even_orthogonality_sum(const CharacterGroup& group, std::int64_t a) {
  const auto& ctx = group.context();
  if (ctx.reduce(a) == 0) throw std::domain_error("even_orthogonality_sum: a must be coprime to q");
  const auto la = ctx.dlog(a);
  cplx sum{};
  for (std::int64_t t = 2; t < group.size(); t += 2) sum += group.root(t * la);
  return sum;
}

/// (q-1)/2 * [a = +-1 mod q] - 1
inline double even_orthogonality_closed_form(std::int64_t q, std::int64_t a) {
  const auto r = reduce_mod(a, q);
  if (r == 0) throw std::domain_error("even_orthogonality_closed_form: a must be coprime to q");
  const bool pm_one = (r == 1 || r == q - 1);
  return (pm_one ? static_cast<double>(q - 1) / 2.0 : 0.0) - 1.0;
}

/// Sum over nontrivial chi with chi(-1) = (-1)^kappa of chi(m) eps(chi).
inline cplx gauss_weighted_average(const CharacterGroup& group, int kappa, std::int64_t m) {
  const auto& ctx = group.context();
  if (ctx.reduce(m) == 0) throw std::domain_error("gauss_weighted_average: m must be coprime to q");
  cplx sum{};
  for (std::int64_t t = (kappa == 0 ? 2 : 1); t < group.size(); t += 2) {
    const auto chi = group.character(t);
    sum += chi(m) * chi.gauss();
  }
  return sum;
}

/// (q-1)/(2 sqrt q) * sum_{+-} (+-1)^kappa (e(+-mbar/q) + 1/(q-1))
inline cplx gauss_weighted_closed_form(const PrimeContext& ctx, int kappa, std::int64_t m) {
  const auto mbar = ctx.inverse(m);
  const double q = static_cast<double>(ctx.q());
  const double sign = kappa == 0 ? 1.0 : -1.0;
  const cplx plus = ctx.e(mbar) + 1.0 / (q - 1.0);
  const cplx minus = ctx.e(-mbar) + 1.0 / (q - 1.0);
  return (q - 1.0) / (2.0 * std::sqrt(q)) * (plus + sign * minus);
}

/// (2/(q-1)) * sum over chi with chi(-1) = (-1)^parity, chi != conj(omega1),
/// of chi(m) eps(chi omega1) eps(chi omega2).
inline cplx double_gauss_average(const CharacterGroup& group, const DirichletCharacter& omega1,
                                 const DirichletCharacter& omega2, std::int64_t m, int parity = 0) {
  const auto& ctx = group.context();
  if (ctx.reduce(m) == 0) throw std::domain_error("double_gauss_average: m must be coprime to q");
  const auto excluded = omega1.conj();
  cplx sum{};
  for (std::int64_t t = parity % 2; t < group.size(); t += 2) {
    const auto chi = group.character(t);
    if (chi == excluded) continue;
    sum += chi(m) * (chi * omega1).gauss() * (chi * omega2).gauss();
  }
  return 2.0 / static_cast<double>(group.size()) * sum;
}

/// Same average with one more Gauss-sum factor eps(chi).
inline cplx triple_gauss_average(const CharacterGroup& group, const DirichletCharacter& omega1,
                                 const DirichletCharacter& omega2, std::int64_t m, int parity = 0) {
  const auto& ctx = group.context();
  if (ctx.reduce(m) == 0) throw std::domain_error("triple_gauss_average: m must be coprime to q");
  const auto excluded = omega1.conj();
  cplx sum{};
  for (std::int64_t t = parity % 2; t < group.size(); t += 2) {
    const auto chi = group.character(t);
    if (chi == excluded) continue;
    sum += chi(m) * chi.gauss() * (chi * omega1).gauss() * (chi * omega2).gauss();
  }
  return 2.0 / static_cast<double>(group.size()) * sum;
}

}  // namespace momentlab
