#pragma once

// Per-q experiment drivers behind the `scan`, `twist-sum` and `census`
// commands, plus the small helpers they share.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "momentlab/hecke.hpp"
#include "momentlab/moments.hpp"
#include "momentlab/trace_fn.hpp"

namespace momentlab {

/// "<t>" or "random:<seed>"; random indices are uniform on [0, q-2].
inline std::int64_t resolve_character_index(const std::string& spec, std::int64_t q) {
  const std::string prefix = "random:";
  if (spec.rfind(prefix, 0) == 0) {
    const auto seed = std::stoull(spec.substr(prefix.size()));
    std::mt19937_64 rng(seed);
    return std::uniform_int_distribution<std::int64_t>(0, q - 2)(rng);
  }
  std::size_t used = 0;
  const auto t = std::stoll(spec, &used);
  if (used != spec.size()) throw std::invalid_argument("bad character index '" + spec + "'");
  return reduce_mod(t, q - 1);
}

/// Two twist indices drawn from one seed (census and scans).
inline std::pair<std::int64_t, std::int64_t> seeded_twists(std::int64_t q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> dist(0, q - 2);
  const auto a = dist(rng);
  const auto b = dist(rng);
  return {a, b};
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_slope: need two or more points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// One row of the scan CSV.
struct ScanRow {
  std::int64_t q = 0;
  std::int64_t ell = 1;
  std::int64_t omega1 = 0;
  std::int64_t omega2 = 0;
  cplx value;
  int main_term = 0;
  double defect = 0.0;
  double seconds = 0.0;
};

class Stopwatch {
 public:
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline ScanRow scan_cubic(std::int64_t q, std::int64_t ell, std::int64_t t1, std::int64_t t2) {
  Stopwatch sw;
  MomentContext mc(q);
  const auto r = cubic_moment_dirichlet(mc, t1, t2, ell);
  return {q, ell, r.omega1, r.omega2, r.value, r.main_term, r.defect, sw.seconds()};
}

/// value = proportion (real), defect = proportion.
inline ScanRow scan_census(std::int64_t q, std::uint64_t seed) {
  Stopwatch sw;
  MomentContext mc(q);
  const auto [t1, t2] = seeded_twists(q, seed);
  const auto c = census(mc, t1, t2);
  return {q, 1, t1, t2, cplx{c.proportion, 0.0}, 0, c.proportion, sw.seconds()};
}

struct TwistSumRow {
  std::int64_t q = 0;
  std::string kernel;
  std::string coeff;
  TwistSumResult result;
  double seconds = 0.0;
};

/// "tau" or "divisor:<t_idx>:<t>"
inline TwistCoefficients parse_coefficients(const std::string& spec, const CharacterGroup& g, const HeckeTable& tau) {
  if (spec == "tau") return CuspCoefficients{&tau};
  const std::string prefix = "divisor:";
  if (spec.rfind(prefix, 0) == 0) {
    const auto rest = spec.substr(prefix.size());
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("coefficients: expected divisor:<t_idx>:<t>");
    return EisensteinCoefficients{g.character(std::stoll(rest.substr(0, colon))), std::stod(rest.substr(colon + 1))};
  }
  throw std::invalid_argument("coefficients: expected tau or divisor:<t_idx>:<t>");
}

/// S = sum_n a(n) K(n) V(n/q) with V the bump on [1, 2].
inline TwistSumRow twist_sum_experiment(std::int64_t q, const std::string& kernel, const std::string& coeff) {
  Stopwatch sw;
  auto ctx = build_context(q);
  CharacterGroup g(ctx);
  const auto k = make_kernel(g, kernel);
  const SmoothCutoff v(1.0);
  const auto X = static_cast<double>(q);
  const auto tau = build_tau(static_cast<std::size_t>(2 * q + 2));
  const auto r = twist_sum(parse_coefficients(coeff, g, tau), k, v, X);
  return {q, kernel, coeff, r, sw.seconds()};
}

/// Slope of log(|S|/M) against log q across the list.
inline double twist_sum_slope(const std::vector<TwistSumRow>& rows) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(std::log(static_cast<double>(r.q)));
    y.push_back(std::log(r.result.ratio * static_cast<double>(r.q)));
  }
  return fit_slope(x, y);
}

}  // namespace momentlab
