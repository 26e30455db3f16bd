#pragma once

// Values produced by the independent oracles, frozen into a JSON file that
// the tests compare the fast paths against.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "momentlab/experiments.hpp"
#include "momentlab/oracle.hpp"
#include "momentlab/trace_fn.hpp"

namespace momentlab {

inline nlohmann::ordered_json to_json(cplx z) { return nlohmann::ordered_json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const nlohmann::ordered_json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

/// Median of |C| / sqrt(q) over an exhaustive scan, times two.
inline double median_threshold(const TraceFunction& k, const DirichletCharacter& omega) {
  const auto scan = correlation_scan(k, omega, 1e300, ScanMode::full());
  std::vector<double> v;
  v.reserve(scan.records.size());
  for (const auto& r : scan.records) v.push_back(std::abs(r.value));
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
  return 2.0 * v[v.size() / 2] / std::sqrt(static_cast<double>(k.q()));
}

inline nlohmann::ordered_json scan_fixture(const std::string& kernel, std::int64_t q) {
  auto ctx = build_context(q);
  CharacterGroup g(ctx);
  const auto k = make_kernel(g, kernel);
  const double M = median_threshold(k, g.principal());
  const auto scan = correlation_scan(k, g.principal(), M, ScanMode::full());
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (auto tag : kAllMatrixTags) {
    const auto it = scan.exceeding_histogram.find(tag);
    hist[to_string(tag)] = it == scan.exceeding_histogram.end() ? 0 : it->second;
  }
  return {{"kernel", kernel},
          {"q", q},
          {"M", M},
          {"exceeding", scan.exceeding},
          {"parabolic_exceeding", scan.parabolic_exceeding},
          {"outside_bruhat_exceeding", scan.outside_bruhat_exceeding},
          {"point_pairs_needed", scan.point_pairs_needed},
          {"exceeding_histogram", hist}};
}

inline nlohmann::ordered_json record_derived_fixtures() {
  nlohmann::ordered_json j;
  j["suite"] = "derived";

  {
    auto ctx = build_context(5);
    CharacterGroup g(ctx);
    const auto chi = g.quadratic();
    // Direct series to 10^7; the alternating-period tail is below 1e-14.
    double series = 0.0;
    for (std::int64_t n = 10000000; n >= 1; --n) {
      const double v = chi(n).real();
      if (v != 0.0) series += v / (static_cast<double>(n) * static_cast<double>(n));
    }
    j["hurwitz"]["q5_quadratic_s2_series"] = series;
    j["hurwitz"]["q5_quadratic_s2"] = to_json(hurwitz_oracle(chi, 2.0));
    j["hurwitz"]["q5_quadratic_half"] = to_json(hurwitz_oracle(chi, 0.5));
  }
  {
    auto ctx = build_context(7);
    CharacterGroup g(ctx);
    auto arr = nlohmann::ordered_json::array();
    for (std::int64_t t = 1; t < 6; ++t) arr.push_back(to_json(hurwitz_oracle(g.character(t), 0.5)));
    j["hurwitz"]["q7_half_by_index"] = arr;
  }
  {
    auto ctx = build_context(101);
    CharacterGroup g(ctx);
    auto arr = nlohmann::ordered_json::array();
    for (std::int64_t t = 1; t < 100; ++t) arr.push_back(to_json(hurwitz_oracle(g.character(t), 0.5)));
    j["hurwitz"]["q101_half_by_index"] = arr;
  }
  {
    const auto tau = oracle::tau_direct(9);
    auto arr = nlohmann::ordered_json::array();
    for (std::size_t n = 1; n <= 9; ++n) arr.push_back(to_string(tau[n]));
    j["tau_direct_1_to_9"] = arr;
  }
  {
    auto ctx = build_context(13);
    CharacterGroup g(ctx);
    j["cubic_moment_q13_trivial_ell1"] = to_json(oracle::cubic_moment(g, 0, 0, 1));
    j["cubic_moment_q13_trivial_ell2"] = to_json(oracle::cubic_moment(g, 0, 0, 2));
  }
  {
    auto ctx = build_context(11);
    CharacterGroup g(ctx);
    const auto chi = g.character(1);
    j["triple_product_q11_t1_trivial"] = to_json(std::pow(hurwitz_oracle(chi, 0.5), 3));
  }
  j["correlation_kl3_q13"] = scan_fixture("kl3", 13);
  j["correlation_kl2_q11"] = scan_fixture("kl2", 11);
  {
    auto rows = nlohmann::ordered_json::array();
    std::vector<TwistSumRow> raw;
    for (std::int64_t q : {211, 401, 809, 1009, 2003}) {
      raw.push_back(twist_sum_experiment(q, "kl3", "tau"));
      rows.push_back({{"q", q}, {"value", to_json(raw.back().result.value)}, {"ratio", raw.back().result.ratio}});
    }
    j["twist_sum_kl3_tau"] = {{"rows", rows}, {"slope", twist_sum_slope(raw)}};
  }
  {
    MomentContext mc(809);
    const auto [t1, t2] = seeded_twists(809, 7);
    const auto c = census(mc, t1, t2);
    j["census_q809_seed7"] = {{"omega1", t1}, {"omega2", t2}, {"count", c.count}, {"proportion", c.proportion}};
  }
  return j;
}

}  // namespace momentlab
