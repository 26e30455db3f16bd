#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "momentlab/ff_core.hpp"

namespace momentlab {

/// A bounded function on F_q stored as a value table, with a declared
/// sup-norm bound and a short description of where it came from.
class TraceFunction {
 public:
  TraceFunction(std::int64_t q, CVec values, std::string kernel, double sup_bound = -1.0)
      : q_(q), values_(std::move(values)), kernel_(std::move(kernel)) {
    if (static_cast<std::int64_t>(values_.size()) != q_) {
      throw std::invalid_argument("TraceFunction: table length " + std::to_string(values_.size()) +
                                  " does not match q=" + std::to_string(q_));
    }
    const double observed = max_abs();
    if (sup_bound < 0.0) {
      sup_ = observed;
    } else {
      if (observed > sup_bound * (1.0 + 1e-12) + 1e-12) {
        throw std::invalid_argument("TraceFunction: declared sup bound is below the observed maximum");
      }
      sup_ = sup_bound;
    }
  }

  [[nodiscard]] std::int64_t q() const { return q_; }
  [[nodiscard]] const CVec& values() const { return values_; }
  [[nodiscard]] double sup_bound() const { return sup_; }
  [[nodiscard]] const std::string& kernel() const { return kernel_; }

  /// K(n mod q) for any integer n.
  [[nodiscard]] cplx operator()(std::int64_t n) const { return values_[static_cast<std::size_t>(reduce_mod(n, q_))]; }

  [[nodiscard]] double max_abs() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  [[nodiscard]] double l2_norm_squared() const {
    double s = 0.0;
    for (const auto& v : values_) s += std::norm(v);
    return s;
  }

 private:
  std::int64_t q_;
  CVec values_;
  std::string kernel_;
  double sup_ = 0.0;
};

}  // namespace momentlab
