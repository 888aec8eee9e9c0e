// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace smolu {

inline constexpr int kMaxDim = 3;

/// Fixed-capacity spatial vector; only the first `d` entries are meaningful.
using Vec = std::array<double, kMaxDim>;
using Mat = std::array<Vec, kMaxDim>;

/// Invalid or inconsistent input: bad parameters, violated stability bounds,
/// unknown names. Maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values, blow-up, or an abort triggered by a numerical guard.
/// Maps to exit status 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double dot(const Vec& a, const Vec& b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += a[i] * a[i];
  return std::sqrt(s);
}

/// Neumaier variant of compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace smolu
