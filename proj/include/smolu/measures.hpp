// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "smolu/grid.hpp"
#include "smolu/kernel.hpp"
#include "smolu/particles.hpp"

namespace smolu {

/// Smooth test function on the periodic box.
class TestFunction {
 public:
  virtual ~TestFunction() = default;
  virtual double value(const Vec& x) const = 0;
  virtual Vec gradient(const Vec& x) const = 0;
  virtual double laplacian(const Vec& x) const = 0;
  virtual std::string describe() const = 0;
};

/// cos(2 pi k.x / L) or sin(2 pi k.x / L).
class FourierMode final : public TestFunction {
 public:
  FourierMode(int d, double L, std::array<int, kMaxDim> k, bool cosine);
  double value(const Vec& x) const override;
  Vec gradient(const Vec& x) const override;
  double laplacian(const Vec& x) const override;
  std::string describe() const override;
  int l1_order() const;

 private:
  int d_;
  Vec wave_{};
  std::array<int, kMaxDim> k_{};
  bool cosine_;
};

/// exp(-|x - c|^2 / (2 w^2)) with minimum-image distance on the box.
class GaussianBump final : public TestFunction {
 public:
  GaussianBump(int d, double L, const Vec& center, double width);
  double value(const Vec& x) const override;
  Vec gradient(const Vec& x) const override;
  double laplacian(const Vec& x) const override;
  std::string describe() const override;

 private:
  Vec offset(const Vec& x) const;
  int d_;
  double L_;
  Vec center_;
  double width_;
};

/// Constant function 1.
class UnitFunction final : public TestFunction {
 public:
  double value(const Vec&) const override { return 1.0; }
  Vec gradient(const Vec&) const override { return {}; }
  double laplacian(const Vec&) const override { return 0.0; }
  std::string describe() const override { return "1"; }
};

struct WeightedTest {
  std::shared_ptr<const TestFunction> phi;
  double weight = 1.0;
};

struct TestFunctionFamily {
  std::vector<WeightedTest> members;

  /// Real Fourier modes with |k|_1 <= kmax (one representative per +-k pair,
  /// cos and sin), weights 2^{-|k|_1}; the constant mode has weight 1.
  static TestFunctionFamily fourier(int d, double L, int kmax = 4);
  /// Gaussian bumps centred on a per_axis^d lattice, weights 1/count.
  static TestFunctionFamily gaussian_bumps(int d, double L, int per_axis,
                                           double width);
};

/// Polynomial mollifier chi(x) = c (1 - |x|^2)^3 on B(0,1), chi_delta(x) =
/// delta^{-d} chi(x / delta).
struct MollifierSpec {
  double delta = 0.1;

  double chi_delta(const Vec& x, int d) const;
};

/// Per-mass point sets with common weight 1/N.
struct EmpiricalMeasure {
  int d = 1;
  double L = 1.0;
  long long N = 1;
  std::vector<std::vector<double>> points;  // points[m-1] is flat, size k*d

  int M() const { return static_cast<int>(points.size()); }
  std::size_t count(int m) const { return points.at(m - 1).size() / d; }
  double total_mass(int m) const { return static_cast<double>(count(m)) / N; }
  const double* point(int m, std::size_t i) const {
    return points.at(m - 1).data() + i * d;
  }
};

/// Groups the active particles by mass with weight 1/N.
EmpiricalMeasure snapshot(const ParticleState& state, long long N, int M,
                          double L);

/// <phi, mu^m> = (1/N) sum_{i: m_i = m} phi(x_i), compensated summation.
double pair(const EmpiricalMeasure& mu, int m, const TestFunction& phi);

/// int phi u over the grid (cell-centre rule).
double field_pair(const GridGeometry& grid, const std::vector<double>& values,
                  const TestFunction& phi);

/// w(x) = <chi_delta(. - x), mu^m> sampled on the grid. Each particle's
/// stencil is renormalised so its discrete integral is exactly 1/N.
std::vector<double> smoothed_density(const EmpiricalMeasure& mu, int m,
                                     const MollifierSpec& moll,
                                     const GridGeometry& grid);

struct Discrepancy {
  std::vector<double> per_mass;
  double aggregate = 0.0;
};

/// D_m = sum_j w_j |<phi_j, mu^m> - int phi_j u_m|, aggregate = sum_m D_m.
Discrepancy discrepancy(const EmpiricalMeasure& mu, const FieldState& field,
                        const TestFunctionFamily& family);

/// Same functional between two grid states.
Discrepancy field_discrepancy(const FieldState& a, const FieldState& b,
                              const TestFunctionFamily& family);

/// <theta_eps(x-y) phi(x) psi(y), mu^m(dx) mu^n(dy)> via the cell list.
double quadratic_pairing(const EmpiricalMeasure& mu, int m, int n,
                         const KernelSpec& kernel, const TestFunction& phi,
                         const TestFunction& psi);

}  // namespace smolu
