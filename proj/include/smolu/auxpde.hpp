// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "smolu/kernel.hpp"
#include "smolu/noise_field.hpp"

namespace smolu {

/// Terminal-value problem on the (x, y) plane for d = 1:
///   [d_t + A] r = -theta_eps(x - y + z),  r(T) = 0,
///   A = lambda^2/2 (d_xx + d_yy) + 1/2 tr(Qhat D^2),
///   Qhat = [[Q(x,x), Q(x,y)], [Q(y,x), Q(y,y)]].
/// The plane is truncated to the box [-box, box]^2 with r = 0 on its edge.
struct AuxProblem {
  double epsilon = 0.04;
  double z = 0.0;
  double T = 0.1;
  double lambda = 1.0;
  NoiseFieldSet noise{1};
  double box = 1.0;
  double h = 0.0;        // 0: epsilon / 4
  double window = 0.25;  // statistics use |x|, |y| <= window
  KernelShape shape = KernelShape::kAnnularBump;
  double C0 = 1.0;
  double iota = 0.1;
  /// Replaces theta_eps(x - y + z) when set.
  std::function<double(double x, double y)> source;

  double spacing() const { return h > 0.0 ? h : epsilon / 4.0; }
  /// Throws ConfigError when the grid does not resolve epsilon, the
  /// dimension is not 1, or the stencil cannot be made monotone.
  void validate() const;
};

struct AuxResult {
  int n = 0;                // nodes per axis (including the boundary)
  double h = 0.0;
  double dt = 0.0;
  long long steps = 0;
  std::vector<double> r;    // r(0, x_i, y_j), row-major in i
  double sup_r = 0.0;       // over the statistics window
  double sup_grad_x = 0.0;  // sup |d_x r| over the window, centred differences
  double sup_r_full = 0.0;
  double min_r = 0.0;
  std::vector<double> profile_x;  // r(0, x, y=0) along the centre row
  std::vector<double> profile_r;
};

AuxResult solve_aux(const AuxProblem& prob);

struct GradientFit {
  std::vector<double> epsilon;
  std::vector<double> sup_r;
  std::vector<double> sup_grad;
  double slope = 0.0;      // against |log eps|
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least-squares fit y = a x + b with coefficient of determination.
void linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                double& slope, double& intercept, double& r_squared);

/// Solves at each epsilon (z = 0) and fits sup |d_x r| against |log eps|.
/// Requires at least four levels.
GradientFit check_gradient_scaling(const AuxProblem& base,
                                   const std::vector<double>& eps_levels);

/// sup |r^{eps,z} - r^{eps,0}| over the window for each z.
std::vector<double> z_continuity(const AuxProblem& base,
                                 const std::vector<double>& z_values);

}  // namespace smolu
