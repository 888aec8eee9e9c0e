// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include "smolu/types.hpp"

namespace smolu {

enum class KernelShape {
  kAnnularBump,  // smooth C-infinity bump on the annulus iota < |x| < C0
  kAnnularHat,   // piecewise-linear tent on the same annulus (Lipschitz)
};

KernelShape parse_kernel_shape(const std::string& name);
std::string to_string(KernelShape shape);

/// Radially symmetric coagulation kernel theta and its rescaling
///   theta_eps(v) = eps^{-d} theta(v / eps).
/// theta vanishes on B(0, iota) and outside B(0, C0); the normalisation
/// constant making int theta = 1 is computed once at construction.
class KernelSpec {
 public:
  KernelSpec(int d, double epsilon, double C0 = 1.0, double iota = 0.1,
             KernelShape shape = KernelShape::kAnnularBump);

  int dim() const { return d_; }
  double epsilon() const { return epsilon_; }
  double C0() const { return c0_; }
  double iota() const { return iota_; }
  KernelShape shape() const { return shape_; }
  double norm_const() const { return norm_const_; }

  /// Same profile and normalisation at another scale.
  KernelSpec with_epsilon(double epsilon) const;

  /// Unnormalised radial profile s(r).
  double profile(double r) const;
  /// theta at radius r (normalised).
  double theta_radial(double r) const { return norm_const_ * profile(r); }
  double theta_eps_radial(double r) const;
  double theta_eps(const Vec& v) const;

  /// Interaction range C0 * eps.
  double range() const { return c0_ * epsilon_; }
  /// Largest value of theta_eps.
  double theta_eps_max() const;

  /// int_{R^d} theta, by an independent radial rule (tanh-sinh).
  double integral_check() const;

 private:
  KernelSpec() = default;
  double radial_moment() const;

  int d_ = 1;
  double epsilon_ = 1.0;
  double c0_ = 1.0;
  double iota_ = 0.1;
  KernelShape shape_ = KernelShape::kAnnularBump;
  double norm_const_ = 1.0;
  double profile_max_ = 1.0;
};

enum class ScheduleMode { kLocal, kModerate, kFixed };

ScheduleMode parse_schedule_mode(const std::string& name);
std::string to_string(ScheduleMode mode);

/// How the interaction scale shrinks with the particle count.
///   local:    eps = c N^{-1/d} (d >= 2),  eps = c / N (d = 1)
///   moderate: eps = c N^{-1/(2d)}
///   fixed:    eps = c (mean-field)
struct EpsilonSchedule {
  ScheduleMode mode = ScheduleMode::kLocal;
  double c = 1.0;

  double epsilon_for(long long N, int d) const;
  /// Non-empty when eps(N) does not satisfy the vanishing-range scaling
  /// conditions at the given (largest) N.
  std::optional<std::string> scaling_warning(long long N, int d) const;
};

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);
/// Surface area of the unit sphere in R^d (2 for d = 1).
double unit_sphere_area(int d);

}  // namespace smolu

namespace smolu {

/// int_{B(0,1)} (1 - |x|^2)^3 dx in dimension d.
double cubic_bump_integral(int d);

}  // namespace smolu
