// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smolu/kernel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>

namespace smolu {

KernelShape parse_kernel_shape(const std::string& name) {
  if (name == "annular-bump") return KernelShape::kAnnularBump;
  if (name == "annular-hat") return KernelShape::kAnnularHat;
  throw ConfigError("kernel: unknown shape '" + name +
                    "' (known: annular-bump, annular-hat)");
}

std::string to_string(KernelShape shape) {
  return shape == KernelShape::kAnnularBump ? "annular-bump" : "annular-hat";
}

double unit_ball_volume(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    case 3: return 4.0 / 3.0 * std::numbers::pi;
    default: throw ConfigError("unsupported dimension " + std::to_string(d));
  }
}

double unit_sphere_area(int d) { return d * unit_ball_volume(d); }

KernelSpec::KernelSpec(int d, double epsilon, double C0, double iota,
                       KernelShape shape)
    : d_(d), epsilon_(epsilon), c0_(C0), iota_(iota), shape_(shape) {
  if (d < 1 || d > kMaxDim) {
    throw ConfigError("kernel: dimension must be 1, 2 or 3");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("kernel: epsilon must be positive and finite");
  }
  if (!(C0 > 0.0) || !(iota >= 0.0)) {
    throw ConfigError("kernel: need C0 > 0 and iota >= 0");
  }
  if (!(iota < C0)) {
    throw ConfigError(
        "kernel: degenerate support (iota >= C0 makes theta identically 0, "
        "so int theta = 1 cannot hold)");
  }
  norm_const_ = 1.0;
  const double moment = radial_moment();
  if (!(moment > 0.0)) throw ConfigError("kernel: profile has zero mass");
  norm_const_ = 1.0 / moment;
  profile_max_ = profile(0.5 * (iota_ + c0_));
  const double check = integral_check();
  if (std::abs(check - 1.0) > 1e-8) {
    throw ConfigError("kernel: normalisation check failed, int theta = " +
                      std::to_string(check));
  }
}

KernelSpec KernelSpec::with_epsilon(double epsilon) const {
  if (!(epsilon > 0.0)) throw ConfigError("kernel: epsilon must be positive");
  KernelSpec copy = *this;
  copy.epsilon_ = epsilon;
  return copy;
}

double KernelSpec::profile(double r) const {
  if (r <= iota_ || r >= c0_) return 0.0;
  const double u = (2.0 * r - iota_ - c0_) / (c0_ - iota_);  // in (-1, 1)
  if (shape_ == KernelShape::kAnnularHat) return 1.0 - std::abs(u);
  const double w = 1.0 - u * u;
  return std::exp(1.0 - 1.0 / w);
}

double KernelSpec::radial_moment() const {
  auto integrand = [this](double r) {
    return profile(r) * std::pow(r, d_ - 1);
  };
  const double mid = 0.5 * (iota_ + c0_);
  double err = 0.0;
  // split at the peak so the hat's kink sits on a panel boundary
  const double a = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, iota_, mid, 15, 1e-14, &err);
  const double b = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, mid, c0_, 15, 1e-14, &err);
  return unit_sphere_area(d_) * (a + b);
}

double KernelSpec::integral_check() const {
  auto integrand = [this](double r) {
    return theta_radial(r) * std::pow(r, d_ - 1);
  };
  boost::math::quadrature::tanh_sinh<double> rule;
  const double mid = 0.5 * (iota_ + c0_);
  const double total = rule.integrate(integrand, iota_, mid) +
                       rule.integrate(integrand, mid, c0_);
  return unit_sphere_area(d_) * total;
}

double KernelSpec::theta_eps_radial(double r) const {
  const double scaled = r / epsilon_;
  if (scaled <= iota_ || scaled >= c0_) return 0.0;
  return std::pow(epsilon_, -d_) * theta_radial(scaled);
}

double KernelSpec::theta_eps(const Vec& v) const {
  return theta_eps_radial(norm(v, d_));
}

double KernelSpec::theta_eps_max() const {
  return std::pow(epsilon_, -d_) * norm_const_ * profile_max_;
}

// ---------------------------------------------------------------------------

ScheduleMode parse_schedule_mode(const std::string& name) {
  if (name == "local") return ScheduleMode::kLocal;
  if (name == "moderate") return ScheduleMode::kModerate;
  if (name == "fixed") return ScheduleMode::kFixed;
  throw ConfigError("kernel: unknown schedule mode '" + name +
                    "' (known: local, moderate, fixed)");
}

std::string to_string(ScheduleMode mode) {
  switch (mode) {
    case ScheduleMode::kLocal: return "local";
    case ScheduleMode::kModerate: return "moderate";
    case ScheduleMode::kFixed: return "fixed";
  }
  return "?";
}

double EpsilonSchedule::epsilon_for(long long N, int d) const {
  if (!(c > 0.0)) throw ConfigError("kernel: schedule prefactor c must be > 0");
  if (N < 1) throw ConfigError("kernel: N must be >= 1");
  const double n = static_cast<double>(N);
  switch (mode) {
    case ScheduleMode::kLocal:
      return d == 1 ? c / n : c * std::pow(n, -1.0 / d);
    case ScheduleMode::kModerate:
      return c * std::pow(n, -1.0 / (2.0 * d));
    case ScheduleMode::kFixed:
      return c;
  }
  return c;
}

std::optional<std::string> EpsilonSchedule::scaling_warning(long long N,
                                                            int d) const {
  if (mode == ScheduleMode::kFixed) {
    return "schedule 'fixed': eps = " + std::to_string(c) +
           " does not vanish as N grows (mean-field regime, outside the "
           "local/moderate scaling)";
  }
  const double eps = epsilon_for(N, d);
  const double n = static_cast<double>(N);
  // limsup eps^{1-d}/N < infinity (d >= 2), limsup |log eps|/N < infinity
  // (d = 1): flag when the ratio exceeds its value at the schedule's own
  // reference scale by a wide margin.
  const double ratio =
      d == 1 ? std::abs(std::log(eps)) / n : std::pow(eps, 1.0 - d) / n;
  const double reference =
      d == 1 ? (std::abs(std::log(c)) + 1.0) : std::pow(c, 1.0 - d);
  if (ratio > 10.0 * reference) {
    return "eps(N) = " + std::to_string(eps) + " at N = " + std::to_string(N) +
           " violates the vanishing-range scaling (ratio " +
           std::to_string(ratio) + ")";
  }
  return std::nullopt;
}

}  // namespace smolu

namespace smolu {

double cubic_bump_integral(int d) {
  switch (d) {
    case 1: return 32.0 / 35.0;
    case 2: return std::numbers::pi / 4.0;
    case 3: return 64.0 * std::numbers::pi / 315.0;
    default: throw ConfigError("unsupported dimension " + std::to_string(d));
  }
}

}  // namespace smolu
