// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "smolu/grid.hpp"
#include "smolu/noise_field.hpp"
#include "smolu/particles.hpp"

namespace smolu {

enum class TransportScheme { kCentered, kUpwind };
enum class SpdeScheme { kIto, kHeun };

TransportScheme parse_transport_scheme(const std::string& name);
SpdeScheme parse_spde_scheme(const std::string& name);
std::string to_string(TransportScheme s);
std::string to_string(SpdeScheme s);

/// Gain-loss term of capped constant-kernel coagulation at one point:
///   F_m = sum_{n<m} u_n u_{m-n} - 2 u_m sum_{n<=M} u_n   (m is 1-based)
double smoluchowski_rhs(std::span<const double> u, int m);

/// Discrete operators on the periodic grid. Transport by field k is the
/// conservative centred flux form
///   (B_k u)_c = -(1/h) sum_a [F_a(c) - F_a(c - e_a)],
///   F_a(c) = s^a_k(c + e_a/2) (u_c + u_{c+e_a}) / 2,
/// with face velocities taken from the stream function when the field has
/// one, so their discrete divergence is zero. Eddy diffusion is applied as
/// 1/2 sum_k B_k B_k, a flux-form discretisation of 1/2 div(Q(x,x) grad).
class EllipticOperator {
 public:
  EllipticOperator(const GridGeometry& grid, const NoiseFieldSet& noise,
                   double lambda);

  const GridGeometry& grid() const { return grid_; }
  std::size_t fields() const { return velocity_.size(); }
  double half_lambda_sq() const { return half_lambda_sq_; }
  double max_q_norm() const { return max_q_norm_; }
  double max_speed_sum() const { return max_speed_sum_; }
  /// Q(x,x) at a cell centre.
  const Mat& q_diag(std::size_t cell) const { return q_diag_[cell]; }

  /// out += coeff * Laplacian(in)
  void add_laplacian(std::span<const double> in, std::span<double> out,
                     double coeff) const;
  /// out += coeff * B_k(in). With upwind faces the donor cell follows the
  /// sign of coeff * velocity.
  void add_transport(std::size_t k, std::span<const double> in,
                     std::span<double> out, double coeff,
                     TransportScheme scheme = TransportScheme::kCentered) const;
  /// out += coeff * 1/2 sum_k B_k B_k (in)
  void add_eddy(std::span<const double> in, std::span<double> out,
                double coeff) const;
  /// out += coeff * (lambda^2/2 Laplacian + eddy)(in)
  void add_generator(std::span<const double> in, std::span<double> out,
                     double coeff) const;

 private:
  GridGeometry grid_;
  double half_lambda_sq_;
  double max_q_norm_ = 0.0;
  double max_speed_sum_ = 0.0;
  std::vector<std::vector<std::uint32_t>> plus_;   // [axis][cell]
  std::vector<std::vector<std::uint32_t>> minus_;  // [axis][cell]
  std::vector<std::vector<std::vector<double>>> velocity_;  // [k][axis][cell]
  std::vector<Mat> q_diag_;
  mutable std::vector<double> scratch_;
};

struct SpdeOptions {
  double lambda = 1.0;
  bool reaction = true;
  TransportScheme transport = TransportScheme::kCentered;
  /// Adds the second-order Ito-Taylor term 1/2 (G^2 - dt sum_k B_k^2) u with
  /// G = sum_k dW_k B_k, which lifts the strong order of the explicit scheme
  /// from 1/2 to 1 for commuting fields. Ignored with upwind transport.
  bool milstein = true;
  bool clamp = true;
  /// Abort when cumulative clamped mass exceeds this fraction of the
  /// reference mass.
  double clamp_abort_fraction = 1e-3;
};

class SpdeSolver {
 public:
  SpdeSolver(const GridGeometry& grid, const NoiseFieldSet& noise,
             const SpdeOptions& options);

  const EllipticOperator& op() const { return op_; }
  const SpdeOptions& options() const { return options_; }
  std::size_t fields() const { return op_.fields(); }

  /// Largest dt meeting both stability bounds:
  ///   dt <= 0.25 h^2 / (d (lambda^2 + max |Q(x,x)|))
  ///   dt <= 0.25 h / (3 max sum_k |sigma_k|)
  double max_stable_dt() const;
  /// Throws ConfigError naming the violated bound.
  void check_stability(double dt) const;

  /// Explicit step of the Ito form: generator + reaction + transport noise.
  void step_ito(FieldState& state, std::span<const double> dw, double dt) const;
  /// Predictor-corrector step of the Stratonovich form (no eddy term).
  void step_heun(FieldState& state, std::span<const double> dw,
                 double dt) const;
  void step(FieldState& state, std::span<const double> dw, double dt,
            SpdeScheme scheme) const;

 private:
  void reaction(const FieldState& state,
                std::vector<std::vector<double>>& out) const;
  void finish_step(FieldState& state, double dt) const;

  GridGeometry grid_;
  EllipticOperator op_;
  SpdeOptions options_;
};

/// Samples u_m(0, x) = r_m p_m(x) at cell centres.
FieldState initial_field(const GridGeometry& grid, int M,
                         const std::vector<double>& r,
                         const std::vector<DensitySpec>& densities);

using FieldObserver = std::function<void(const FieldState&)>;

struct FreeRecord {
  double t = 0.0;
  double sup_norm = 0.0;
  double mass = 0.0;
};

/// Linear transport-diffusion equation (no coagulation) for one component;
/// records sup-norm and integral after every step.
std::vector<FreeRecord> solve_free(const GridGeometry& grid,
                                   const NoiseFieldSet& noise, double lambda,
                                   FieldState& state, const NoisePath& path,
                                   double dt, double T,
                                   SpdeScheme scheme = SpdeScheme::kIto,
                                   const SpdeOptions& base = {});

/// Full nonlinear system to time T. Observers run at t = 0, every
/// `observe_every` steps, and at T.
FieldState solve_system(const SpdeSolver& solver, FieldState init,
                        const NoisePath& path, double dt, double T,
                        const std::vector<FieldObserver>& observers = {},
                        long long observe_every = 0,
                        SpdeScheme scheme = SpdeScheme::kIto);

}  // namespace smolu
