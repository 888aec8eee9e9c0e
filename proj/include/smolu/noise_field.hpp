// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smolu/types.hpp"

namespace smolu {

/// Value of a vector field together with its first two spatial derivatives.
///   jacobian[a][b]   = d_b sigma^a
///   hessian[a][b][c] = d_b d_c sigma^a
struct FieldJet {
  Vec value{};
  Mat jacobian{};
  std::array<Mat, kMaxDim> hessian{};
};

/// Analytic divergence-free vector field with hand-coded derivatives.
class VectorField {
 public:
  virtual ~VectorField() = default;

  virtual int dim() const = 0;
  virtual FieldJet jet(const Vec& x) const = 0;
  virtual Vec value(const Vec& x) const { return jet(x).value; }
  virtual std::string describe() const = 0;

  /// False for fields that grow without bound (test-only descriptors).
  virtual bool bounded() const { return true; }

  /// Stream function psi with sigma = (d_2 psi, -d_1 psi), when the field is
  /// built from one (d = 2 only). Grid solvers use it to build face fluxes
  /// whose discrete divergence vanishes exactly.
  virtual std::optional<double> stream_function(const Vec&) const {
    return std::nullopt;
  }
};

/// sigma(x) = c.
class ConstantField final : public VectorField {
 public:
  ConstantField(int d, const Vec& c);
  int dim() const override { return d_; }
  FieldJet jet(const Vec& x) const override;
  std::string describe() const override;

 private:
  int d_;
  Vec c_;
};

/// sigma(x) = sin(k * x_coord + phase) e_component, component != coord.
/// Divergence-free because the only nonzero component does not depend on
/// its own coordinate.
class ShearField final : public VectorField {
 public:
  ShearField(int d, int component, int coord, double wavenumber,
             double phase = 0.0);
  int dim() const override { return d_; }
  FieldJet jet(const Vec& x) const override;
  std::string describe() const override;

 private:
  int d_;
  int component_;
  int coord_;
  double k_;
  double phase_;
};

/// Third-order jet of a scalar stream function in d = 2.
struct StreamJet {
  double psi = 0.0;
  std::array<double, 2> grad{};
  std::array<std::array<double, 2>, 2> hess{};
  std::array<std::array<std::array<double, 2>, 2>, 2> third{};
};

/// Planar field sigma = (d_2 psi, -d_1 psi); derived classes supply psi.
class StreamField2D : public VectorField {
 public:
  int dim() const override { return 2; }
  FieldJet jet(const Vec& x) const final;
  std::optional<double> stream_function(const Vec& x) const final {
    return stream_jet(x).psi;
  }
  virtual StreamJet stream_jet(const Vec& x) const = 0;
};

/// psi = s1(k1 x) s2(k2 y), s in {sin, cos}.
class EddyField final : public StreamField2D {
 public:
  /// variant bit 0 selects cos for the x factor, bit 1 for the y factor.
  EddyField(double k1, double k2, int variant);
  StreamJet stream_jet(const Vec& x) const override;
  std::string describe() const override;

 private:
  double k1_;
  double k2_;
  int variant_;
};

/// Rigid rotation sigma = (-y, x). Unbounded: test only.
class RotationField final : public StreamField2D {
 public:
  StreamJet stream_jet(const Vec& x) const override;
  std::string describe() const override { return "rotation (unbounded, test only)"; }
  bool bounded() const override { return false; }
};

/// Rotation whose stream function is multiplied by a compactly supported
/// smooth bump of radius rho; zero outside B(0, rho).
class WindowedRotationField final : public StreamField2D {
 public:
  explicit WindowedRotationField(double rho);
  StreamJet stream_jet(const Vec& x) const override;
  std::string describe() const override;

 private:
  double rho_;
};

/// Full covariance information at a pair of points.
struct CovarianceEval {
  Mat q_xy{};         // Q(x, y) = sum_k sigma_k(x) (x) sigma_k(y)
  Mat q_diag{};       // Q(x, x)
  Vec grad_q_diag{};  // sum_b d_b Q^{ab}(x, x)
};

/// The finite family {sigma_k} of environmental noise fields, each with a
/// scalar amplitude. Immutable after construction.
class NoiseFieldSet {
 public:
  NoiseFieldSet() = default;
  explicit NoiseFieldSet(int d) : d_(d) {}

  void add(std::shared_ptr<const VectorField> field, double amplitude = 1.0);
  void append(const NoiseFieldSet& other);

  int dim() const { return d_; }
  std::size_t size() const { return fields_.size(); }
  bool empty() const { return fields_.empty(); }
  bool bounded() const;
  double amplitude(std::size_t k) const { return amplitudes_.at(k); }
  const VectorField& field(std::size_t k) const { return *fields_.at(k); }

  /// sigma_k(x), amplitude included.
  Vec eval_field(std::size_t k, const Vec& x) const;
  FieldJet jet(std::size_t k, const Vec& x) const;
  /// div sigma_k(x) from the analytic Jacobian.
  double divergence(std::size_t k, const Vec& x) const;
  /// 1/2 sum_k (grad sigma_k . sigma_k)(x).
  Vec strat_correction(const Vec& x) const;
  CovarianceEval eval_covariance(const Vec& x, const Vec& y) const;
  /// Largest eigenvalue bound ||Q(x,x)||_2 (Frobenius norm is used as a safe
  /// upper bound) and sum_k |sigma_k(x)|.
  double q_diag_norm(const Vec& x) const;
  double speed_sum(const Vec& x) const;

  /// True when every field repeats with period L along every axis (sampled).
  bool periodic_on(double L, int samples = 64) const;

  std::string describe() const;

 private:
  int d_ = 0;
  std::vector<std::shared_ptr<const VectorField>> fields_;
  std::vector<double> amplitudes_;
};

/// Built-in descriptors:
///   constant           params = vector components (length d)
///   shear              params = [k] or [k, component, coord]; d >= 2
///   rotation           raw rigid rotation, d = 2, unbounded (test only)
///   rotation-windowed  params = [rho]; d = 2
///   periodic-eddies    d = 1: constant unit field; d = 2: params = [k1, k2
///                      (, variant)] stream-function mode; d = 3: params = [k]
///                      giving sin(k z) e_1 and cos(k z) e_2
NoiseFieldSet builtin_catalog(const std::string& name,
                              std::span<const double> params,
                              double amplitude, int d);

}  // namespace smolu
