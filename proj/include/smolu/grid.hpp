// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "smolu/types.hpp"

namespace smolu {

/// Uniform periodic grid on [-L/2, L/2)^d with n cells per axis.
struct GridGeometry {
  int d = 1;
  double L = 1.0;
  int n = 16;

  double h() const { return L / n; }
  double cell_volume() const;
  std::size_t cells() const;
  /// Throws ConfigError when n < 16 or d is out of range.
  void validate() const;
  Vec center(std::size_t cell) const;
  std::array<int, kMaxDim> unflatten(std::size_t cell) const;
  std::size_t flatten(const std::array<int, kMaxDim>& idx) const;
  /// Neighbour of `cell` shifted by `offset` along `axis`, periodic.
  std::size_t shift(std::size_t cell, int axis, int offset) const;
  /// Flat stride of one step along `axis` (axis d-1 is contiguous).
  std::size_t stride(int axis) const;
};

/// Grid densities u_1..u_M at time t.
struct FieldState {
  GridGeometry geometry;
  int M = 1;
  double t = 0.0;
  std::vector<std::vector<double>> u;
  double clamped_mass = 0.0;  // cumulative mass added by the negativity clamp
  double reference_mass = 0.0;  // total integral at the start of the solve

  FieldState() = default;
  FieldState(const GridGeometry& g, int masses);

  double integral(int m) const;     // m is 1-based
  double sup_norm(int m) const;
  double l2_norm(int m) const;
  double l1_norm(int m) const;
  /// sum_m m * int u_m
  double first_moment() const;
  double total_integral() const;
};

/// L2 distance between two states over all components.
double l2_distance(const FieldState& a, const FieldState& b);

}  // namespace smolu
