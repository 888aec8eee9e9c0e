// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smolu/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace smolu {

double GridGeometry::cell_volume() const { return std::pow(h(), d); }

std::size_t GridGeometry::cells() const {
  std::size_t c = 1;
  for (int k = 0; k < d; ++k) c *= static_cast<std::size_t>(n);
  return c;
}

void GridGeometry::validate() const {
  if (d < 1 || d > kMaxDim) throw ConfigError("grid: d must be 1, 2 or 3");
  if (n < 16) {
    throw ConfigError("grid: n_cells must be >= 16 (got " + std::to_string(n) +
                      ")");
  }
  if (!(L > 0.0)) throw ConfigError("grid: L must be > 0");
}

std::array<int, kMaxDim> GridGeometry::unflatten(std::size_t cell) const {
  std::array<int, kMaxDim> idx{};
  for (int k = d - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(cell % static_cast<std::size_t>(n));
    cell /= static_cast<std::size_t>(n);
  }
  return idx;
}

std::size_t GridGeometry::flatten(const std::array<int, kMaxDim>& idx) const {
  std::size_t c = 0;
  for (int k = 0; k < d; ++k) {
    const int v = ((idx[k] % n) + n) % n;
    c = c * static_cast<std::size_t>(n) + static_cast<std::size_t>(v);
  }
  return c;
}

std::size_t GridGeometry::stride(int axis) const {
  std::size_t s = 1;
  for (int k = d - 1; k > axis; --k) s *= static_cast<std::size_t>(n);
  return s;
}

std::size_t GridGeometry::shift(std::size_t cell, int axis,
                                int offset) const {
  auto idx = unflatten(cell);
  idx[axis] += offset;
  return flatten(idx);
}

Vec GridGeometry::center(std::size_t cell) const {
  const auto idx = unflatten(cell);
  Vec x{};
  for (int k = 0; k < d; ++k) x[k] = -0.5 * L + (idx[k] + 0.5) * h();
  return x;
}

FieldState::FieldState(const GridGeometry& g, int masses)
    : geometry(g), M(masses),
      u(static_cast<std::size_t>(masses), std::vector<double>(g.cells(), 0.0)) {}

double FieldState::integral(int m) const {
  CompensatedSum s;
  for (double v : u.at(static_cast<std::size_t>(m - 1))) s.add(v);
  return s.value() * geometry.cell_volume();
}

double FieldState::sup_norm(int m) const {
  double s = 0.0;
  for (double v : u.at(static_cast<std::size_t>(m - 1))) s = std::max(s, std::abs(v));
  return s;
}

double FieldState::l2_norm(int m) const {
  double s = 0.0;
  for (double v : u.at(static_cast<std::size_t>(m - 1))) s += v * v;
  return std::sqrt(s * geometry.cell_volume());
}

double FieldState::l1_norm(int m) const {
  double s = 0.0;
  for (double v : u.at(static_cast<std::size_t>(m - 1))) s += std::abs(v);
  return s * geometry.cell_volume();
}

double FieldState::first_moment() const {
  double s = 0.0;
  for (int m = 1; m <= M; ++m) s += m * integral(m);
  return s;
}

double FieldState::total_integral() const {
  double s = 0.0;
  for (int m = 1; m <= M; ++m) s += integral(m);
  return s;
}

double l2_distance(const FieldState& a, const FieldState& b) {
  if (a.M != b.M || a.geometry.cells() != b.geometry.cells()) {
    throw ConfigError("l2_distance: incompatible field states");
  }
  double s = 0.0;
  for (std::size_t m = 0; m < a.u.size(); ++m) {
    for (std::size_t c = 0; c < a.u[m].size(); ++c) {
      const double diff = a.u[m][c] - b.u[m][c];
      s += diff * diff;
    }
  }
  return std::sqrt(s * a.geometry.cell_volume());
}

}  // namespace smolu
