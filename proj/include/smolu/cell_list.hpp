// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "smolu/types.hpp"

namespace smolu {

/// Minimum-image displacement a - b on the periodic box [-L/2, L/2)^d.
Vec periodic_delta(const double* a, const double* b, int d, double L);

/// Wraps a coordinate into [-L/2, L/2).
inline double wrap_coordinate(double x, double L) {
  double y = x - L * std::floor(x / L + 0.5);
  if (y >= 0.5 * L) y -= L;
  return y;
}

/// Uniform binning of points on the periodic box into cells of edge at least
/// `min_edge`. Pair enumeration visits cells in lexicographic order and, for
/// each cell, the half shell of forward neighbours, so every unordered pair
/// whose separation is below `min_edge` is produced exactly once and in a
/// fixed order. Falls back to an all-pairs sweep when the box holds fewer
/// than three cells per axis.
class CellList {
 public:
  /// `include(i)` selects which of the points take part.
  void build(std::span<const double> positions, int d, double L,
             double min_edge, const std::function<bool(std::size_t)>& include,
             std::size_t max_cells = 0);

  /// Calls f(i, j) with i, j point indices; within a cell i < j.
  template <class F>
  void for_each_pair(F&& f) const;

  std::size_t cells_per_axis() const { return per_axis_; }
  bool brute_force() const { return brute_; }
  const std::vector<std::uint32_t>& members() const { return members_; }

 private:
  std::size_t cell_of(const double* x) const;

  int d_ = 1;
  double L_ = 1.0;
  std::size_t per_axis_ = 1;
  double edge_ = 1.0;
  bool brute_ = true;
  std::vector<std::uint32_t> members_;  // point ids sorted by (cell, id)
  std::vector<std::uint32_t> start_;    // cell -> offset into members_
  std::vector<std::vector<std::ptrdiff_t>> shell_;  // per-dim offsets
};

template <class F>
void CellList::for_each_pair(F&& f) const {
  if (brute_) {
    for (std::size_t a = 0; a < members_.size(); ++a) {
      for (std::size_t b = a + 1; b < members_.size(); ++b) {
        f(members_[a], members_[b]);
      }
    }
    return;
  }
  const std::size_t n = per_axis_;
  const std::size_t ncells = start_.size() - 1;
  std::array<std::size_t, kMaxDim> idx{};
  for (std::size_t c = 0; c < ncells; ++c) {
    std::size_t rem = c;
    for (int k = d_ - 1; k >= 0; --k) {
      idx[k] = rem % n;
      rem /= n;
    }
    const std::uint32_t begin = start_[c];
    const std::uint32_t end = start_[c + 1];
    if (begin == end) continue;
    for (std::uint32_t a = begin; a < end; ++a) {
      for (std::uint32_t b = a + 1; b < end; ++b) f(members_[a], members_[b]);
    }
    for (const auto& off : shell_) {
      std::size_t other = 0;
      for (int k = 0; k < d_; ++k) {
        const std::ptrdiff_t v =
            (static_cast<std::ptrdiff_t>(idx[k]) + off[k] +
             static_cast<std::ptrdiff_t>(n)) %
            static_cast<std::ptrdiff_t>(n);
        other = other * n + static_cast<std::size_t>(v);
      }
      const std::uint32_t ob = start_[other];
      const std::uint32_t oe = start_[other + 1];
      for (std::uint32_t a = begin; a < end; ++a) {
        for (std::uint32_t b = ob; b < oe; ++b) f(members_[a], members_[b]);
      }
    }
  }
}

}  // namespace smolu
