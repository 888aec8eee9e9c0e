// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smolu/cell_list.hpp"

#include <algorithm>
#include <cmath>

namespace smolu {

Vec periodic_delta(const double* a, const double* b, int d, double L) {
  Vec out{};
  for (int k = 0; k < d; ++k) {
    double v = a[k] - b[k];
    v -= L * std::round(v / L);
    out[k] = v;
  }
  return out;
}

std::size_t CellList::cell_of(const double* x) const {
  std::size_t c = 0;
  for (int k = 0; k < d_; ++k) {
    auto i = static_cast<std::ptrdiff_t>(std::floor((x[k] + 0.5 * L_) / edge_));
    const auto n = static_cast<std::ptrdiff_t>(per_axis_);
    i = ((i % n) + n) % n;
    c = c * per_axis_ + static_cast<std::size_t>(i);
  }
  return c;
}

void CellList::build(std::span<const double> positions, int d, double L,
                     double min_edge,
                     const std::function<bool(std::size_t)>& include,
                     std::size_t max_cells) {
  d_ = d;
  L_ = L;
  const std::size_t count = positions.size() / static_cast<std::size_t>(d);
  std::vector<std::uint32_t> chosen;
  chosen.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (include(i)) chosen.push_back(static_cast<std::uint32_t>(i));
  }
  if (max_cells == 0) max_cells = std::max<std::size_t>(64, 2 * chosen.size());

  std::size_t n = min_edge > 0.0
                      ? static_cast<std::size_t>(std::floor(L / min_edge))
                      : 1;
  // cap the total cell count at max_cells
  const auto cap_axis = static_cast<std::size_t>(
      std::floor(std::pow(static_cast<double>(max_cells), 1.0 / d)));
  n = std::min(n, std::max<std::size_t>(cap_axis, 1));
  brute_ = n < 3;
  if (brute_) {
    per_axis_ = 1;
    members_ = std::move(chosen);
    start_ = {0, static_cast<std::uint32_t>(members_.size())};
    shell_.clear();
    return;
  }
  per_axis_ = n;
  edge_ = L / static_cast<double>(n);

  std::size_t ncells = 1;
  for (int k = 0; k < d; ++k) ncells *= n;
  std::vector<std::uint32_t> cell(chosen.size());
  start_.assign(ncells + 1, 0);
  for (std::size_t a = 0; a < chosen.size(); ++a) {
    cell[a] = static_cast<std::uint32_t>(
        cell_of(positions.data() + static_cast<std::size_t>(chosen[a]) * d));
    ++start_[cell[a] + 1];
  }
  for (std::size_t c = 0; c < ncells; ++c) start_[c + 1] += start_[c];
  members_.assign(chosen.size(), 0);
  std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t a = 0; a < chosen.size(); ++a) {
    members_[fill[cell[a]]++] = chosen[a];  // ids stay ascending per cell
  }

  // half shell: offsets in {-1,0,1}^d lexicographically greater than zero
  shell_.clear();
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<std::ptrdiff_t> off(d);
    std::size_t rem = code;
    for (int k = d - 1; k >= 0; --k) {
      off[k] = static_cast<std::ptrdiff_t>(rem % 3) - 1;
      rem /= 3;
    }
    const auto first = std::find_if(off.begin(), off.end(),
                                    [](std::ptrdiff_t v) { return v != 0; });
    if (first != off.end() && *first > 0) shell_.push_back(std::move(off));
  }
}

}  // namespace smolu
