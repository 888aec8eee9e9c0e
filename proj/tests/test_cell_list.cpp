// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#include <set>
#include <utility>
#include <vector>

#include "doctest.h"
#include "smolu/cell_list.hpp"
#include "smolu/rng.hpp"

using namespace smolu;

TEST_CASE("cell list finds exactly the close pairs") {
  RandomStream rng(9, StreamRole::kAuxiliary, 0, 0);
  for (int d = 1; d <= 3; ++d) {
    for (double r : {0.05, 0.3, 2.0}) {
      const double L = 4.0;
      const int n = 400;
      std::vector<double> pos(n * d);
      for (auto& x : pos) x = L * rng.uniform() - 0.5 * L;
      std::vector<bool> include(n);
      for (int i = 0; i < n; ++i) include[i] = i % 7 != 3;
      CellList cl;
      cl.build(pos, d, L, r, [&](std::size_t i) { return include[i]; });

      std::set<std::pair<int, int>> found;
      int visits = 0;
      cl.for_each_pair([&](std::size_t i, std::size_t j) {
        ++visits;
        const Vec v = periodic_delta(&pos[i * d], &pos[j * d], d, L);
        if (norm(v, d) < r) found.insert({int(std::min(i, j)), int(std::max(i, j))});
        CHECK(include[i]);
        CHECK(include[j]);
      });
      std::set<std::pair<int, int>> brute;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          if (!include[i] || !include[j]) continue;
          if (norm(periodic_delta(&pos[i * d], &pos[j * d], d, L), d) < r) brute.insert({i, j});
        }
      CHECK(found == brute);
      // No pair is offered twice.
      std::set<std::pair<int, int>> seen;
      bool dup = false;
      cl.for_each_pair([&](std::size_t i, std::size_t j) {
        dup |= !seen.insert({int(std::min(i, j)), int(std::max(i, j))}).second;
      });
      CHECK_FALSE(dup);
      CHECK(visits == static_cast<int>(seen.size()));
    }
  }
}

TEST_CASE("periodic helpers") {
  CHECK(wrap_coordinate(2.5, 4.0) == doctest::Approx(-1.5));
  CHECK(wrap_coordinate(-2.0, 4.0) == doctest::Approx(-2.0));
  CHECK(wrap_coordinate(2.0, 4.0) == doctest::Approx(-2.0));
  const double a[1] = {1.9}, b[1] = {-1.9};
  CHECK(periodic_delta(a, b, 1, 4.0)[0] == doctest::Approx(-0.2));
}
