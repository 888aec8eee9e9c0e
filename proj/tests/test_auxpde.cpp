// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "smolu/auxpde.hpp"

using namespace smolu;

namespace {

AuxProblem small(double eps = 0.08) {
  AuxProblem p;
  p.epsilon = eps;
  p.T = 0.01;
  p.box = 0.4;
  p.window = 0.2;
  return p;
}

}  // namespace

TEST_CASE("zero source gives zero") {
  AuxProblem p = small();
  p.source = [](double, double) { return 0.0; };
  const auto r = solve_aux(p);
  CHECK(r.sup_r_full == 0.0);
  CHECK(r.min_r == 0.0);
}

TEST_CASE("far-shifted source does not reach the window") {
  AuxProblem p = small();
  p.z = 50.0;
  const auto r = solve_aux(p);
  CHECK(r.sup_r_full <= 1e-6);
}

TEST_CASE("nonnegativity and symmetry") {
  AuxProblem p = small();
  const auto r = solve_aux(p);
  CHECK(r.min_r >= -1e-8 * r.sup_r_full);
  CHECK(r.sup_r > 0.0);
  const int n = r.n;
  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      asym = std::max(asym, std::abs(r.r[i * n + j] - r.r[j * n + i]));
  CHECK(asym <= 1e-12 * r.sup_r_full);
}

TEST_CASE("linearity in the source") {
  AuxProblem a = small(), b = small(), ab = small();
  NoiseFieldSet noise = builtin_catalog("constant", std::vector<double>{1.0}, 0.5, 1);
  a.noise = b.noise = ab.noise = noise;
  auto s1 = [](double x, double y) { return std::exp(-50 * (x - y) * (x - y)); };
  auto s2 = [](double x, double y) { return 1.0 + x * y; };
  a.source = s1;
  b.source = s2;
  ab.source = [&](double x, double y) { return s1(x, y) + s2(x, y); };
  const auto ra = solve_aux(a), rb = solve_aux(b), rab = solve_aux(ab);
  double gap = 0.0;
  for (std::size_t k = 0; k < rab.r.size(); ++k)
    gap = std::max(gap, std::abs(rab.r[k] - ra.r[k] - rb.r[k]));
  CHECK(gap <= 1e-10);
}

TEST_CASE("grid must resolve epsilon") {
  AuxProblem p = small();
  p.h = p.epsilon / 3.0;
  CHECK_THROWS_AS(solve_aux(p), ConfigError);
  p.h = 0.0;
  p.noise = builtin_catalog("shear", std::vector<double>{1.0}, 1.0, 2);
  CHECK_THROWS_AS(solve_aux(p), ConfigError);
}

TEST_CASE("linear fit") {
  double a, b, r2;
  linear_fit({1, 2, 3, 4}, {3, 5, 7, 9}, a, b, r2);
  CHECK(a == doctest::Approx(2.0));
  CHECK(b == doctest::Approx(1.0));
  CHECK(r2 == doctest::Approx(1.0));
  CHECK_THROWS_AS(check_gradient_scaling(small(), {0.08, 0.04}), ConfigError);
}
