// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "smolu/cell_list.hpp"
#include "smolu/measures.hpp"
#include "smolu/rng.hpp"

using namespace smolu;

namespace {

EmpiricalMeasure cloud(int d, double L, long long N, int M, std::uint64_t seed,
                       double spread) {
  EmpiricalMeasure mu;
  mu.d = d;
  mu.L = L;
  mu.N = N;
  mu.points.assign(M, {});
  RandomStream rng(seed, StreamRole::kAuxiliary, 1, 0);
  for (long long i = 0; i < N; ++i) {
    const int m = static_cast<int>(rng.uniform() * M);
    for (int k = 0; k < d; ++k) mu.points[m].push_back(spread * (rng.uniform() - 0.5));
  }
  return mu;
}

}  // namespace

TEST_CASE("snapshot groups by mass") {
  ParticleState s;
  s.d = 1;
  s.positions = {0.3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  s.masses = {2, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  s.active_count = 1;
  const auto mu = snapshot(s, 10, 3, 4.0);
  CHECK(mu.count(1) == 0);
  CHECK(mu.count(2) == 1);
  CHECK(mu.count(3) == 0);
  CHECK(mu.total_mass(2) == doctest::Approx(0.1));
  CHECK(mu.point(2, 0)[0] == 0.3);
  UnitFunction one;
  CHECK(pair(mu, 2, one) == doctest::Approx(0.1));
  const FourierMode cosk(1, 4.0, {1, 0, 0}, true);
  CHECK(pair(mu, 2, cosk) == doctest::Approx(std::cos(2 * M_PI * 0.3 / 4.0) / 10));
}

TEST_CASE("fourier pairing of a uniform cloud") {
  const long long N = 100000;
  const auto mu = cloud(1, 4.0, N, 1, 3, 4.0);
  const FourierMode c1(1, 4.0, {1, 0, 0}, true);
  CHECK(std::abs(pair(mu, 1, c1)) < 3.0 / std::sqrt(double(N)));
  const auto fam = TestFunctionFamily::fourier(2, 4.0, 4);
  double wsum = 0.0;
  for (const auto& w : fam.members) wsum += w.weight;
  // constant + modes with |k|_1 = n: 4n of them per n, counted once per +-k
  // pair in cos and sin.
  double expect = 1.0;
  for (int n = 1; n <= 4; ++n) expect += 4 * n * std::pow(2.0, -n);
  CHECK(wsum == doctest::Approx(expect));
}

TEST_CASE("smoothed density") {
  const GridGeometry g{1, 4.0, 400};
  EmpiricalMeasure one;
  one.d = 1;
  one.L = 4.0;
  one.N = 10;
  one.points = {{0.123}};
  const auto w = smoothed_density(one, 1, MollifierSpec{0.1}, g);
  double total = 0.0, first = 0.0;
  for (std::size_t c = 0; c < g.cells(); ++c) {
    total += w[c] * g.cell_volume();
    first += w[c] * g.cell_volume() * g.center(c)[0];
  }
  CHECK(total == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(first / total == doctest::Approx(0.123).epsilon(1e-2));

  EmpiricalMeasure empty = one;
  empty.points = {{}};
  for (double v : smoothed_density(empty, 1, MollifierSpec{0.1}, g)) CHECK(v == 0.0);

  const long long N = 100000;
  const auto mu = cloud(1, 4.0, N, 1, 5, 4.0);
  const double delta = 0.2;
  const auto u = smoothed_density(mu, 1, MollifierSpec{delta}, g);
  double maxdev = 0.0;
  for (double v : u) maxdev = std::max(maxdev, std::abs(v - 0.25));
  // Binomial count in a delta-ball: relative sd ~ 1/sqrt(N delta / L).
  CHECK(maxdev < 0.25 * 6.0 / std::sqrt(N * 2 * delta / 4.0));

  CHECK_THROWS_AS(smoothed_density(one, 1, MollifierSpec{0.005}, g), ConfigError);
}

TEST_CASE("discrepancy") {
  const GridGeometry g{1, 4.0, 64};
  FieldState zero(g, 2);
  EmpiricalMeasure mu;
  mu.d = 1;
  mu.L = 4.0;
  mu.N = 5;
  mu.points = {{}, {}};
  const auto fam = TestFunctionFamily::fourier(1, 4.0, 4);
  const auto d0 = discrepancy(mu, zero, fam);
  CHECK(d0.aggregate == 0.0);
  CHECK(d0.per_mass.size() == 2);

  // A field equal to the smoothed empirical density: only smoothing and
  // quadrature separate them on low modes.
  const GridGeometry fine{1, 4.0, 1024};
  const auto cl = cloud(1, 4.0, 2000, 2, 11, 2.0);
  FieldState f(fine, 2);
  for (int m = 1; m <= 2; ++m) f.u[m - 1] = smoothed_density(cl, m, MollifierSpec{0.02}, fine);
  CHECK(discrepancy(cl, f, fam).aggregate < 1e-3);
  CHECK(field_discrepancy(f, f, fam).aggregate == 0.0);
}

TEST_CASE("quadratic pairing equals the brute-force double sum") {
  const KernelSpec k(2, 0.3);
  const FourierMode phi(2, 3.0, {1, 0, 0}, true);
  const FourierMode psi(2, 3.0, {0, 1, 0}, false);
  for (int inst = 0; inst < 5; ++inst) {
    const auto mu = cloud(2, 3.0, 100, 2, 100 + inst, 1.5);
    for (int m = 1; m <= 2; ++m)
      for (int n = 1; n <= 2; ++n) {
        double brute = 0.0;
        for (std::size_t i = 0; i < mu.count(m); ++i)
          for (std::size_t j = 0; j < mu.count(n); ++j) {
            if (m == n && i == j) continue;
            const Vec v = periodic_delta(mu.point(m, i), mu.point(n, j), 2, 3.0);
            Vec xi{}, xj{};
            for (int a = 0; a < 2; ++a) {
              xi[a] = mu.point(m, i)[a];
              xj[a] = mu.point(n, j)[a];
            }
            brute += k.theta_eps(v) * phi.value(xi) * psi.value(xj);
          }
        brute /= 100.0 * 100.0;
        CHECK(quadratic_pairing(mu, m, n, k, phi, psi) ==
              doctest::Approx(brute).epsilon(1e-12).scale(1e-12));
      }
  }
  // Two particles, masses 1 and 2, one ordered pair.
  EmpiricalMeasure two;
  two.d = 1;
  two.L = 4.0;
  two.N = 7;
  two.points = {{0.0}, {0.05}};
  const KernelSpec k1(1, 0.1);
  UnitFunction one;
  CHECK(quadratic_pairing(two, 1, 2, k1, one, one) ==
        doctest::Approx(k1.theta_eps(Vec{0.05}) / 49.0));
  two.points = {{0.0}, {0.5}};
  CHECK(quadratic_pairing(two, 1, 2, k1, one, one) == 0.0);
}
