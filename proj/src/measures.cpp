// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smolu/measures.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "smolu/cell_list.hpp"

namespace smolu {

FourierMode::FourierMode(int d, double L, std::array<int, kMaxDim> k,
                         bool cosine)
    : d_(d), k_(k), cosine_(cosine) {
  for (int i = 0; i < d; ++i) wave_[i] = 2.0 * std::numbers::pi * k[i] / L;
}

double FourierMode::value(const Vec& x) const {
  const double a = dot(wave_, x, d_);
  return cosine_ ? std::cos(a) : std::sin(a);
}

Vec FourierMode::gradient(const Vec& x) const {
  const double a = dot(wave_, x, d_);
  const double dv = cosine_ ? -std::sin(a) : std::cos(a);
  Vec g{};
  for (int i = 0; i < d_; ++i) g[i] = dv * wave_[i];
  return g;
}

double FourierMode::laplacian(const Vec& x) const {
  return -dot(wave_, wave_, d_) * value(x);
}

int FourierMode::l1_order() const {
  int s = 0;
  for (int i = 0; i < d_; ++i) s += std::abs(k_[i]);
  return s;
}

std::string FourierMode::describe() const {
  std::ostringstream os;
  os << (cosine_ ? "cos" : "sin") << "(k=";
  for (int i = 0; i < d_; ++i) os << (i ? "," : "") << k_[i];
  os << ")";
  return os.str();
}

GaussianBump::GaussianBump(int d, double L, const Vec& center, double width)
    : d_(d), L_(L), center_(center), width_(width) {
  if (!(width > 0.0)) throw ConfigError("gaussian bump: width must be > 0");
}

Vec GaussianBump::offset(const Vec& x) const {
  return periodic_delta(x.data(), center_.data(), d_, L_);
}

double GaussianBump::value(const Vec& x) const {
  const Vec v = offset(x);
  return std::exp(-dot(v, v, d_) / (2.0 * width_ * width_));
}

Vec GaussianBump::gradient(const Vec& x) const {
  const Vec v = offset(x);
  const double f = value(x);
  Vec g{};
  for (int i = 0; i < d_; ++i) g[i] = -v[i] / (width_ * width_) * f;
  return g;
}

double GaussianBump::laplacian(const Vec& x) const {
  const Vec v = offset(x);
  const double w2 = width_ * width_;
  return (dot(v, v, d_) / (w2 * w2) - d_ / w2) * value(x);
}

std::string GaussianBump::describe() const {
  std::ostringstream os;
  os << "gauss(w=" << width_ << ")";
  return os.str();
}

TestFunctionFamily TestFunctionFamily::fourier(int d, double L, int kmax) {
  TestFunctionFamily fam;
  fam.members.push_back({std::make_shared<UnitFunction>(), 1.0});
  std::array<int, kMaxDim> k{};
  const int span = 2 * kmax + 1;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(span);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rem = code;
    int l1 = 0;
    for (int i = d - 1; i >= 0; --i) {
      k[i] = static_cast<int>(rem % span) - kmax;
      rem /= span;
      l1 += std::abs(k[i]);
    }
    if (l1 == 0 || l1 > kmax) continue;
    // keep one of each +-k pair: first nonzero component positive
    int first = 0;
    for (int i = 0; i < d; ++i) {
      if (k[i] != 0) {
        first = k[i];
        break;
      }
    }
    if (first < 0) continue;
    const double w = std::ldexp(1.0, -l1);
    fam.members.push_back({std::make_shared<FourierMode>(d, L, k, true), w});
    fam.members.push_back({std::make_shared<FourierMode>(d, L, k, false), w});
  }
  return fam;
}

TestFunctionFamily TestFunctionFamily::gaussian_bumps(int d, double L,
                                                      int per_axis,
                                                      double width) {
  TestFunctionFamily fam;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(per_axis);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rem = code;
    Vec c{};
    for (int i = d - 1; i >= 0; --i) {
      c[i] = -0.5 * L + (static_cast<double>(rem % per_axis) + 0.5) * L / per_axis;
      rem /= per_axis;
    }
    fam.members.push_back({std::make_shared<GaussianBump>(d, L, c, width),
                           1.0 / static_cast<double>(total)});
  }
  return fam;
}

double MollifierSpec::chi_delta(const Vec& x, int d) const {
  const double s = dot(x, x, d) / (delta * delta);
  if (s >= 1.0) return 0.0;
  const double w = 1.0 - s;
  return w * w * w / (cubic_bump_integral(d) * std::pow(delta, d));
}

// ---------------------------------------------------------------------------

EmpiricalMeasure snapshot(const ParticleState& state, long long N, int M,
                          double L) {
  EmpiricalMeasure mu;
  mu.d = state.d;
  mu.L = L;
  mu.N = N;
  mu.points.assign(static_cast<std::size_t>(M), {});
  for (std::size_t i = 0; i < state.size(); ++i) {
    const int m = state.masses[i];
    if (m == kTombstone || m > M) continue;
    auto& bucket = mu.points[static_cast<std::size_t>(m - 1)];
    bucket.insert(bucket.end(), state.position(i), state.position(i) + state.d);
  }
  return mu;
}

double pair(const EmpiricalMeasure& mu, int m, const TestFunction& phi) {
  CompensatedSum s;
  const std::size_t count = mu.count(m);
  for (std::size_t i = 0; i < count; ++i) {
    Vec x{};
    for (int k = 0; k < mu.d; ++k) x[k] = mu.point(m, i)[k];
    s.add(phi.value(x));
  }
  return s.value() / static_cast<double>(mu.N);
}

double field_pair(const GridGeometry& grid, const std::vector<double>& values,
                  const TestFunction& phi) {
  CompensatedSum s;
  for (std::size_t c = 0; c < values.size(); ++c) {
    if (values[c] != 0.0) s.add(phi.value(grid.center(c)) * values[c]);
  }
  return s.value() * grid.cell_volume();
}

std::vector<double> smoothed_density(const EmpiricalMeasure& mu, int m,
                                     const MollifierSpec& moll,
                                     const GridGeometry& grid) {
  grid.validate();
  if (moll.delta < 2.0 * grid.h()) {
    throw ConfigError("mollifier: delta = " + std::to_string(moll.delta) +
                      " is below twice the grid spacing " +
                      std::to_string(grid.h()));
  }
  if (moll.delta >= 0.5 * grid.L) {
    throw ConfigError("mollifier: delta must be below L/2");
  }
  const int d = grid.d;
  const double h = grid.h();
  const int reach = static_cast<int>(std::ceil(moll.delta / h)) + 1;
  const int width = 2 * reach + 1;
  std::size_t stencil = 1;
  for (int k = 0; k < d; ++k) stencil *= static_cast<std::size_t>(width);

  std::vector<double> out(grid.cells(), 0.0);
  std::vector<std::size_t> cells(stencil);
  std::vector<double> weights(stencil);
  const double share = 1.0 / static_cast<double>(mu.N);
  for (std::size_t i = 0; i < mu.count(m); ++i) {
    const double* x = mu.point(m, i);
    std::array<int, kMaxDim> base{};
    for (int k = 0; k < d; ++k) {
      base[k] = static_cast<int>(std::floor((x[k] + 0.5 * grid.L) / h));
    }
    double total = 0.0;
    for (std::size_t s = 0; s < stencil; ++s) {
      std::size_t rem = s;
      std::array<int, kMaxDim> idx{};
      for (int k = d - 1; k >= 0; --k) {
        idx[k] = base[k] + static_cast<int>(rem % width) - reach;
        rem /= width;
      }
      cells[s] = grid.flatten(idx);
      const Vec c = grid.center(cells[s]);
      const Vec v = periodic_delta(c.data(), x, d, grid.L);
      weights[s] = moll.chi_delta(v, d);
      total += weights[s];
    }
    if (total <= 0.0) continue;
    const double scale = share / (total * grid.cell_volume());
    for (std::size_t s = 0; s < stencil; ++s) {
      if (weights[s] > 0.0) out[cells[s]] += weights[s] * scale;
    }
  }
  return out;
}

Discrepancy discrepancy(const EmpiricalMeasure& mu, const FieldState& field,
                        const TestFunctionFamily& family) {
  if (mu.M() != field.M) {
    throw ConfigError("discrepancy: measure and field have different M");
  }
  if (mu.d != field.geometry.d || std::abs(mu.L - field.geometry.L) > 1e-12) {
    throw ConfigError("discrepancy: measure and field live on different boxes");
  }
  Discrepancy out;
  out.per_mass.assign(static_cast<std::size_t>(field.M), 0.0);
  for (int m = 1; m <= field.M; ++m) {
    double dm = 0.0;
    for (const auto& member : family.members) {
      const double a = pair(mu, m, *member.phi);
      const double b = field_pair(field.geometry, field.u[m - 1], *member.phi);
      dm += member.weight * std::abs(a - b);
    }
    out.per_mass[m - 1] = dm;
    out.aggregate += dm;
  }
  return out;
}

Discrepancy field_discrepancy(const FieldState& a, const FieldState& b,
                              const TestFunctionFamily& family) {
  if (a.M != b.M || a.geometry.cells() != b.geometry.cells()) {
    throw ConfigError("discrepancy: incompatible field states");
  }
  Discrepancy out;
  out.per_mass.assign(static_cast<std::size_t>(a.M), 0.0);
  for (int m = 1; m <= a.M; ++m) {
    double dm = 0.0;
    for (const auto& member : family.members) {
      const double pa = field_pair(a.geometry, a.u[m - 1], *member.phi);
      const double pb = field_pair(b.geometry, b.u[m - 1], *member.phi);
      dm += member.weight * std::abs(pa - pb);
    }
    out.per_mass[m - 1] = dm;
    out.aggregate += dm;
  }
  return out;
}

double quadratic_pairing(const EmpiricalMeasure& mu, int m, int n,
                         const KernelSpec& kernel, const TestFunction& phi,
                         const TestFunction& psi) {
  const int d = mu.d;
  const std::size_t count_m = mu.count(m);
  const bool same = m == n;
  const std::size_t count_n = same ? 0 : mu.count(n);
  // points [0, count_m) carry mass m, the rest mass n
  std::vector<double> pts;
  pts.reserve((count_m + count_n) * d);
  pts.insert(pts.end(), mu.points[m - 1].begin(), mu.points[m - 1].end());
  if (!same) pts.insert(pts.end(), mu.points[n - 1].begin(), mu.points[n - 1].end());

  const std::size_t total = count_m + count_n;
  std::vector<double> phi_at(total), psi_at(total);
  for (std::size_t p = 0; p < total; ++p) {
    Vec x{};
    for (int k = 0; k < d; ++k) x[k] = pts[p * d + k];
    phi_at[p] = phi.value(x);
    psi_at[p] = psi.value(x);
  }
  auto in_m = [&](std::size_t p) { return same || p < count_m; };
  auto in_n = [&](std::size_t p) { return same || p >= count_m; };

  CellList cells;
  cells.build(pts, d, mu.L, kernel.range(), [](std::size_t) { return true; });
  CompensatedSum sum;
  cells.for_each_pair([&](std::uint32_t p, std::uint32_t q) {
    const Vec v = periodic_delta(&pts[p * d], &pts[q * d], d, mu.L);
    const double th = kernel.theta_eps(v);
    if (th == 0.0) return;
    if (in_m(p) && in_n(q)) sum.add(th * phi_at[p] * psi_at[q]);
    if (in_m(q) && in_n(p)) sum.add(th * phi_at[q] * psi_at[p]);
  });
  const double inv = 1.0 / static_cast<double>(mu.N);
  return sum.value() * inv * inv;
}

}  // namespace smolu
