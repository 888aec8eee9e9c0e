// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smolu/oracle.hpp"

#include <cmath>
#include <sstream>

#include "smolu/types.hpp"

namespace smolu {

std::vector<double> homogeneous_rhs(const std::vector<double>& c) {
  const std::size_t M = c.size();
  double total = 0.0;
  for (double v : c) total += v;
  std::vector<double> out(M);
  // Index k holds mass k+1; gain for mass m pairs masses n and m-n.
  for (std::size_t k = 0; k < M; ++k) {
    double gain = 0.0;
    for (std::size_t a = 0; a < k; ++a) gain += c[a] * c[k - 1 - a];
    out[k] = gain - 2.0 * c[k] * total;
  }
  return out;
}

namespace {

bool rk4(const std::vector<double>& c, double dt, std::vector<double>& out) {
  const std::size_t M = c.size();
  auto axpy = [&](const std::vector<double>& k, double s) {
    std::vector<double> y(M);
    for (std::size_t i = 0; i < M; ++i) y[i] = c[i] + s * k[i];
    return y;
  };
  auto neg = [](const std::vector<double>& y) {
    for (double v : y)
      if (v < -1e-12 || !std::isfinite(v)) return true;
    return false;
  };
  const auto k1 = homogeneous_rhs(c);
  const auto y2 = axpy(k1, 0.5 * dt);
  if (neg(y2)) return false;
  const auto k2 = homogeneous_rhs(y2);
  const auto y3 = axpy(k2, 0.5 * dt);
  if (neg(y3)) return false;
  const auto k3 = homogeneous_rhs(y3);
  const auto y4 = axpy(k3, dt);
  if (neg(y4)) return false;
  const auto k4 = homogeneous_rhs(y4);
  out.resize(M);
  for (std::size_t i = 0; i < M; ++i)
    out[i] = c[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return !neg(out);
}

}  // namespace

HomogeneousState ode_step(const HomogeneousState& state, double dt) {
  if (!(dt > 0.0)) throw ConfigError("ode_step requires dt > 0");
  for (int halvings = 0; halvings <= 20; ++halvings) {
    const long long sub = 1LL << halvings;
    const double h = dt / static_cast<double>(sub);
    std::vector<double> c = state.c, next;
    bool ok = true;
    for (long long s = 0; s < sub && ok; ++s) {
      ok = rk4(c, h, next);
      if (ok) c.swap(next);
    }
    if (ok) return {c, state.t + dt};
  }
  std::ostringstream os;
  os << "homogeneous ODE overshoots below zero at t = " << state.t
     << " even after 20 step halvings";
  throw NumericalError(os.str());
}

std::vector<HomogeneousState> ode_solve(const HomogeneousState& init,
                                        double dt, double T,
                                        long long record_every) {
  const long long steps = std::llround(T / dt);
  std::vector<HomogeneousState> out{init};
  HomogeneousState s = init;
  for (long long k = 1; k <= steps; ++k) {
    s = ode_step(s, dt);
    s.t = init.t + static_cast<double>(k) * dt;
    if (k == steps || (record_every > 0 && k % record_every == 0))
      out.push_back(s);
  }
  return out;
}

double analytic_constant_kernel(int m, double t) {
  return std::pow(t, m - 1) / std::pow(1.0 + t, m + 1);
}

}  // namespace smolu
