// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace smolu {

/// Spatially homogeneous capped Smoluchowski system dc_m/dt = F_m(c).
struct HomogeneousState {
  std::vector<double> c;  // c_1..c_M
  double t = 0.0;
};

/// dc/dt for the homogeneous system (independent of the grid solver).
std::vector<double> homogeneous_rhs(const std::vector<double>& c);

/// One classical RK4 step of size dt. If a stage would leave any component
/// below -1e-12, the step is retried as 2^k substeps (k <= 20) before a
/// NumericalError is raised.
HomogeneousState ode_step(const HomogeneousState& state, double dt);

/// Integrates to T with steps of dt, recording every `record_every` steps
/// (and at T).
std::vector<HomogeneousState> ode_solve(const HomogeneousState& init,
                                        double dt, double T,
                                        long long record_every = 1);

/// c_m(t) = t^{m-1} / (1+t)^{m+1}, the uncapped monodisperse solution.
double analytic_constant_kernel(int m, double t);

}  // namespace smolu
