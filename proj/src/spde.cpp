// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smolu/spde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace smolu {

TransportScheme parse_transport_scheme(const std::string& name) {
  if (name == "centered" || name == "centred") return TransportScheme::kCentered;
  if (name == "upwind") return TransportScheme::kUpwind;
  throw ConfigError("unknown transport scheme '" + name + "'");
}

SpdeScheme parse_spde_scheme(const std::string& name) {
  if (name == "ito" || name == "euler") return SpdeScheme::kIto;
  if (name == "heun" || name == "stratonovich") return SpdeScheme::kHeun;
  throw ConfigError("unknown spde scheme '" + name + "'");
}

std::string to_string(TransportScheme s) {
  return s == TransportScheme::kCentered ? "centered" : "upwind";
}

std::string to_string(SpdeScheme s) {
  return s == SpdeScheme::kIto ? "ito" : "heun";
}

double smoluchowski_rhs(std::span<const double> u, int m) {
  const int M = static_cast<int>(u.size());
  double gain = 0.0;
  for (int n = 1; n < m; ++n) gain += u[n - 1] * u[m - n - 1];
  double total = 0.0;
  for (int n = 0; n < M; ++n) total += u[n];
  return gain - 2.0 * u[m - 1] * total;
}

EllipticOperator::EllipticOperator(const GridGeometry& grid,
                                   const NoiseFieldSet& noise, double lambda)
    : grid_(grid), half_lambda_sq_(0.5 * lambda * lambda) {
  grid_.validate();
  if (!noise.empty() && noise.dim() != grid.d)
    throw ConfigError("noise dimension does not match grid dimension");
  const int d = grid_.d;
  const std::size_t cells = grid_.cells();
  const double h = grid_.h();
  plus_.assign(d, std::vector<std::uint32_t>(cells));
  minus_.assign(d, std::vector<std::uint32_t>(cells));
  for (int a = 0; a < d; ++a) {
    for (std::size_t c = 0; c < cells; ++c) {
      plus_[a][c] = static_cast<std::uint32_t>(grid_.shift(c, a, 1));
      minus_[a][c] = static_cast<std::uint32_t>(grid_.shift(c, a, -1));
    }
  }

  velocity_.assign(noise.size(), std::vector<std::vector<double>>(
                                     d, std::vector<double>(cells, 0.0)));
  for (std::size_t k = 0; k < noise.size(); ++k) {
    const double amp = noise.amplitude(k);
    const bool use_stream =
        d == 2 && noise.field(k).stream_function(Vec{}).has_value();
    for (std::size_t c = 0; c < cells; ++c) {
      const Vec x = grid_.center(c);
      if (use_stream) {
        // Corner values of psi give face fluxes whose discrete divergence
        // telescopes to zero.
        auto psi = [&](double dx, double dy) {
          Vec p{x[0] + dx * h, x[1] + dy * h, 0.0};
          return amp * *noise.field(k).stream_function(p);
        };
        velocity_[k][0][c] = (psi(0.5, 0.5) - psi(0.5, -0.5)) / h;
        velocity_[k][1][c] = -(psi(0.5, 0.5) - psi(-0.5, 0.5)) / h;
      } else {
        for (int a = 0; a < d; ++a) {
          Vec f = x;
          f[a] += 0.5 * h;
          velocity_[k][a][c] = noise.eval_field(k, f)[a];
        }
      }
    }
  }

  q_diag_.assign(cells, Mat{});
  for (std::size_t c = 0; c < cells; ++c) {
    const Vec x = grid_.center(c);
    if (!noise.empty()) {
      q_diag_[c] = noise.eval_covariance(x, x).q_diag;
      max_q_norm_ = std::max(max_q_norm_, noise.q_diag_norm(x));
      max_speed_sum_ = std::max(max_speed_sum_, noise.speed_sum(x));
    }
  }
  // Face samples can exceed centre samples for fast-varying fields.
  for (std::size_t c = 0; c < cells; ++c) {
    double s = 0.0;
    for (std::size_t k = 0; k < velocity_.size(); ++k) {
      double v2 = 0.0;
      for (int a = 0; a < d; ++a) v2 += velocity_[k][a][c] * velocity_[k][a][c];
      s += std::sqrt(v2);
    }
    max_speed_sum_ = std::max(max_speed_sum_, s);
  }
}

void EllipticOperator::add_laplacian(std::span<const double> in,
                                     std::span<double> out,
                                     double coeff) const {
  const double h = grid_.h();
  const double w = coeff / (h * h);
  const std::size_t cells = grid_.cells();
  for (int a = 0; a < grid_.d; ++a) {
    const auto& p = plus_[a];
    const auto& q = minus_[a];
    for (std::size_t c = 0; c < cells; ++c)
      out[c] += w * (in[p[c]] + in[q[c]] - 2.0 * in[c]);
  }
}

void EllipticOperator::add_transport(std::size_t k, std::span<const double> in,
                                     std::span<double> out, double coeff,
                                     TransportScheme scheme) const {
  const double w = coeff / grid_.h();
  const std::size_t cells = grid_.cells();
  scratch_.resize(cells);
  for (int a = 0; a < grid_.d; ++a) {
    const auto& p = plus_[a];
    const auto& q = minus_[a];
    const auto& vel = velocity_[k][a];
    if (scheme == TransportScheme::kCentered) {
      for (std::size_t c = 0; c < cells; ++c)
        scratch_[c] = 0.5 * vel[c] * (in[c] + in[p[c]]);
    } else {
      for (std::size_t c = 0; c < cells; ++c) {
        const double v = vel[c];
        scratch_[c] = v * (v * coeff >= 0.0 ? in[c] : in[p[c]]);
      }
    }
    for (std::size_t c = 0; c < cells; ++c)
      out[c] -= w * (scratch_[c] - scratch_[q[c]]);
  }
}

void EllipticOperator::add_eddy(std::span<const double> in,
                                std::span<double> out, double coeff) const {
  if (velocity_.empty()) return;
  std::vector<double> tmp(grid_.cells());
  for (std::size_t k = 0; k < velocity_.size(); ++k) {
    std::fill(tmp.begin(), tmp.end(), 0.0);
    add_transport(k, in, tmp, 1.0);
    add_transport(k, tmp, out, 0.5 * coeff);
  }
}

void EllipticOperator::add_generator(std::span<const double> in,
                                     std::span<double> out,
                                     double coeff) const {
  add_laplacian(in, out, coeff * half_lambda_sq_);
  add_eddy(in, out, coeff);
}

SpdeSolver::SpdeSolver(const GridGeometry& grid, const NoiseFieldSet& noise,
                       const SpdeOptions& options)
    : grid_(grid), op_(grid, noise, options.lambda), options_(options) {
  if (options.lambda < 0.0 || !std::isfinite(options.lambda))
    throw ConfigError("lambda must be finite and non-negative");
}

double SpdeSolver::max_stable_dt() const {
  const double h = grid_.h();
  const double diff = 2.0 * op_.half_lambda_sq() + op_.max_q_norm();
  double bound = diff > 0.0 ? 0.25 * h * h / (grid_.d * diff)
                            : std::numeric_limits<double>::infinity();
  if (op_.max_speed_sum() > 0.0)
    bound = std::min(bound, 0.25 * h / (3.0 * op_.max_speed_sum()));
  return bound;
}

void SpdeSolver::check_stability(double dt) const {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw ConfigError("dt must be positive and finite");
  const double h = grid_.h();
  const double diff = 2.0 * op_.half_lambda_sq() + op_.max_q_norm();
  if (diff > 0.0) {
    const double bound = 0.25 * h * h / (grid_.d * diff);
    if (dt > bound) {
      std::ostringstream os;
      os << "dt = " << dt << " violates dt <= 0.25 h^2 / (d (lambda^2 + max|Q|)) = "
         << bound << " (h = " << h << ", max|Q| = " << op_.max_q_norm() << ")";
      throw ConfigError(os.str());
    }
  }
  if (op_.max_speed_sum() > 0.0) {
    const double bound = 0.25 * h / (3.0 * op_.max_speed_sum());
    if (dt > bound) {
      std::ostringstream os;
      os << "dt = " << dt << " violates dt <= 0.25 h / (3 max sum|sigma_k|) = "
         << bound << " (h = " << h << ", max sum|sigma_k| = "
         << op_.max_speed_sum() << ")";
      throw ConfigError(os.str());
    }
  }
}

void SpdeSolver::reaction(const FieldState& state,
                          std::vector<std::vector<double>>& out) const {
  const int M = state.M;
  const std::size_t cells = grid_.cells();
  out.assign(M, std::vector<double>(cells, 0.0));
  if (!options_.reaction) return;
  std::vector<double> local(M);
  for (std::size_t c = 0; c < cells; ++c) {
    for (int m = 0; m < M; ++m) local[m] = state.u[m][c];
    for (int m = 1; m <= M; ++m) out[m - 1][c] = smoluchowski_rhs(local, m);
  }
}

void SpdeSolver::step_ito(FieldState& state, std::span<const double> dw,
                          double dt) const {
  if (state.reference_mass <= 0.0) state.reference_mass = state.total_integral();
  const std::size_t cells = grid_.cells();
  const std::size_t K = op_.fields();
  if (dw.size() != K) throw ConfigError("noise increment size mismatch");
  const bool milstein =
      options_.milstein && options_.transport == TransportScheme::kCentered;
  std::vector<std::vector<double>> react;
  reaction(state, react);
  std::vector<double> next(cells), g1(cells);
  for (int m = 0; m < state.M; ++m) {
    const auto& u = state.u[m];
    std::copy(u.begin(), u.end(), next.begin());
    op_.add_laplacian(u, next, dt * op_.half_lambda_sq());
    if (!milstein) op_.add_eddy(u, next, dt);  // cancels against the Milstein term
    for (std::size_t c = 0; c < cells; ++c) next[c] += dt * react[m][c];
    std::fill(g1.begin(), g1.end(), 0.0);
    for (std::size_t k = 0; k < K; ++k)
      op_.add_transport(k, u, g1, dw[k], options_.transport);
    for (std::size_t c = 0; c < cells; ++c) next[c] += g1[c];
    if (milstein) {
      for (std::size_t k = 0; k < K; ++k) op_.add_transport(k, g1, next, 0.5 * dw[k]);
    }
    state.u[m].swap(next);
  }
  finish_step(state, dt);
}

void SpdeSolver::step_heun(FieldState& state, std::span<const double> dw,
                           double dt) const {
  if (state.reference_mass <= 0.0) state.reference_mass = state.total_integral();
  const std::size_t cells = grid_.cells();
  const std::size_t K = op_.fields();
  if (dw.size() != K) throw ConfigError("noise increment size mismatch");
  const int M = state.M;

  auto increment = [&](const FieldState& s, std::vector<std::vector<double>>& out) {
    std::vector<std::vector<double>> react;
    reaction(s, react);
    out.assign(M, std::vector<double>(cells, 0.0));
    for (int m = 0; m < M; ++m) {
      op_.add_laplacian(s.u[m], out[m], dt * op_.half_lambda_sq());
      for (std::size_t c = 0; c < cells; ++c) out[m][c] += dt * react[m][c];
      for (std::size_t k = 0; k < K; ++k)
        op_.add_transport(k, s.u[m], out[m], dw[k], options_.transport);
    }
  };

  std::vector<std::vector<double>> a0, a1;
  increment(state, a0);
  FieldState pred = state;
  for (int m = 0; m < M; ++m)
    for (std::size_t c = 0; c < cells; ++c) pred.u[m][c] += a0[m][c];
  increment(pred, a1);
  for (int m = 0; m < M; ++m)
    for (std::size_t c = 0; c < cells; ++c)
      state.u[m][c] += 0.5 * (a0[m][c] + a1[m][c]);
  finish_step(state, dt);
}

void SpdeSolver::step(FieldState& state, std::span<const double> dw, double dt,
                      SpdeScheme scheme) const {
  if (scheme == SpdeScheme::kIto)
    step_ito(state, dw, dt);
  else
    step_heun(state, dw, dt);
}

void SpdeSolver::finish_step(FieldState& state, double dt) const {
  state.t += dt;
  const double vol = grid_.cell_volume();
  double clamped = 0.0;
  for (auto& comp : state.u) {
    for (double& v : comp) {
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite field value at t = " << state.t;
        throw NumericalError(os.str());
      }
      if (options_.clamp && v < 0.0) {
        clamped -= v * vol;
        v = 0.0;
      }
    }
  }
  state.clamped_mass += clamped;
  if (options_.clamp &&
      state.clamped_mass > options_.clamp_abort_fraction * state.reference_mass) {
    std::ostringstream os;
    os << "negativity clamp added " << state.clamped_mass << " mass by t = "
       << state.t << ", above " << options_.clamp_abort_fraction
       << " of the initial mass " << state.reference_mass;
    throw NumericalError(os.str());
  }
}

FieldState initial_field(const GridGeometry& grid, int M,
                         const std::vector<double>& r,
                         const std::vector<DensitySpec>& densities) {
  grid.validate();
  if (static_cast<int>(r.size()) != M)
    throw ConfigError("mass distribution length must equal M");
  if (densities.empty()) throw ConfigError("no initial density given");
  FieldState s(grid, M);
  for (int m = 1; m <= M; ++m) {
    const DensitySpec& p =
        densities.size() == 1 ? densities[0] : densities.at(m - 1);
    for (std::size_t c = 0; c < grid.cells(); ++c)
      s.u[m - 1][c] = r[m - 1] * p.density(grid.center(c), grid.d);
  }
  s.reference_mass = s.total_integral();
  return s;
}

std::vector<FreeRecord> solve_free(const GridGeometry& grid,
                                   const NoiseFieldSet& noise, double lambda,
                                   FieldState& state, const NoisePath& path,
                                   double dt, double T, SpdeScheme scheme,
                                   const SpdeOptions& base) {
  SpdeOptions opt = base;
  opt.lambda = lambda;
  opt.reaction = false;
  SpdeSolver solver(grid, noise, opt);
  solver.check_stability(dt);
  const long long steps = std::llround(T / dt);
  if (path.steps() < steps || path.fields() != noise.size())
    throw ConfigError("noise path too short for the requested horizon");
  if (state.reference_mass <= 0.0) state.reference_mass = state.total_integral();
  std::vector<FreeRecord> out;
  out.reserve(steps + 1);
  out.push_back({state.t, state.sup_norm(1), state.integral(1)});
  for (long long s = 0; s < steps; ++s) {
    solver.step(state, path.step(s), dt, scheme);
    out.push_back({state.t, state.sup_norm(1), state.integral(1)});
  }
  return out;
}

FieldState solve_system(const SpdeSolver& solver, FieldState init,
                        const NoisePath& path, double dt, double T,
                        const std::vector<FieldObserver>& observers,
                        long long observe_every, SpdeScheme scheme) {
  solver.check_stability(dt);
  const long long steps = std::llround(T / dt);
  if (path.steps() < steps || path.fields() != solver.fields())
    throw ConfigError("noise path too short for the requested horizon");
  if (init.reference_mass <= 0.0) init.reference_mass = init.total_integral();
  for (const auto& f : observers) f(init);
  for (long long s = 0; s < steps; ++s) {
    solver.step(init, path.step(s), dt, scheme);
    const bool last = s + 1 == steps;
    if (!last && observe_every > 0 && (s + 1) % observe_every == 0)
      for (const auto& f : observers) f(init);
    if (last)
      for (const auto& f : observers) f(init);
  }
  return init;
}

}  // namespace smolu
