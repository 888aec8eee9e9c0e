// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smolu/particles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "smolu/cell_list.hpp"
#include "smolu/rng.hpp"

namespace smolu {

DensityShape parse_density_shape(const std::string& name) {
  if (name == "uniform-ball") return DensityShape::kUniformBall;
  if (name == "bump") return DensityShape::kBump;
  throw ConfigError("init: unknown density shape '" + name +
                    "' (known: uniform-ball, bump)");
}

std::string to_string(DensityShape shape) {
  return shape == DensityShape::kBump ? "bump" : "uniform-ball";
}

double DensitySpec::supremum(int d) const {
  if (shape == DensityShape::kUniformBall) {
    return 1.0 / (unit_ball_volume(d) * std::pow(R, d));
  }
  return 1.0 / (cubic_bump_integral(d) * std::pow(R, d));
}

double DensitySpec::density(const Vec& x, int d) const {
  const double s = dot(x, x, d) / (R * R);
  if (s >= 1.0) return 0.0;
  if (shape == DensityShape::kUniformBall) return supremum(d);
  const double w = 1.0 - s;
  return supremum(d) * w * w * w;
}

JumpMode parse_jump_mode(const std::string& name) {
  if (name == "thinning") return JumpMode::kThinning;
  if (name == "exact-clock" || name == "exact") return JumpMode::kExactClock;
  throw ConfigError("sim: unknown jump_mode '" + name +
                    "' (known: thinning, exact-clock)");
}

std::string to_string(JumpMode mode) {
  return mode == JumpMode::kThinning ? "thinning" : "exact-clock";
}

// ---------------------------------------------------------------------------

const DensitySpec& SimConfig::density_for(int mass) const {
  if (init.size() == 1) return init.front();
  return init.at(static_cast<std::size_t>(mass - 1));
}

long long SimConfig::steps() const {
  return static_cast<long long>(std::llround(T / dt));
}

void SimConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("sim: " + what); };
  if (d < 1 || d > kMaxDim) fail("d must be 1, 2 or 3");
  if (N < 1) fail("N must be >= 1");
  if (N > std::numeric_limits<std::uint32_t>::max()) fail("N too large");
  if (M < 1 || M > 65535) fail("M must be in 1..65535");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("lambda must be >= 0");
  if (static_cast<int>(r.size()) != M) {
    fail("r must have M = " + std::to_string(M) + " entries (got " +
         std::to_string(r.size()) + ")");
  }
  double total = 0.0;
  for (double v : r) {
    if (!(v >= 0.0)) fail("r entries must be nonnegative");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "sum of r must be 1 +- 1e-12 (got " << total << ")";
    fail(os.str());
  }
  if (init.size() != 1 && static_cast<int>(init.size()) != M) {
    fail("init must give one density or one per mass");
  }
  for (const auto& p : init) {
    if (!(p.R > 0.0)) fail("init.R must be > 0");
    if (p.gamma > 0.0 && p.gamma < p.supremum(d) * (1.0 - 1e-12)) {
      std::ostringstream os;
      os << "init.Gamma = " << p.gamma << " is below sup p = "
         << p.supremum(d) << " (rejection bound violated)";
      fail(os.str());
    }
    if (!(L > 2.0 * p.R)) fail("box side L must exceed 2R");
  }
  if (!(dt > 0.0) || !(T > 0.0)) fail("dt and T must be > 0");
  if (std::abs(T / dt - std::round(T / dt)) > 1e-9 * (T / dt)) {
    fail("dt must divide T");
  }
  if (workers < 1) fail("workers must be >= 1");
}

void SimConfig::validate_box(const NoiseFieldSet& noise) const {
  double q_max = 0.0;
  double drift_max = 0.0;
  RandomStream rng(seed, StreamRole::kAuxiliary, 7, 0);
  for (int s = 0; s < 256; ++s) {
    Vec x{};
    for (int i = 0; i < d; ++i) x[i] = (rng.uniform() - 0.5) * L;
    if (!noise.empty()) {
      q_max = std::max(q_max, noise.q_diag_norm(x));
      drift_max = std::max(drift_max, norm(noise.strat_correction(x), d));
    }
  }
  double R_max = 0.0;
  for (const auto& p : init) R_max = std::max(R_max, p.R);
  const double need =
      R_max + drift_max * T + 6.0 * std::sqrt((lambda * lambda + q_max) * T);
  if (0.5 * L < need) {
    std::ostringstream os;
    os << "sim: box side L = " << L << " too small; need L/2 >= R + drift*T + "
       << "6 sqrt((lambda^2 + |Q|) T) = " << need;
    throw ConfigError(os.str());
  }
}

long long ParticleState::count_mass(int m) const {
  return std::count(masses.begin(), masses.end(), static_cast<std::uint16_t>(m));
}

// ---------------------------------------------------------------------------

NoisePath::NoisePath(std::uint64_t seed, long long steps, std::size_t fields,
                     double dt)
    : seed_(seed), steps_(steps), fields_(fields), dt_(dt) {
  if (steps < 0 || !(dt > 0.0)) throw ConfigError("noise path: bad steps/dt");
  dw_.resize(static_cast<std::size_t>(steps) * fields);
  const double scale = std::sqrt(dt);
  for (long long s = 0; s < steps; ++s) {
    for (std::size_t k = 0; k < fields; ++k) {
      RandomStream rng(seed, StreamRole::kCommon, k,
                       static_cast<std::uint64_t>(s));
      dw_[static_cast<std::size_t>(s) * fields + k] = scale * rng.normal();
    }
  }
}

std::span<const double> NoisePath::step(long long s) const {
  if (s < 0 || s >= steps_) {
    throw ConfigError("noise path: step " + std::to_string(s) +
                      " beyond path length " + std::to_string(steps_));
  }
  return {dw_.data() + static_cast<std::size_t>(s) * fields_, fields_};
}

NoisePath NoisePath::coarsen(int factor) const {
  if (factor < 1 || steps_ % factor != 0) {
    throw ConfigError("noise path: coarsening factor must divide the steps");
  }
  NoisePath out;
  out.seed_ = seed_;
  out.steps_ = steps_ / factor;
  out.fields_ = fields_;
  out.dt_ = dt_ * factor;
  out.dw_.assign(static_cast<std::size_t>(out.steps_) * fields_, 0.0);
  for (long long s = 0; s < steps_; ++s) {
    for (std::size_t k = 0; k < fields_; ++k) {
      out.dw_[static_cast<std::size_t>(s / factor) * fields_ + k] +=
          dw_[static_cast<std::size_t>(s) * fields_ + k];
    }
  }
  return out;
}

std::uint64_t NoisePath::checksum() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : dw_) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xFFu;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

// ---------------------------------------------------------------------------

ParticleState sample_initial(const SimConfig& cfg) {
  cfg.validate();
  const int d = cfg.d;
  const auto n = static_cast<std::size_t>(cfg.N);
  ParticleState state;
  state.d = d;
  state.positions.assign(n * d, 0.0);
  state.masses.assign(n, kTombstone);

  std::vector<double> cumulative(cfg.r.size());
  std::partial_sum(cfg.r.begin(), cfg.r.end(), cumulative.begin());

  for (const auto& p : cfg.init) {
    const double acceptance =
        1.0 / (std::pow(2.0 * p.R, d) * p.declared_bound(d));
    if (acceptance < 1e-3) {
      throw ConfigError("init: rejection acceptance " +
                        std::to_string(acceptance) +
                        " < 1e-3 (Gamma inconsistent with the density)");
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    RandomStream mass_rng(cfg.seed, StreamRole::kInitMass, i, 0);
    const double u = mass_rng.uniform() * cumulative.back();
    int m = static_cast<int>(
                std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                cumulative.begin()) + 1;
    m = std::min(m, cfg.M);
    state.masses[i] = static_cast<std::uint16_t>(m);

    const DensitySpec& p = cfg.density_for(m);
    const double bound = p.declared_bound(d);
    RandomStream pos_rng(cfg.seed, StreamRole::kInitPosition, i, 0);
    bool accepted = false;
    for (int attempt = 0; attempt < 1000000 && !accepted; ++attempt) {
      Vec x{};
      for (int k = 0; k < d; ++k) x[k] = (2.0 * pos_rng.uniform() - 1.0) * p.R;
      const double value = p.density(x, d);
      if (value > bound * (1.0 + 1e-12)) {
        throw ConfigError("init: density exceeds declared Gamma");
      }
      if (pos_rng.uniform() * bound < value) {
        for (int k = 0; k < d; ++k) state.position(i)[k] = x[k];
        accepted = true;
      }
    }
    if (!accepted) throw ConfigError("init: rejection sampling did not converge");
    state.ledger.initial_total += m;
  }
  state.active_count = cfg.N;
  state.ledger.current_total = state.ledger.initial_total;
  return state;
}

// ---------------------------------------------------------------------------

namespace {

void diffuse_range(ParticleState& state, const NoiseFieldSet& noise,
                   std::span<const double> dw, const SimConfig& cfg,
                   std::size_t begin, std::size_t end) {
  const int d = state.d;
  const double sqdt = std::sqrt(cfg.dt);
  const std::size_t fields = noise.size();
  for (std::size_t i = begin; i < end; ++i) {
    if (!state.active(i)) continue;
    double* x = state.position(i);
    Vec here{};
    for (int a = 0; a < d; ++a) here[a] = x[a];
    Vec move{};
    for (std::size_t k = 0; k < fields; ++k) {
      const FieldJet j = noise.jet(k, here);
      for (int a = 0; a < d; ++a) {
        double corr = 0.0;
        for (int b = 0; b < d; ++b) corr += j.value[b] * j.jacobian[a][b];
        move[a] += j.value[a] * dw[k] + 0.5 * corr * cfg.dt;
      }
    }
    if (cfg.lambda != 0.0) {
      RandomStream rng(cfg.seed, StreamRole::kMolecular, i,
                       static_cast<std::uint64_t>(state.step));
      for (int a = 0; a < d; ++a) move[a] += cfg.lambda * sqdt * rng.normal();
    }
    for (int a = 0; a < d; ++a) {
      const double v = x[a] + move[a];
      if (!std::isfinite(v)) {
        throw NumericalError("particles: non-finite position of particle " +
                             std::to_string(i) + " at step " +
                             std::to_string(state.step));
      }
      x[a] = wrap_coordinate(v, cfg.L);
    }
  }
}

}  // namespace

void diffusion_step(ParticleState& state, const NoiseFieldSet& noise,
                    std::span<const double> dw_step, const SimConfig& cfg) {
  if (dw_step.size() != noise.size()) {
    throw ConfigError("particles: noise increment has " +
                      std::to_string(dw_step.size()) + " entries for " +
                      std::to_string(noise.size()) + " fields");
  }
  const std::size_t n = state.size();
  const auto workers = static_cast<std::size_t>(std::max(1, cfg.workers));
  if (workers == 1 || n < 4096) {
    diffuse_range(state, noise, dw_step, cfg, 0, n);
    return;
  }
  // chunks are disjoint and every particle's noise is keyed by its index, so
  // the result does not depend on the worker count
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, w, begin, end] {
      try {
        diffuse_range(state, noise, dw_step, cfg, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// ---------------------------------------------------------------------------

double pair_rate(const KernelSpec& kernel, const Vec& v, long long N) {
  return 2.0 * kernel.theta_eps(v) / static_cast<double>(N);
}

void apply_coagulation(ParticleState& state, std::size_t i, std::size_t j,
                       int M, double u) {
  const int mi = state.masses[i];
  const int mj = state.masses[j];
  const int merged = mi + mj;
  ++state.event_count;
  if (merged <= M) {
    const bool keep_i = u < static_cast<double>(mi) / merged;
    const std::size_t survivor = keep_i ? i : j;
    const std::size_t removed = keep_i ? j : i;
    state.masses[survivor] = static_cast<std::uint16_t>(merged);
    state.masses[removed] = kTombstone;
    state.active_count -= 1;
  } else {
    state.masses[i] = kTombstone;
    state.masses[j] = kTombstone;
    state.active_count -= 2;
    state.ledger.current_total -= merged;
    state.ledger.overflow_lost += merged;
    ++state.annihilation_count;
  }
}

namespace {

void check_range(const KernelSpec& kernel, const SimConfig& cfg) {
  if (kernel.range() >= 0.5 * cfg.L) {
    throw ConfigError("kernel: interaction range C0*eps must be below L/2");
  }
  if (kernel.epsilon() < 10.0 * std::numeric_limits<double>::epsilon() * cfg.L) {
    throw ConfigError("kernel: eps below 10 machine epsilons of the box size");
  }
}

CellList neighbour_cells(const ParticleState& state, const KernelSpec& kernel,
                         const SimConfig& cfg) {
  CellList cells;
  cells.build(state.positions, state.d, cfg.L, kernel.range(),
              [&state](std::size_t i) { return state.active(i); });
  return cells;
}

}  // namespace

void coagulation_step_thinning(ParticleState& state, const KernelSpec& kernel,
                               const SimConfig& cfg) {
  if (!cfg.coagulation) return;
  check_range(kernel, cfg);
  const CellList cells = neighbour_cells(state, kernel, cfg);
  RandomStream rng(cfg.seed, StreamRole::kCoagulation, 0,
                   static_cast<std::uint64_t>(state.step));
  const double range = kernel.range();
  cells.for_each_pair([&](std::uint32_t i, std::uint32_t j) {
    // a particle removed earlier in this step takes no further part
    if (!state.active(i) || !state.active(j)) return;
    const Vec v = periodic_delta(state.position(i), state.position(j),
                                 state.d, cfg.L);
    if (norm(v, state.d) >= range) return;
    const double rate = pair_rate(kernel, v, cfg.N);
    if (rate <= 0.0) return;
    const double p = -std::expm1(-cfg.dt * rate);
    state.rate_integral += p;
    if (rng.uniform() < p) apply_coagulation(state, i, j, cfg.M, rng.uniform());
  });
}

void coagulation_step_exact(ParticleState& state, const KernelSpec& kernel,
                            const SimConfig& cfg) {
  if (!cfg.coagulation) return;
  check_range(kernel, cfg);
  struct Candidate {
    std::uint32_t i;
    std::uint32_t j;
    double rate;
  };
  std::vector<Candidate> pairs;
  const CellList cells = neighbour_cells(state, kernel, cfg);
  cells.for_each_pair([&](std::uint32_t i, std::uint32_t j) {
    const Vec v = periodic_delta(state.position(i), state.position(j),
                                 state.d, cfg.L);
    const double rate = pair_rate(kernel, v, cfg.N);
    if (rate > 0.0) pairs.push_back({i, j, rate});
  });

  RandomStream rng(cfg.seed, StreamRole::kCoagulation, 0,
                   static_cast<std::uint64_t>(state.step));
  double elapsed = 0.0;
  while (!pairs.empty()) {
    CompensatedSum total_sum;
    for (const auto& c : pairs) total_sum.add(c.rate);
    const double total = total_sum.value();
    const double wait = -std::log(rng.uniform()) / total;
    if (elapsed + wait >= cfg.dt) {
      state.rate_integral += total * (cfg.dt - elapsed);
      break;
    }
    state.rate_integral += total * wait;
    elapsed += wait;
    const double target = rng.uniform() * total;
    double acc = 0.0;
    std::size_t pick = pairs.size() - 1;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      acc += pairs[p].rate;
      if (target < acc) {
        pick = p;
        break;
      }
    }
    const Candidate chosen = pairs[pick];
    apply_coagulation(state, chosen.i, chosen.j, cfg.M, rng.uniform());
    // positions are frozen and rates mass-independent: only pairs that lost
    // a member change
    std::erase_if(pairs, [&state](const Candidate& c) {
      return !state.active(c.i) || !state.active(c.j);
    });
  }
}

// ---------------------------------------------------------------------------

ParticleState run_particles(const SimConfig& cfg, const NoiseFieldSet& noise,
                            const KernelSpec& kernel, const NoisePath& path,
                            const std::vector<ParticleObserver>& observers,
                            const RunOptions& options) {
  cfg.validate();
  if (!noise.empty() && noise.dim() != cfg.d) {
    throw ConfigError("particles: noise dimension differs from sim.d");
  }
  if (kernel.dim() != cfg.d) {
    throw ConfigError("particles: kernel dimension differs from sim.d");
  }
  const long long steps = cfg.steps();
  if (path.steps() < steps || path.fields() != noise.size()) {
    throw ConfigError("particles: noise path too short or wrong field count");
  }
  if (std::abs(path.dt() - cfg.dt) > 1e-12 * cfg.dt) {
    throw ConfigError("particles: noise path dt differs from sim.dt");
  }
  ParticleState state = sample_initial(cfg);
  auto notify = [&] {
    for (const auto& obs : observers) obs(state);
  };
  notify();
  for (long long s = 0; s < steps; ++s) {
    try {
      diffusion_step(state, noise, path.step(s), cfg);
      if (cfg.jump_mode == JumpMode::kThinning) {
        coagulation_step_thinning(state, kernel, cfg);
      } else {
        coagulation_step_exact(state, kernel, cfg);
      }
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " (t = " +
                           std::to_string(state.t) + ")");
    }
    state.step = s + 1;
    state.t = static_cast<double>(state.step) * cfg.dt;
    const bool last = state.step == steps;
    if (!last && options.observe_every > 0 &&
        state.step % options.observe_every == 0) {
      notify();
    }
    if (last) notify();
  }
  return state;
}

}  // namespace smolu
