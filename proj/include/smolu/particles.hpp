// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "smolu/kernel.hpp"
#include "smolu/noise_field.hpp"
#include "smolu/types.hpp"

namespace smolu {

enum class DensityShape {
  kUniformBall,  // 1 / |B(0,R)| on the ball
  kBump,         // c (1 - |x|^2/R^2)^3 on the ball
};

DensityShape parse_density_shape(const std::string& name);
std::string to_string(DensityShape shape);

/// Compactly supported initial density p_m with declared sup bound Gamma.
struct DensitySpec {
  DensityShape shape = DensityShape::kBump;
  double R = 1.0;
  double gamma = 0.0;  // 0 means "use the true supremum"

  double density(const Vec& x, int d) const;
  double supremum(int d) const;
  double declared_bound(int d) const { return gamma > 0.0 ? gamma : supremum(d); }
};

enum class JumpMode { kThinning, kExactClock };

JumpMode parse_jump_mode(const std::string& name);
std::string to_string(JumpMode mode);

struct SimConfig {
  int d = 1;
  long long N = 1000;
  int M = 3;
  double lambda = 1.0;
  std::vector<double> r{1.0, 0.0, 0.0};   // mass distribution r_1..r_M
  std::vector<DensitySpec> init{DensitySpec{}};  // one shared spec or one per mass
  double dt = 1e-3;
  double T = 1.0;
  double L = 16.0;
  std::uint64_t seed = 1;
  JumpMode jump_mode = JumpMode::kThinning;
  bool coagulation = true;
  int workers = 1;

  const DensitySpec& density_for(int mass) const;
  long long steps() const;
  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
  /// Box-side requirement R + drift T + 6 sqrt((lambda^2 + |Q|) T) on each
  /// side of the support.
  void validate_box(const NoiseFieldSet& noise) const;
};

/// Exact integer bookkeeping of mass.
struct MassLedger {
  long long initial_total = 0;
  long long current_total = 0;
  long long overflow_lost = 0;
};

inline constexpr std::uint16_t kTombstone = 0;

/// Configuration eta: positions and masses of all N slots. Slots are never
/// removed during a run; a coagulated-away particle becomes a tombstone.
struct ParticleState {
  int d = 1;
  std::vector<double> positions;     // N * d
  std::vector<std::uint16_t> masses;  // kTombstone or 1..M
  long long active_count = 0;
  MassLedger ledger;
  long long event_count = 0;
  long long annihilation_count = 0;
  /// Running compensator of the jump process: sum over steps of the
  /// per-pair firing probabilities actually offered (thinning) or the exact
  /// integral of the total rate (exact clock).
  double rate_integral = 0.0;
  double t = 0.0;
  long long step = 0;

  std::size_t size() const { return masses.size(); }
  bool active(std::size_t i) const { return masses[i] != kTombstone; }
  const double* position(std::size_t i) const { return positions.data() + i * d; }
  double* position(std::size_t i) { return positions.data() + i * d; }
  long long count_mass(int m) const;
};

/// Per-step common-noise increments dW[step][k] ~ N(0, dt), shared between
/// particle and field solvers.
class NoisePath {
 public:
  NoisePath() = default;
  NoisePath(std::uint64_t seed, long long steps, std::size_t fields, double dt);

  long long steps() const { return steps_; }
  std::size_t fields() const { return fields_; }
  double dt() const { return dt_; }
  std::uint64_t seed() const { return seed_; }
  std::span<const double> step(long long s) const;
  const std::vector<double>& data() const { return dw_; }

  /// Sums consecutive groups of `factor` increments (same Brownian path on a
  /// coarser time grid).
  NoisePath coarsen(int factor) const;
  /// FNV-1a over the little-endian bytes of the increments.
  std::uint64_t checksum() const;

 private:
  std::uint64_t seed_ = 0;
  long long steps_ = 0;
  std::size_t fields_ = 0;
  double dt_ = 0.0;
  std::vector<double> dw_;
};

/// Initial masses i.i.d. from r and positions from p_m by rejection.
ParticleState sample_initial(const SimConfig& cfg);

/// One Ito step of the position SDE for every active particle.
void diffusion_step(ParticleState& state, const NoiseFieldSet& noise,
                    std::span<const double> dw_step, const SimConfig& cfg);

/// Rate of an unordered active pair at displacement v: both orderings of
/// the generator's sum over i != j, i.e. 2 theta_eps(v) / N.
double pair_rate(const KernelSpec& kernel, const Vec& v, long long N);

void coagulation_step_thinning(ParticleState& state, const KernelSpec& kernel,
                               const SimConfig& cfg);
void coagulation_step_exact(ParticleState& state, const KernelSpec& kernel,
                            const SimConfig& cfg);

/// Applies a coagulation of the active pair (i, j): survivor chosen with
/// probability m_i/(m_i+m_j) for i, or both removed when the merged mass
/// exceeds M. `u` is a uniform(0,1) variate.
void apply_coagulation(ParticleState& state, std::size_t i, std::size_t j,
                       int M, double u);

using ParticleObserver =
    std::function<void(const ParticleState& state)>;

struct RunOptions {
  long long observe_every = 0;  // steps between observer calls (0: end only)
};

/// Alternates diffusion and coagulation for T/dt steps. Observers are called
/// at t = 0, every `observe_every` steps and at the final time.
ParticleState run_particles(const SimConfig& cfg, const NoiseFieldSet& noise,
                            const KernelSpec& kernel, const NoisePath& path,
                            const std::vector<ParticleObserver>& observers,
                            const RunOptions& options = {});

}  // namespace smolu
