// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "smolu/auxpde.hpp"
#include "smolu/config.hpp"
#include "smolu/grid.hpp"
#include "smolu/particles.hpp"

namespace smolu {

using LogFn = std::function<void(const std::string&)>;

struct AuditReport {
  bool ok = true;
  long long snapshots = 0;
  long long N0 = 0;
  long long active = 0;
  long long events = 0;
  long long annihilations = 0;
  double rate_integral = 0.0;
  double rate_bound = 0.0;
  std::vector<std::string> failures;  // "step <k>: <what>"

  std::string summary() const;
};

/// Checks one snapshot: exact mass ledger, N0 - N(t) in [events, 2 events]
/// (and equal to events + annihilations), and the compensator bound
/// rate_integral <= N0 (1 + tolerance).
void audit_snapshot(const ParticleState& state, long long N0, double tolerance,
                    AuditReport& report);

/// Runs the configured particle system and audits every `every` steps.
AuditReport run_ledger_audit(const Config& cfg, long long every = 1,
                             double tolerance = 0.05);

/// Per-step common-noise path at sim.dt for a seed.
NoisePath make_path(const Config& cfg, std::uint64_t seed);
/// The same Brownian path sampled at the SPDE time step.
NoisePath spde_path(const Config& cfg, const NoisePath& particle_path);

struct ConvergenceRow {
  long long N = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  std::vector<double> per_mass;
  double aggregate = 0.0;
  long long events = 0;
  long long active = 0;
  std::uint64_t particle_path_checksum = 0;
  std::uint64_t spde_path_checksum = 0;
  std::string error;  // empty on success
};

struct ConvergenceSummary {
  long long N = 0;
  int ok_count = 0;
  double mean_aggregate = 0.0;
  double std_error = 0.0;
};

struct ConvergenceTable {
  int M = 1;
  std::vector<ConvergenceRow> rows;
  std::vector<ConvergenceSummary> summary;  // one per ladder entry
};

/// For each seed: one noise path, one SPDE solve, then every ladder entry's
/// particle run against that solve. Cell failures are recorded, not thrown.
ConvergenceTable run_convergence_study(const Config& cfg, const LogFn& log = {});
void write_convergence_csv(const std::filesystem::path& path,
                           const ConvergenceTable& table);

struct SimulationSummary {
  ParticleState final_state;
  AuditReport audit;
};

/// Particle run writing particles.csv (and optional SMNP dumps) to `dir`.
SimulationSummary run_simulation(const Config& cfg,
                                 const std::filesystem::path& dir);
/// SPDE run writing norms.csv (and optional SMNF dumps) to `dir`.
FieldState run_solve(const Config& cfg, const std::filesystem::path& dir);

struct OracleSummary {
  double max_rel_err = 0.0;  // over m <= min(8, M), recorded times
  double max_abs_err = 0.0;
};
OracleSummary run_oracle(const Config& cfg, const std::filesystem::path& dir);

struct AuxSummary {
  GradientFit fit;
  std::vector<double> z_sup;
};
AuxSummary run_auxpde(const Config& cfg, const std::filesystem::path& dir);

}  // namespace smolu
