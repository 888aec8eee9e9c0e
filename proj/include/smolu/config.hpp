// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smolu/auxpde.hpp"
#include "smolu/grid.hpp"
#include "smolu/kernel.hpp"
#include "smolu/noise_field.hpp"
#include "smolu/particles.hpp"
#include "smolu/spde.hpp"

namespace smolu {

/// One `field = <name> [params...] [amp=<a>]` line of the [noise] section.
struct NoiseEntry {
  std::string name;
  std::vector<double> params;
  double amplitude = 1.0;
};

struct KernelConfig {
  KernelShape shape = KernelShape::kAnnularBump;
  double C0 = 1.0;
  double iota = 0.1;
  EpsilonSchedule schedule{};
};

struct GridConfig {
  int n_cells = 128;
  double dt = 0.0;  // 0: same as sim.dt
  SpdeScheme scheme = SpdeScheme::kIto;
  TransportScheme transport = TransportScheme::kCentered;
  bool milstein = true;
  bool clamp = true;
};

enum class Coupling { kShared, kIndependent };
Coupling parse_coupling(const std::string& name);
std::string to_string(Coupling c);

struct StudyConfig {
  std::vector<long long> ladder{1000, 4000, 16000, 64000};
  std::vector<std::uint64_t> seeds{1};
  Coupling coupling = Coupling::kShared;
  long long observe_every = 0;
  int kmax = 4;
};

struct OracleConfig {
  int M = 20;
  double T = 1.0;
  double dt = 1e-3;
  long long record_every = 100;
};

struct AuxConfig {
  std::vector<double> eps_levels{0.08, 0.04, 0.02, 0.01};
  std::vector<double> z_values{0.2, 0.1, 0.05};
  double T = 0.1;
  double box = 1.0;
  double window = 0.25;
  double z_epsilon = 0.04;  // epsilon used for the z-continuity series
};

struct OutputConfig {
  std::string dir = "out";
  bool particle_dumps = false;
  bool field_dumps = false;
};

struct Config {
  SimConfig sim;
  std::vector<NoiseEntry> noise;
  KernelConfig kernel;
  GridConfig grid;
  StudyConfig study;
  OracleConfig oracle;
  AuxConfig aux;
  OutputConfig output;

  NoiseFieldSet build_noise() const;
  KernelSpec kernel_for(long long N) const;
  GridGeometry grid_geometry() const;
  double spde_dt() const { return grid.dt > 0.0 ? grid.dt : sim.dt; }
  SpdeOptions spde_options() const;
  AuxProblem aux_problem() const;

  /// Every check a run would perform up front: sim constraints, box size,
  /// kernel range, grid and both stability bounds.
  void validate() const;
  /// Resolved configuration in the same grammar the parser reads.
  std::string to_text() const;
};

/// Grammar: `[section]` headers, `key = value` lines, `#` comments. Lists
/// are whitespace separated. The noise section repeats `field = ...`.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);
/// Applies `section.key=value`.
void apply_override(Config& cfg, const std::string& assignment);
void set_value(Config& cfg, const std::string& section, const std::string& key,
               const std::string& value);

}  // namespace smolu
