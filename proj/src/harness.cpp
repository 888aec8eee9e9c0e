// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smolu/harness.hpp"

#include <cmath>
#include <sstream>

#include "smolu/io.hpp"
#include "smolu/measures.hpp"
#include "smolu/oracle.hpp"
#include "smolu/spde.hpp"

namespace smolu {

std::string AuditReport::summary() const {
  std::ostringstream os;
  os << (ok ? "PASS" : "FAIL") << " snapshots=" << snapshots << " N0=" << N0
     << " active=" << active << " events=" << events
     << " annihilations=" << annihilations << " rate_integral=" << rate_integral
     << " bound=" << rate_bound;
  for (const auto& f : failures) os << "\n  " << f;
  return os.str();
}

void audit_snapshot(const ParticleState& state, long long N0, double tolerance,
                    AuditReport& report) {
  ++report.snapshots;
  report.N0 = N0;
  report.active = state.active_count;
  report.events = state.event_count;
  report.annihilations = state.annihilation_count;
  report.rate_integral = state.rate_integral;
  report.rate_bound = static_cast<double>(N0) * (1.0 + tolerance);
  auto fail = [&](const std::string& what) {
    report.ok = false;
    if (report.failures.size() < 20)
      report.failures.push_back("step " + std::to_string(state.step) + ": " + what);
  };

  long long active = 0, mass = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (!state.active(i)) continue;
    ++active;
    mass += state.masses[i];
  }
  const MassLedger& led = state.ledger;
  if (active != state.active_count) fail("active count does not match the slots");
  if (mass != led.current_total) fail("mass on slots differs from ledger current_total");
  if (led.initial_total != led.current_total + led.overflow_lost)
    fail("initial_total != current_total + overflow_lost");
  const long long removed = N0 - active;
  const long long ev = state.event_count;
  if (removed < ev || removed > 2 * ev)
    fail("N(0) - N(t) = " + std::to_string(removed) + " outside [" +
         std::to_string(ev) + ", " + std::to_string(2 * ev) + "]");
  if (removed != ev + state.annihilation_count)
    fail("N(0) - N(t) != events + annihilations");
  if (state.rate_integral > report.rate_bound) {
    std::ostringstream os;
    os << "rate integral " << state.rate_integral << " exceeds N(1+tol) = "
       << report.rate_bound;
    fail(os.str());
  }
}

NoisePath make_path(const Config& cfg, std::uint64_t seed) {
  return NoisePath(seed, cfg.sim.steps(), cfg.build_noise().size(), cfg.sim.dt);
}

NoisePath spde_path(const Config& cfg, const NoisePath& particle_path) {
  const int factor = static_cast<int>(std::llround(cfg.spde_dt() / cfg.sim.dt));
  return factor > 1 ? particle_path.coarsen(factor) : particle_path;
}

AuditReport run_ledger_audit(const Config& cfg, long long every,
                             double tolerance) {
  cfg.validate();
  const NoiseFieldSet noise = cfg.build_noise();
  const KernelSpec kernel = cfg.kernel_for(cfg.sim.N);
  const NoisePath path = make_path(cfg, cfg.sim.seed);
  AuditReport report;
  const long long N0 = cfg.sim.N;
  run_particles(cfg.sim, noise, kernel, path,
                {[&](const ParticleState& s) { audit_snapshot(s, N0, tolerance, report); }},
                RunOptions{every});
  return report;
}

namespace {

std::uint64_t independent_seed(std::uint64_t seed, long long N) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(N + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

ConvergenceTable run_convergence_study(const Config& cfg, const LogFn& log) {
  cfg.validate();
  const NoiseFieldSet noise = cfg.build_noise();
  const GridGeometry grid = cfg.grid_geometry();
  const SpdeSolver solver(grid, noise, cfg.spde_options());
  const TestFunctionFamily family =
      TestFunctionFamily::fourier(cfg.sim.d, cfg.sim.L, cfg.study.kmax);
  const FieldState init =
      initial_field(grid, cfg.sim.M, cfg.sim.r, cfg.sim.init);

  ConvergenceTable table;
  table.M = cfg.sim.M;
  for (std::uint64_t seed : cfg.study.seeds) {
    const NoisePath path = make_path(cfg, seed);
    const NoisePath spath = spde_path(cfg, path);
    FieldState field;
    std::string spde_error;
    try {
      field = solve_system(solver, init, spath, cfg.spde_dt(), cfg.sim.T, {}, 0,
                           cfg.grid.scheme);
    } catch (const std::exception& e) {
      spde_error = std::string("spde: ") + e.what();
    }
    for (long long N : cfg.study.ladder) {
      ConvergenceRow row;
      row.N = N;
      row.seed = seed;
      row.spde_path_checksum = spath.checksum();
      try {
        SimConfig sim = cfg.sim;
        sim.N = N;
        sim.seed = seed;
        const KernelSpec kernel = cfg.kernel_for(N);
        row.epsilon = kernel.epsilon();
        if (!spde_error.empty()) throw NumericalError(spde_error);
        const NoisePath ppath = cfg.study.coupling == Coupling::kShared
                                    ? path
                                    : make_path(cfg, independent_seed(seed, N));
        row.particle_path_checksum = ppath.checksum();
        const ParticleState final_state = run_particles(sim, noise, kernel, ppath, {});
        const EmpiricalMeasure mu = snapshot(final_state, N, sim.M, sim.L);
        const Discrepancy disc = discrepancy(mu, field, family);
        row.per_mass = disc.per_mass;
        row.aggregate = disc.aggregate;
        row.events = final_state.event_count;
        row.active = final_state.active_count;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      if (log) {
        std::ostringstream os;
        os << "seed " << seed << " N " << N << ": "
           << (row.error.empty() ? "aggregate " + csv_num(row.aggregate) : row.error);
        log(os.str());
      }
      table.rows.push_back(std::move(row));
    }
  }

  for (long long N : cfg.study.ladder) {
    ConvergenceSummary s;
    s.N = N;
    std::vector<double> vals;
    for (const auto& r : table.rows)
      if (r.N == N && r.error.empty()) vals.push_back(r.aggregate);
    s.ok_count = static_cast<int>(vals.size());
    if (!vals.empty()) {
      double mean = 0.0;
      for (double v : vals) mean += v;
      mean /= vals.size();
      double var = 0.0;
      for (double v : vals) var += (v - mean) * (v - mean);
      s.mean_aggregate = mean;
      s.std_error = vals.size() > 1
                        ? std::sqrt(var / (vals.size() - 1) / vals.size())
                        : 0.0;
    }
    table.summary.push_back(s);
  }
  return table;
}

void write_convergence_csv(const std::filesystem::path& path,
                           const ConvergenceTable& table) {
  std::vector<std::string> cols{"kind", "N", "seed", "epsilon"};
  for (int m = 1; m <= table.M; ++m) cols.push_back("D_" + std::to_string(m));
  for (const char* c : {"aggregate", "std_error", "events", "active",
                        "particle_path_checksum", "spde_path_checksum", "error"})
    cols.emplace_back(c);
  CsvWriter csv(path, "smolu converge", cols);
  auto hex = [](std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << v;
    return os.str();
  };
  for (const auto& r : table.rows) {
    std::vector<std::string> cells{"cell", std::to_string(r.N),
                                   std::to_string(r.seed), csv_num(r.epsilon)};
    for (int m = 0; m < table.M; ++m)
      cells.push_back(m < static_cast<int>(r.per_mass.size()) ? csv_num(r.per_mass[m]) : "");
    cells.push_back(r.error.empty() ? csv_num(r.aggregate) : "");
    cells.push_back("");
    cells.push_back(std::to_string(r.events));
    cells.push_back(std::to_string(r.active));
    cells.push_back(hex(r.particle_path_checksum));
    cells.push_back(hex(r.spde_path_checksum));
    cells.push_back(r.error);
    csv.row(cells);
  }
  for (const auto& s : table.summary) {
    std::vector<std::string> cells{"summary", std::to_string(s.N),
                                   "n=" + std::to_string(s.ok_count), ""};
    for (int m = 0; m < table.M; ++m) cells.push_back("");
    cells.push_back(csv_num(s.mean_aggregate));
    cells.push_back(csv_num(s.std_error));
    for (int i = 0; i < 4; ++i) cells.push_back("");
    cells.push_back(s.ok_count == 0 ? "no successful cells" : "");
    csv.row(cells);
  }
}

SimulationSummary run_simulation(const Config& cfg,
                                 const std::filesystem::path& dir) {
  cfg.validate();
  const NoiseFieldSet noise = cfg.build_noise();
  const KernelSpec kernel = cfg.kernel_for(cfg.sim.N);
  const NoisePath path = make_path(cfg, cfg.sim.seed);
  CsvWriter csv(dir / "particles.csv", "smolu simulate",
                {"time", "step", "mass", "count", "active", "events",
                 "annihilations", "initial_total", "current_total",
                 "overflow_lost", "rate_integral"});
  SimulationSummary out;
  const long long N0 = cfg.sim.N;
  long long snap = 0;
  auto observer = [&](const ParticleState& s) {
    audit_snapshot(s, N0, 0.05, out.audit);
    for (int m = 1; m <= cfg.sim.M; ++m) {
      csv.row({csv_num(s.t), std::to_string(s.step), std::to_string(m),
               std::to_string(s.count_mass(m)), std::to_string(s.active_count),
               std::to_string(s.event_count), std::to_string(s.annihilation_count),
               std::to_string(s.ledger.initial_total),
               std::to_string(s.ledger.current_total),
               std::to_string(s.ledger.overflow_lost), csv_num(s.rate_integral)});
    }
    if (cfg.output.particle_dumps) {
      const EmpiricalMeasure mu = snapshot(s, N0, cfg.sim.M, cfg.sim.L);
      for (int m = 1; m <= cfg.sim.M; ++m) {
        std::ostringstream name;
        name << "positions_s" << snap << "_m" << m << ".smnp";
        write_smnp(dir / name.str(), cfg.sim.d, mu.points[m - 1]);
      }
    }
    ++snap;
  };
  out.final_state = run_particles(cfg.sim, noise, kernel, path, {observer},
                                  RunOptions{cfg.study.observe_every});
  write_text(dir / "audit.txt", out.audit.summary() + "\n");
  return out;
}

FieldState run_solve(const Config& cfg, const std::filesystem::path& dir) {
  cfg.validate();
  const NoiseFieldSet noise = cfg.build_noise();
  const GridGeometry grid = cfg.grid_geometry();
  const SpdeSolver solver(grid, noise, cfg.spde_options());
  const NoisePath path = spde_path(cfg, make_path(cfg, cfg.sim.seed));
  CsvWriter csv(dir / "norms.csv", "smolu solve",
                {"time", "mass", "integral", "L1", "L2", "Linf", "clamped_mass"});
  long long snap = 0;
  auto observer = [&](const FieldState& s) {
    for (int m = 1; m <= s.M; ++m)
      csv.row({csv_num(s.t), std::to_string(m), csv_num(s.integral(m)),
               csv_num(s.l1_norm(m)), csv_num(s.l2_norm(m)),
               csv_num(s.sup_norm(m)), csv_num(s.clamped_mass)});
    if (cfg.output.field_dumps)
      write_smnf(dir / ("field_s" + std::to_string(snap) + ".smnf"), s);
    ++snap;
  };
  FieldState init = initial_field(grid, cfg.sim.M, cfg.sim.r, cfg.sim.init);
  const long long every = cfg.study.observe_every > 0
                              ? std::max(1LL, cfg.study.observe_every *
                                                  path.steps() /
                                                  std::max(1LL, cfg.sim.steps()))
                              : 0;
  return solve_system(solver, std::move(init), path, cfg.spde_dt(), cfg.sim.T,
                      {observer}, every, cfg.grid.scheme);
}

OracleSummary run_oracle(const Config& cfg, const std::filesystem::path& dir) {
  const auto& o = cfg.oracle;
  if (o.M < 1 || !(o.T > 0.0) || !(o.dt > 0.0))
    throw ConfigError("oracle: need M >= 1, T > 0, dt > 0");
  HomogeneousState init;
  init.c.assign(o.M, 0.0);
  init.c[0] = 1.0;
  const auto traj = ode_solve(init, o.dt, o.T, o.record_every);
  CsvWriter csv(dir / "oracle.csv", "smolu oracle",
                {"t", "m", "c_m", "analytic_c_m", "abs_err"});
  OracleSummary out;
  for (const auto& s : traj) {
    for (int m = 1; m <= o.M; ++m) {
      const double exact = analytic_constant_kernel(m, s.t);
      const double err = std::abs(s.c[m - 1] - exact);
      csv.row({csv_num(s.t), std::to_string(m), csv_num(s.c[m - 1]),
               csv_num(exact), csv_num(err)});
      out.max_abs_err = std::max(out.max_abs_err, err);
      if (m <= 8 && exact > 0.0) out.max_rel_err = std::max(out.max_rel_err, err / exact);
    }
  }
  return out;
}

AuxSummary run_auxpde(const Config& cfg, const std::filesystem::path& dir) {
  if (cfg.sim.d != 1) throw ConfigError("auxpde: sim.d must be 1");
  const AuxProblem base = cfg.aux_problem();
  AuxSummary out;
  out.fit = check_gradient_scaling(base, cfg.aux.eps_levels);
  AuxProblem zp = base;
  zp.epsilon = cfg.aux.z_epsilon;
  out.z_sup = z_continuity(zp, cfg.aux.z_values);
  CsvWriter csv(dir / "auxpde.csv", "smolu auxpde",
                {"epsilon", "z", "sup_r", "sup_grad_r", "sup_v", "slope",
                 "intercept", "r_squared"});
  const auto& f = out.fit;
  for (std::size_t i = 0; i < f.epsilon.size(); ++i)
    csv.row({csv_num(f.epsilon[i]), "0", csv_num(f.sup_r[i]),
             csv_num(f.sup_grad[i]), "0", csv_num(f.slope),
             csv_num(f.intercept), csv_num(f.r_squared)});
  for (std::size_t i = 0; i < out.z_sup.size(); ++i)
    csv.row({csv_num(zp.epsilon), csv_num(cfg.aux.z_values[i]), "", "",
             csv_num(out.z_sup[i]), "", "", ""});
  return out;
}

}  // namespace smolu
