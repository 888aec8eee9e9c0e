// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smolu/smolu.h"

#include <algorithm>
#include <cstdio>
#include <string>

#include "smolu/config.hpp"
#include "smolu/harness.hpp"
#include "smolu/io.hpp"
#include "smolu/measures.hpp"
#include "smolu/spde.hpp"

struct smolu_config {
  smolu::Config cfg;
  std::string text;
};

struct smolu_sim {
  smolu::Config cfg;
  smolu::NoiseFieldSet noise;
  smolu::KernelSpec kernel;
  smolu::NoisePath path;
  smolu::ParticleState state;
};

struct smolu_field {
  smolu::Config cfg;
  smolu::NoisePath path;
  smolu::SpdeSolver solver;
  smolu::FieldState state;
  long long step = 0;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_dir;

template <class F>
smolu_status guard(F&& f) {
  try {
    g_error.clear();
    return f();
  } catch (const smolu::ConfigError& e) {
    g_error = e.what();
    return SMOLU_ERR_CONFIG;
  } catch (const smolu::NumericalError& e) {
    g_error = e.what();
    return SMOLU_ERR_NUMERICAL;
  } catch (const std::exception& e) {
    g_error = e.what();
    return SMOLU_ERR_INTERNAL;
  }
}

smolu_status null_arg(const char* what) {
  g_error = std::string("null argument: ") + what;
  return SMOLU_ERR_ARGUMENT;
}

std::filesystem::path prepare_dir(const smolu::Config& cfg, const char* dir) {
  const auto p = smolu::resolve_output_dir(dir && *dir ? dir : cfg.output.dir);
  smolu::write_text(p / "resolved.conf", cfg.to_text());
  return p;
}

}  // namespace

extern "C" {

const char* smolu_last_error(void) { return g_error.c_str(); }
const char* smolu_version(void) { return "0.1.0"; }

smolu_status smolu_config_new(smolu_config** out) {
  if (!out) return null_arg("out");
  return guard([&] {
    *out = new smolu_config{};
    return SMOLU_OK;
  });
}

smolu_status smolu_config_load(const char* path, smolu_config** out) {
  if (!path || !out) return null_arg("path/out");
  return guard([&] {
    *out = new smolu_config{smolu::load_config(path), {}};
    return SMOLU_OK;
  });
}

smolu_status smolu_config_parse(const char* text, smolu_config** out) {
  if (!text || !out) return null_arg("text/out");
  return guard([&] {
    *out = new smolu_config{smolu::parse_config(text), {}};
    return SMOLU_OK;
  });
}

void smolu_config_free(smolu_config* cfg) { delete cfg; }

smolu_status smolu_config_set(smolu_config* cfg, const char* assignment) {
  if (!cfg || !assignment) return null_arg("cfg/assignment");
  return guard([&] {
    smolu::apply_override(cfg->cfg, assignment);
    return SMOLU_OK;
  });
}

smolu_status smolu_config_validate(const smolu_config* cfg) {
  if (!cfg) return null_arg("cfg");
  return guard([&] {
    cfg->cfg.validate();
    return SMOLU_OK;
  });
}

const char* smolu_config_text(smolu_config* cfg) {
  if (!cfg) return "";
  cfg->text = cfg->cfg.to_text();
  return cfg->text.c_str();
}

smolu_status smolu_sim_new(const smolu_config* cfg, smolu_sim** out) {
  if (!cfg || !out) return null_arg("cfg/out");
  return guard([&] {
    cfg->cfg.validate();
    auto* s = new smolu_sim{cfg->cfg, cfg->cfg.build_noise(),
                            cfg->cfg.kernel_for(cfg->cfg.sim.N),
                            smolu::make_path(cfg->cfg, cfg->cfg.sim.seed),
                            smolu::sample_initial(cfg->cfg.sim)};
    *out = s;
    return SMOLU_OK;
  });
}

void smolu_sim_free(smolu_sim* sim) { delete sim; }

smolu_status smolu_sim_advance(smolu_sim* sim, int64_t n) {
  if (!sim) return null_arg("sim");
  return guard([&] {
    const auto& c = sim->cfg.sim;
    for (int64_t k = 0; k < n && sim->state.step < c.steps(); ++k) {
      smolu::diffusion_step(sim->state, sim->noise, sim->path.step(sim->state.step), c);
      if (c.jump_mode == smolu::JumpMode::kThinning)
        smolu::coagulation_step_thinning(sim->state, sim->kernel, c);
      else
        smolu::coagulation_step_exact(sim->state, sim->kernel, c);
      ++sim->state.step;
      sim->state.t = static_cast<double>(sim->state.step) * c.dt;
    }
    return SMOLU_OK;
  });
}

double smolu_sim_time(const smolu_sim* sim) { return sim ? sim->state.t : 0.0; }
int64_t smolu_sim_active(const smolu_sim* sim) { return sim ? sim->state.active_count : 0; }
int64_t smolu_sim_events(const smolu_sim* sim) { return sim ? sim->state.event_count : 0; }

int64_t smolu_sim_count_mass(const smolu_sim* sim, int m) {
  return sim ? sim->state.count_mass(m) : 0;
}

int64_t smolu_sim_positions(const smolu_sim* sim, int m, double* buf,
                            size_t buf_len) {
  if (!sim || m < 1 || m > sim->cfg.sim.M) return -1;
  const auto mu = smolu::snapshot(sim->state, sim->cfg.sim.N, sim->cfg.sim.M,
                                  sim->cfg.sim.L);
  const auto& pts = mu.points[m - 1];
  if (buf) {
    const size_t n = std::min(buf_len, pts.size());
    std::copy(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(n), buf);
  }
  return static_cast<int64_t>(mu.count(m));
}

smolu_status smolu_field_new(const smolu_config* cfg, smolu_field** out) {
  if (!cfg || !out) return null_arg("cfg/out");
  return guard([&] {
    const auto& c = cfg->cfg;
    c.validate();
    const auto grid = c.grid_geometry();
    *out = new smolu_field{c, smolu::spde_path(c, smolu::make_path(c, c.sim.seed)),
                           smolu::SpdeSolver(grid, c.build_noise(), c.spde_options()),
                           smolu::initial_field(grid, c.sim.M, c.sim.r, c.sim.init)};
    return SMOLU_OK;
  });
}

void smolu_field_free(smolu_field* field) { delete field; }

smolu_status smolu_field_advance(smolu_field* field, int64_t n) {
  if (!field) return null_arg("field");
  return guard([&] {
    for (int64_t k = 0; k < n && field->step < field->path.steps(); ++k) {
      field->solver.step(field->state, field->path.step(field->step),
                         field->cfg.spde_dt(), field->cfg.grid.scheme);
      ++field->step;
    }
    return SMOLU_OK;
  });
}

double smolu_field_time(const smolu_field* f) { return f ? f->state.t : 0.0; }
double smolu_field_integral(const smolu_field* f, int m) {
  return f && m >= 1 && m <= f->state.M ? f->state.integral(m) : 0.0;
}
double smolu_field_sup(const smolu_field* f, int m) {
  return f && m >= 1 && m <= f->state.M ? f->state.sup_norm(m) : 0.0;
}

smolu_status smolu_run_simulate(const smolu_config* cfg, const char* output_dir) {
  if (!cfg) return null_arg("cfg");
  return guard([&] {
    const auto res = smolu::run_simulation(cfg->cfg, prepare_dir(cfg->cfg, output_dir));
    if (!res.audit.ok) {
      g_error = res.audit.summary();
      return SMOLU_ERR_CHECK_FAILED;
    }
    return SMOLU_OK;
  });
}

smolu_status smolu_run_solve(const smolu_config* cfg, const char* output_dir) {
  if (!cfg) return null_arg("cfg");
  return guard([&] {
    smolu::run_solve(cfg->cfg, prepare_dir(cfg->cfg, output_dir));
    return SMOLU_OK;
  });
}

smolu_status smolu_run_converge(const smolu_config* cfg, const char* output_dir,
                                int verbose) {
  if (!cfg) return null_arg("cfg");
  return guard([&] {
    const auto dir = prepare_dir(cfg->cfg, output_dir);
    smolu::LogFn log;
    if (verbose) log = [](const std::string& s) { std::fprintf(stderr, "%s\n", s.c_str()); };
    const auto table = smolu::run_convergence_study(cfg->cfg, log);
    smolu::write_convergence_csv(dir / "convergence.csv", table);
    return SMOLU_OK;
  });
}

smolu_status smolu_run_oracle(const smolu_config* cfg, const char* output_dir,
                              double* max_rel_err) {
  if (!cfg) return null_arg("cfg");
  return guard([&] {
    const auto s = smolu::run_oracle(cfg->cfg, prepare_dir(cfg->cfg, output_dir));
    if (max_rel_err) *max_rel_err = s.max_rel_err;
    return SMOLU_OK;
  });
}

smolu_status smolu_run_auxpde(const smolu_config* cfg, const char* output_dir,
                              double* r_squared) {
  if (!cfg) return null_arg("cfg");
  return guard([&] {
    const auto s = smolu::run_auxpde(cfg->cfg, prepare_dir(cfg->cfg, output_dir));
    if (r_squared) *r_squared = s.fit.r_squared;
    return SMOLU_OK;
  });
}

smolu_status smolu_run_audit(const smolu_config* cfg, const char* output_dir) {
  if (!cfg) return null_arg("cfg");
  return guard([&] {
    const auto dir = prepare_dir(cfg->cfg, output_dir);
    const auto report = smolu::run_ledger_audit(cfg->cfg, 1);
    smolu::write_text(dir / "audit.txt", report.summary() + "\n");
    if (!report.ok) {
      g_error = report.summary();
      return SMOLU_ERR_CHECK_FAILED;
    }
    return SMOLU_OK;
  });
}

const char* smolu_output_dir(const char* dir) {
  try {
    g_dir = smolu::resolve_output_dir(dir ? dir : "out").string();
  } catch (const std::exception& e) {
    g_error = e.what();
    g_dir.clear();
  }
  return g_dir.c_str();
}

}  // extern "C"
