// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end over the C API.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smolu/smolu.h"

namespace {

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
};

int exit_code(smolu_status s) {
  switch (s) {
    case SMOLU_OK: return 0;
    case SMOLU_ERR_CONFIG:
    case SMOLU_ERR_ARGUMENT: return 2;
    default: return 3;
  }
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-c,--config,--plan", c.config, "configuration file");
  sub->add_option("-s,--set", c.sets, "override, section.key=value (repeatable)");
  sub->add_option("-o,--out", c.out, "output directory");
}

int report(smolu_status s, const char* what) {
  if (s != SMOLU_OK)
    std::fprintf(stderr, "smolu %s: %s\n", what, smolu_last_error());
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smolu: particle systems and SPDE limits for Smoluchowski coagulation "
               "with transport noise"};
  app.require_subcommand(1);
  app.set_version_flag("--version", smolu_version());

  Common common;
  std::vector<std::string> extra;  // shorthand flags translated to --set

  auto* simulate = app.add_subcommand("simulate", "run the particle system");
  auto* solve = app.add_subcommand("solve", "run the grid SPDE solver");
  auto* converge = app.add_subcommand("converge", "N-ladder convergence study");
  auto* oracle = app.add_subcommand("oracle", "homogeneous ODE vs analytic solution");
  auto* auxpde = app.add_subcommand("auxpde", "auxiliary PDE bounds (d = 1)");
  auto* audit = app.add_subcommand("audit", "ledger and cardinality audit");
  auto* validate = app.add_subcommand("validate-config", "check a configuration");
  for (auto* sub : {simulate, solve, converge, oracle, auxpde, audit, validate})
    add_common(sub, common);

  long long N = 0, seed = 0;
  double T = 0.0, dt = 0.0;
  int M = 0, seeds = 0;
  bool verbose = false;
  for (auto* sub : {simulate, audit, solve}) {
    sub->add_option("--N", N, "particle count");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--T", T, "horizon");
  }
  oracle->add_option("--M", M, "mass cap");
  oracle->add_option("--T", T, "horizon");
  oracle->add_option("--dt", dt, "time step");
  converge->add_option("--seeds", seeds, "use seeds 1..K");
  converge->add_flag("-v,--verbose", verbose, "log each (N, seed) cell");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  const std::string sec = chosen == oracle ? "oracle" : "sim";
  if (N > 0) extra.push_back("sim.N=" + std::to_string(N));
  if (seed > 0) extra.push_back("sim.seed=" + std::to_string(seed));
  if (T > 0.0) extra.push_back(sec + ".T=" + std::to_string(T));
  if (dt > 0.0) extra.push_back("oracle.dt=" + std::to_string(dt));
  if (M > 0) extra.push_back("oracle.M=" + std::to_string(M));
  if (seeds > 0) {
    std::string list;
    for (int s = 1; s <= seeds; ++s) list += (s > 1 ? " " : "") + std::to_string(s);
    extra.push_back("study.seeds=" + list);
  }

  smolu_config* cfg = nullptr;
  smolu_status st = common.config.empty() ? smolu_config_new(&cfg)
                                          : smolu_config_load(common.config.c_str(), &cfg);
  if (st != SMOLU_OK) return report(st, name.c_str());
  for (const auto* list : {&common.sets, &extra}) {
    for (const auto& a : *list) {
      st = smolu_config_set(cfg, a.c_str());
      if (st != SMOLU_OK) {
        smolu_config_free(cfg);
        return report(st, name.c_str());
      }
    }
  }
  const char* out = common.out.empty() ? nullptr : common.out.c_str();

  int code = 0;
  if (chosen == validate) {
    st = smolu_config_validate(cfg);
    if (st == SMOLU_OK) std::fputs(smolu_config_text(cfg), stdout);
    code = report(st, name.c_str());
  } else if (chosen == simulate) {
    code = report(smolu_run_simulate(cfg, out), name.c_str());
  } else if (chosen == solve) {
    code = report(smolu_run_solve(cfg, out), name.c_str());
  } else if (chosen == converge) {
    code = report(smolu_run_converge(cfg, out, verbose ? 1 : 0), name.c_str());
  } else if (chosen == oracle) {
    double err = 0.0;
    st = smolu_run_oracle(cfg, out, &err);
    if (st == SMOLU_OK) std::printf("max relative error (m <= 8): %.3e\n", err);
    code = report(st, name.c_str());
  } else if (chosen == auxpde) {
    double r2 = 0.0;
    st = smolu_run_auxpde(cfg, out, &r2);
    if (st == SMOLU_OK) std::printf("gradient log-fit R^2: %.4f\n", r2);
    code = report(st, name.c_str());
  } else if (chosen == audit) {
    st = smolu_run_audit(cfg, out);
    if (st == SMOLU_OK) std::printf("audit passed\n");
    code = report(st, name.c_str());
  }
  smolu_config_free(cfg);
  return code;
}
