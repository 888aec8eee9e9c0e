// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smolu/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace smolu {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void bad(const std::string& where, const std::string& value) {
  throw ConfigError(where + ": cannot parse '" + value + "'");
}

double to_double(const std::string& where, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) bad(where, v);
    return x;
  } catch (const std::logic_error&) {
    bad(where, v);
  }
}

long long to_int(const std::string& where, const std::string& v) {
  // Accept 1e3-style integers.
  const double x = to_double(where, v);
  if (x != std::floor(x) || std::abs(x) > 9.0e15) bad(where, v);
  return static_cast<long long>(x);
}

std::uint64_t to_u64(const std::string& where, const std::string& v) {
  try {
    std::size_t pos = 0;
    const auto x = std::stoull(v, &pos, 0);
    if (pos != v.size()) bad(where, v);
    return x;
  } catch (const std::logic_error&) {
    bad(where, v);
  }
}

bool to_bool(const std::string& where, const std::string& v) {
  std::string s = v;
  std::transform(s.begin(), s.end(), s.begin(), ::tolower);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  bad(where, v);
}

template <class F>
auto to_list(const std::string& where, const std::string& v, F conv) {
  std::vector<decltype(conv(where, std::string()))> out;
  for (const auto& t : split(v)) out.push_back(conv(where, t));
  if (out.empty()) throw ConfigError(where + ": empty list");
  return out;
}

NoiseEntry parse_noise_entry(const std::string& v) {
  const auto toks = split(v);
  if (toks.empty()) throw ConfigError("noise.field: missing field name");
  NoiseEntry e;
  e.name = toks[0];
  for (std::size_t i = 1; i < toks.size(); ++i) {
    if (toks[i].rfind("amp=", 0) == 0)
      e.amplitude = to_double("noise.field amp", toks[i].substr(4));
    else
      e.params.push_back(to_double("noise.field", toks[i]));
  }
  return e;
}

// shortest text that parses back to the same double
std::string fmt(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ' ';
    if constexpr (std::is_floating_point_v<T>)
      os << fmt(v[i]);
    else
      os << v[i];
  }
  return os.str();
}

void set_init(Config& cfg, const std::string& key, const std::string& value) {
  const std::string where = "init." + key;
  auto& init = cfg.sim.init;
  auto resize = [&](std::size_t n) {
    if (n > init.size()) init.resize(n, init.empty() ? DensitySpec{} : init.back());
  };
  if (key == "shape") {
    const auto toks = split(value);
    if (toks.empty()) throw ConfigError(where + ": empty list");
    resize(toks.size());
    for (std::size_t i = 0; i < init.size(); ++i)
      init[i].shape = parse_density_shape(toks[std::min(i, toks.size() - 1)]);
  } else if (key == "R" || key == "Gamma" || key == "gamma") {
    const auto vals = to_list(where, value, to_double);
    resize(vals.size());
    for (std::size_t i = 0; i < init.size(); ++i) {
      const double v = vals[std::min(i, vals.size() - 1)];
      if (key == "R")
        init[i].R = v;
      else
        init[i].gamma = v;
    }
  } else {
    throw ConfigError("unknown key '" + where + "'");
  }
}

}  // namespace

Coupling parse_coupling(const std::string& name) {
  if (name == "shared" || name == "shared-path") return Coupling::kShared;
  if (name == "independent") return Coupling::kIndependent;
  throw ConfigError("unknown coupling '" + name + "'");
}

std::string to_string(Coupling c) {
  return c == Coupling::kShared ? "shared" : "independent";
}

void set_value(Config& cfg, const std::string& section, const std::string& key,
               const std::string& value) {
  const std::string where = section + "." + key;
  auto unknown = [&] { throw ConfigError("unknown key '" + where + "'"); };
  if (section == "sim") {
    auto& s = cfg.sim;
    if (key == "d") s.d = static_cast<int>(to_int(where, value));
    else if (key == "N") s.N = to_int(where, value);
    else if (key == "M") s.M = static_cast<int>(to_int(where, value));
    else if (key == "lambda") s.lambda = to_double(where, value);
    else if (key == "r") s.r = to_list(where, value, to_double);
    else if (key == "dt") s.dt = to_double(where, value);
    else if (key == "T") s.T = to_double(where, value);
    else if (key == "L") s.L = to_double(where, value);
    else if (key == "seed") s.seed = to_u64(where, value);
    else if (key == "jump_mode") s.jump_mode = parse_jump_mode(value);
    else if (key == "coagulation") s.coagulation = to_bool(where, value);
    else if (key == "workers") s.workers = static_cast<int>(to_int(where, value));
    else unknown();
  } else if (section == "init") {
    set_init(cfg, key, value);
  } else if (section == "noise") {
    if (key == "field") cfg.noise.push_back(parse_noise_entry(value));
    else if (key == "clear" && to_bool(where, value)) cfg.noise.clear();
    else unknown();
  } else if (section == "kernel") {
    auto& k = cfg.kernel;
    if (key == "shape") k.shape = parse_kernel_shape(value);
    else if (key == "C0") k.C0 = to_double(where, value);
    else if (key == "iota") k.iota = to_double(where, value);
    else if (key == "schedule" || key == "schedule_mode") k.schedule.mode = parse_schedule_mode(value);
    else if (key == "c") k.schedule.c = to_double(where, value);
    else unknown();
  } else if (section == "grid") {
    auto& g = cfg.grid;
    if (key == "n_cells") g.n_cells = static_cast<int>(to_int(where, value));
    else if (key == "dt") g.dt = to_double(where, value);
    else if (key == "scheme") g.scheme = parse_spde_scheme(value);
    else if (key == "transport") g.transport = parse_transport_scheme(value);
    else if (key == "milstein") g.milstein = to_bool(where, value);
    else if (key == "clamp") g.clamp = to_bool(where, value);
    else unknown();
  } else if (section == "study") {
    auto& s = cfg.study;
    if (key == "ladder") s.ladder = to_list(where, value, to_int);
    else if (key == "seeds") s.seeds = to_list(where, value, to_u64);
    else if (key == "coupling") s.coupling = parse_coupling(value);
    else if (key == "observe_every") s.observe_every = to_int(where, value);
    else if (key == "kmax") s.kmax = static_cast<int>(to_int(where, value));
    else unknown();
  } else if (section == "oracle") {
    auto& o = cfg.oracle;
    if (key == "M") o.M = static_cast<int>(to_int(where, value));
    else if (key == "T") o.T = to_double(where, value);
    else if (key == "dt") o.dt = to_double(where, value);
    else if (key == "record_every") o.record_every = to_int(where, value);
    else unknown();
  } else if (section == "aux") {
    auto& a = cfg.aux;
    if (key == "eps_levels") a.eps_levels = to_list(where, value, to_double);
    else if (key == "z_values") a.z_values = to_list(where, value, to_double);
    else if (key == "T") a.T = to_double(where, value);
    else if (key == "box") a.box = to_double(where, value);
    else if (key == "window") a.window = to_double(where, value);
    else if (key == "z_epsilon") a.z_epsilon = to_double(where, value);
    else unknown();
  } else if (section == "output") {
    auto& o = cfg.output;
    if (key == "dir") o.dir = value;
    else if (key == "particle_dumps") o.particle_dumps = to_bool(where, value);
    else if (key == "field_dumps") o.field_dumps = to_bool(where, value);
    else unknown();
  } else {
    throw ConfigError("unknown section '" + section + "'");
  }
}

Config parse_config(const std::string& text) {
  Config cfg;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": key outside a section");
    try {
      set_value(cfg, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_override(Config& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("override must look like section.key=value: '" + assignment + "'");
  set_value(cfg, trim(assignment.substr(0, dot)),
            trim(assignment.substr(dot + 1, eq - dot - 1)),
            trim(assignment.substr(eq + 1)));
}

NoiseFieldSet Config::build_noise() const {
  NoiseFieldSet set(sim.d);
  for (const auto& e : noise)
    set.append(builtin_catalog(e.name, e.params, e.amplitude, sim.d));
  return set;
}

KernelSpec Config::kernel_for(long long N) const {
  return KernelSpec(sim.d, kernel.schedule.epsilon_for(N, sim.d), kernel.C0,
                    kernel.iota, kernel.shape);
}

GridGeometry Config::grid_geometry() const {
  return GridGeometry{sim.d, sim.L, grid.n_cells};
}

SpdeOptions Config::spde_options() const {
  SpdeOptions o;
  o.lambda = sim.lambda;
  o.reaction = sim.coagulation;
  o.transport = grid.transport;
  o.milstein = grid.milstein;
  o.clamp = grid.clamp;
  return o;
}

AuxProblem Config::aux_problem() const {
  AuxProblem p;
  p.lambda = sim.lambda;
  p.T = aux.T;
  p.box = aux.box;
  p.window = aux.window;
  p.shape = kernel.shape;
  p.C0 = kernel.C0;
  p.iota = kernel.iota;
  p.epsilon = aux.eps_levels.empty() ? aux.z_epsilon : aux.eps_levels.front();
  if (sim.d == 1) p.noise = build_noise();
  return p;
}

void Config::validate() const {
  sim.validate();
  const NoiseFieldSet noise_set = build_noise();
  if (!noise_set.bounded())
    throw ConfigError("noise: unbounded fields are not allowed in runs");
  if (!noise_set.empty() && !noise_set.periodic_on(sim.L))
    throw ConfigError("noise: fields are not periodic on the box of side L");
  sim.validate_box(noise_set);
  if (study.ladder.empty()) throw ConfigError("study.ladder is empty");
  if (study.seeds.empty()) throw ConfigError("study.seeds is empty");
  for (long long N : study.ladder) {
    if (N < 1) throw ConfigError("study.ladder entries must be >= 1");
    const KernelSpec k = kernel_for(N);
    if (!(k.range() < 0.5 * sim.L))
      throw ConfigError("kernel range C0*eps >= L/2 at N = " + std::to_string(N));
  }
  (void)kernel_for(sim.N);
  const GridGeometry g = grid_geometry();
  g.validate();
  const double sdt = spde_dt();
  const double ratio = sdt / sim.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0)
    throw ConfigError("grid.dt must be a positive integer multiple of sim.dt");
  SpdeSolver solver(g, noise_set, spde_options());
  solver.check_stability(sdt);
  if (oracle.M < 1 || !(oracle.T > 0.0) || !(oracle.dt > 0.0))
    throw ConfigError("oracle: need M >= 1, T > 0, dt > 0");
}

std::string Config::to_text() const {
  std::ostringstream os;
  os << "[sim]\n"
     << "d = " << sim.d << "\nN = " << sim.N << "\nM = " << sim.M
     << "\nlambda = " << fmt(sim.lambda) << "\nr = " << join(sim.r)
     << "\ndt = " << fmt(sim.dt) << "\nT = " << fmt(sim.T)
     << "\nL = " << fmt(sim.L) << "\nseed = " << sim.seed
     << "\njump_mode = " << to_string(sim.jump_mode)
     << "\ncoagulation = " << (sim.coagulation ? "true" : "false")
     << "\nworkers = " << sim.workers << "\n\n[init]\nshape =";
  for (const auto& p : sim.init) os << ' ' << to_string(p.shape);
  os << "\nR =";
  for (const auto& p : sim.init) os << ' ' << fmt(p.R);
  os << "\nGamma =";
  for (const auto& p : sim.init) os << ' ' << fmt(p.gamma);
  os << "\n\n[noise]\n";
  for (const auto& e : noise) {
    os << "field = " << e.name;
    for (double p : e.params) os << ' ' << fmt(p);
    os << " amp=" << fmt(e.amplitude) << "\n";
  }
  os << "\n[kernel]\nshape = " << to_string(kernel.shape)
     << "\nC0 = " << fmt(kernel.C0) << "\niota = " << fmt(kernel.iota)
     << "\nschedule = " << to_string(kernel.schedule.mode)
     << "\nc = " << fmt(kernel.schedule.c) << "\n\n[grid]\nn_cells = "
     << grid.n_cells << "\ndt = " << fmt(grid.dt)
     << "\nscheme = " << to_string(grid.scheme)
     << "\ntransport = " << to_string(grid.transport)
     << "\nmilstein = " << (grid.milstein ? "true" : "false")
     << "\nclamp = " << (grid.clamp ? "true" : "false")
     << "\n\n[study]\nladder = " << join(study.ladder)
     << "\nseeds = " << join(study.seeds)
     << "\ncoupling = " << to_string(study.coupling)
     << "\nobserve_every = " << study.observe_every
     << "\nkmax = " << study.kmax << "\n\n[oracle]\nM = " << oracle.M
     << "\nT = " << fmt(oracle.T) << "\ndt = " << fmt(oracle.dt)
     << "\nrecord_every = " << oracle.record_every
     << "\n\n[aux]\neps_levels = " << join(aux.eps_levels)
     << "\nz_values = " << join(aux.z_values) << "\nT = " << fmt(aux.T)
     << "\nbox = " << fmt(aux.box) << "\nwindow = " << fmt(aux.window)
     << "\nz_epsilon = " << fmt(aux.z_epsilon)
     << "\n\n[output]\ndir = " << output.dir
     << "\nparticle_dumps = " << (output.particle_dumps ? "true" : "false")
     << "\nfield_dumps = " << (output.field_dumps ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace smolu
