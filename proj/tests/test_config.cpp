// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#include <string>

#include "doctest.h"
#include "smolu/config.hpp"

using namespace smolu;

namespace {

const char* kText = R"(
# comment
[sim]
d = 1
N = 2000
M = 3
lambda = 1
r = 0.5 0.3 0.2
dt = 1e-3
T = 0.5
L = 12
seed = 9
jump_mode = exact

[init]
shape = bump
R = 1

[noise]
field = constant 1 amp=0.5

[kernel]
schedule = local
c = 1

[grid]
n_cells = 128

[study]
ladder = 100 400
seeds = 1 2 3
)";

}  // namespace

TEST_CASE("parse and resolve") {
  Config c = parse_config(kText);
  CHECK(c.sim.N == 2000);
  CHECK(c.sim.r.size() == 3);
  CHECK(c.sim.jump_mode == JumpMode::kExactClock);
  CHECK(c.noise.size() == 1);
  CHECK(c.noise[0].amplitude == 0.5);
  CHECK(c.study.seeds.size() == 3);
  CHECK_NOTHROW(c.validate());
  CHECK(c.kernel_for(1000).epsilon() == doctest::Approx(1e-3));
  CHECK(c.build_noise().eval_field(0, {0.2})[0] == doctest::Approx(0.5));
}

TEST_CASE("resolved text round-trips") {
  Config c = parse_config(kText);
  apply_override(c, "grid.scheme=heun");
  const std::string t1 = c.to_text();
  const Config d = parse_config(t1);
  CHECK(d.to_text() == t1);
  CHECK(d.grid.scheme == SpdeScheme::kHeun);
}

TEST_CASE("overrides and errors") {
  Config c = parse_config(kText);
  apply_override(c, "sim.N=4e3");
  CHECK(c.sim.N == 4000);
  apply_override(c, "noise.field=constant 1 amp=0.1");
  CHECK(c.noise.size() == 2);
  CHECK_THROWS_AS(apply_override(c, "sim.bogus=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "nodot=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "sim.N=abc"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "sim.N=1.5"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sim]\nN 5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("N = 5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[mystery]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.conf"), ConfigError);
}

TEST_CASE("validation catches plan-level problems") {
  Config c = parse_config(kText);
  apply_override(c, "grid.n_cells=2048");
  try {
    c.validate();
    FAIL("expected a stability error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("0.25 h^2") != std::string::npos);
  }
  c = parse_config(kText);
  apply_override(c, "sim.L=4");
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = parse_config(kText);
  apply_override(c, "grid.dt=1.5e-3");
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = parse_config(kText);
  apply_override(c, "sim.r=0.5 0.5");
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
