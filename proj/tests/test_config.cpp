#include <doctest.h>

#include <string>

#include "neasslab/config.hpp"
#include "neasslab/report.hpp"

using namespace neasslab;

namespace {

const char* kFullDoc = R"({
  "lattice": {"length": 6, "geometry": "torus"},
  "model": {
    "kind": "ssh_chain",
    "hopping": 0.6,
    "hopping_alt": 1.4,
    "stagger": 0.0,
    "mu": 0.1,
    "density_coupling": 0.05,
    "density_range": 2,
    "ramp": {"target": "hopping_alt", "amplitude": 0.25, "t_on": 0.0, "t_off": 0.4}
  },
  "perturbation": {
    "hopping": 0.02,
    "potential": "cosine",
    "potential_amplitude": 0.2,
    "ramped": true,
    "t_on": 0.0,
    "t_off": 0.4
  },
  "weight": {"gap": 0.8, "n_terms": 12, "grid_points": 1024, "kernel_grid": 256},
  "sector": "full",
  "seed": 99,
  "experiment": {
    "kind": "adiabatic-sweep",
    "orders": [1, 2],
    "epsilons": [0.2, 0.1],
    "theta": 1.0,
    "t0": 0.0,
    "t1": 0.4,
    "steps_per_unit": 150,
    "fd_step": 1e-4,
    "slope_margin": 0.5,
    "stationarity_tol": 1e-10
  }
})";

}  // namespace

TEST_CASE("full document parses into the run configuration") {
  RunConfig rc = parse_config(kFullDoc);
  const ScenarioConfig& sc = rc.scenario;
  CHECK(sc.length == 6);
  CHECK(sc.geometry == Geometry::torus);
  CHECK(sc.kind == "ssh_chain");
  CHECK(sc.hopping == 0.6);
  CHECK(sc.hopping_alt == 1.4);
  CHECK(sc.mu == 0.1);
  CHECK(sc.density_coupling == 0.05);
  CHECK(sc.density_range == 2);
  CHECK(sc.ramp_target == "hopping_alt");
  CHECK(sc.ramp_amplitude == 0.25);
  CHECK(sc.ramp_off == 0.4);
  CHECK(sc.pert_hopping == 0.02);
  CHECK(sc.pert_potential == "cosine");
  CHECK(sc.pert_potential_amplitude == 0.2);
  CHECK(sc.pert_ramped);
  CHECK(sc.gap == 0.8);
  CHECK(sc.weight.n_terms == 12);
  CHECK(sc.weight.grid_points == 1024);
  CHECK(sc.sector == "full");
  CHECK(sc.seed == 99);

  CHECK(rc.experiment_kind == "adiabatic-sweep");
  CHECK(rc.adiabatic.orders == std::vector<int>{1, 2});
  CHECK(rc.adiabatic.epsilons == std::vector<double>{0.2, 0.1});
  CHECK(rc.adiabatic.t1 == 0.4);
  CHECK(rc.adiabatic.steps_per_unit == 150);
}

TEST_CASE("defaults survive an empty document") {
  RunConfig rc = parse_config("{}");
  CHECK(rc.scenario.length == 8);
  CHECK(rc.scenario.geometry == Geometry::open_box);
  CHECK(rc.scenario.kind == "staggered_chain");
  CHECK(rc.scenario.sector == "half_filling");
  CHECK(rc.scenario.seed == 1);
  CHECK(rc.experiment_kind.empty());
}

TEST_CASE("unknown keys are rejected by name") {
  try {
    parse_config(R"({"lattice": {"length": 6, "bogus_key": 3}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_config(R"({"mystery": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"experiment": {"kind": "quantum-volume"}})"),
                  ConfigError);
}

TEST_CASE("malformed values are configuration errors") {
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"lattice": {"length": "six"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"lattice": {"geometry": "moebius"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"lattice": 3})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"([1, 2, 3])"), ConfigError);
}

TEST_CASE("canonical form is key-order independent") {
  RunConfig a = parse_config(R"({"lattice": {"length": 6, "geometry": "open"}, "seed": 4})");
  RunConfig b = parse_config(R"({"seed": 4, "lattice": {"geometry": "open", "length": 6}})");
  CHECK(a.canonical == b.canonical);
  CHECK(fnv1a(a.canonical) == fnv1a(b.canonical));

  RunConfig c = parse_config(R"({"seed": 5, "lattice": {"geometry": "open", "length": 6}})");
  CHECK(a.canonical != c.canonical);
}

TEST_CASE("load_config reports missing files") {
  CHECK_THROWS_AS(load_config("/nonexistent/path/run.json"), ConfigError);
}
