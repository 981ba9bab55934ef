// Microbenchmarks for the hot paths: the Poisson solve, one implicit
// transport step, a full Strang-split step, the entropy budget, and
// mass-action rate evaluation.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "elk/audit.hpp"
#include "elk/chemistry.hpp"
#include "elk/scenario.hpp"
#include "elk/solvers.hpp"
#include "elk/state.hpp"

namespace {

// Binary salt in a neutral solvent with one interconversion reaction, unit
// constants so every field is O(1).
const char* kScenario = R"json({
  "name": "bench",
  "model": "pnp",
  "domain": {"length": 1.0, "cells": 256},
  "constants": {"elementary_charge": 1.0, "boltzmann": 1.0, "vacuum_permittivity": 1.0, "speed_of_light": 299792458.0},
  "material": {"relative_permittivity": 1.0, "thermal_conductivity": 1.0, "reference_temperature": 1.0},
  "species": [
    {"name": "cation", "mass": 1.0, "valency": 1, "diffusivity": 1e-3,
     "initial_fraction": {"kind": "gaussian", "center": 0.4, "width": 0.1, "amplitude": 0.02, "baseline": 0.01}},
    {"name": "anion", "mass": 1.0, "valency": -1, "diffusivity": 1e-3,
     "initial_fraction": {"kind": "gaussian", "center": 0.6, "width": 0.1, "amplitude": 0.02, "baseline": 0.01}},
    {"name": "water", "mass": 1.0, "valency": 0, "diffusivity": 1e-3, "solvent": true}
  ],
  "initial": {"temperature": {"kind": "constant", "value": 1.0}},
  "potential_boundary": {"left": {"type": "dirichlet", "value": 0.25}, "right": {"type": "dirichlet", "value": -0.25}},
  "numerics": {"dt": 1e-3, "end_time": 0.0}
})json";

elk::Scenario scenario_with(int cells) {
    elk::Scenario sc = elk::parse_scenario_text(kScenario, "benchmark");
    sc.grid.n_cells = cells;
    return sc;
}

void bm_poisson(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const elk::Grid1D grid = elk::make_grid(n, 1.0);
    std::vector<double> rho_E(static_cast<size_t>(n)), eps_r(static_cast<size_t>(n), 1.0);
    for (int k = 0; k < n; ++k) rho_E[k] = std::sin(std::numbers::pi * grid.center(k));
    elk::FieldBC bc;
    bc.left = {elk::BCType::Dirichlet, 0.0};
    bc.right = {elk::BCType::Dirichlet, 0.0};
    elk::PhysicalConstants c;
    c.vacuum_permittivity = 1.0;
    for (auto _ : state) {
        elk::PoissonResult r = elk::solve_poisson(grid, rho_E, eps_r, bc, c);
        benchmark::DoNotOptimize(r.phi.data());
    }
    state.SetComplexityN(n);
}

void bm_transport_step(benchmark::State& state) {
    const elk::Scenario sc = scenario_with(static_cast<int>(state.range(0)));
    const elk::Problem prob = sc.build_problem();
    const elk::MixtureState base = sc.build_initial_state();
    for (auto _ : state) {
        elk::MixtureState out = base;
        elk::transport_step(prob, base, out, base.phi, prob.numerics.dt);
        benchmark::DoNotOptimize(out.y.data());
    }
    state.SetComplexityN(state.range(0));
}

void bm_advance(benchmark::State& state) {
    const elk::Scenario sc = scenario_with(static_cast<int>(state.range(0)));
    const elk::Problem prob = sc.build_problem();
    const elk::MixtureState init = sc.build_initial_state();
    for (auto _ : state) {
        elk::MixtureState s = init;
        elk::AdvanceReport rep = elk::advance(prob, s, prob.numerics.dt);
        benchmark::DoNotOptimize(rep.gummel_iterations);
    }
    state.SetComplexityN(state.range(0));
}

void bm_entropy_budget(benchmark::State& state) {
    const elk::Scenario sc = scenario_with(static_cast<int>(state.range(0)));
    const elk::Problem prob = sc.build_problem();
    elk::MixtureState s = sc.build_initial_state();
    elk::advance(prob, s, prob.numerics.dt);  // a dynamically consistent state
    for (auto _ : state) {
        elk::EntropyBudget b = elk::entropy_production(prob, s);
        benchmark::DoNotOptimize(b.integral_total_ec);
    }
    state.SetComplexityN(state.range(0));
}

void bm_reaction_rates(benchmark::State& state) {
    elk::ReactionNetwork net;
    net.n_species = 3;
    net.n_reactions = 1;
    net.stoich = {-1, 1, 0};
    net.k_forward = {2.0};
    net.k_backward = {1.0};
    const std::vector<double> y = {0.3, 0.2, 0.5};
    for (auto _ : state) {
        std::vector<double> r = elk::reaction_rates(net, y);
        benchmark::DoNotOptimize(r.data());
    }
}

} // namespace

BENCHMARK(bm_poisson)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(bm_transport_step)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(bm_advance)->Arg(256)->Arg(1024);
BENCHMARK(bm_entropy_budget)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(bm_reaction_rates);

BENCHMARK_MAIN();
