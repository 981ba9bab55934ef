#pragma once

#include <optional>
#include <string>
#include <vector>

#include "elk/scaling.hpp"
#include "elk/solvers.hpp"
#include "elk/state.hpp"

namespace elk {

// Spatial profile for initial fields and prescribed velocities, evaluated at
// cell centers over [0, length].
struct ProfileSpec {
    enum class Kind { Constant, Gaussian, Linear, Sinusoidal, Tabulated };
    Kind kind = Kind::Constant;
    double value = 0.0;                              // constant
    double center = 0.0, width = 1.0;                // gaussian
    double amplitude = 0.0, baseline = 0.0;          // gaussian / sinusoidal
    double left = 0.0, right = 0.0;                  // linear
    double mean = 0.0, periods = 1.0, phase = 0.0;   // sinusoidal
    std::vector<double> xs, values;                  // tabulated (linear interpolation, clamped ends)

    double eval(double x, double length) const;

    static ProfileSpec constant(double v) {
        ProfileSpec p;
        p.kind = Kind::Constant;
        p.value = v;
        return p;
    }
};

struct SpeciesSpec {
    Species species;
    ProfileSpec initial_fraction;  // solutes only; the solvent closes the sum
    FieldBC boundary;              // solutes only
};

struct AuditConfig {
    bool enabled = true;
    bool per_cell = false;  // include per-cell budget arrays in the audit log
    bool strict = false;    // audit violations abort the run
    int every = 1;          // audit cadence in steps (the final state is always audited)
};

struct OutputConfig {
    std::string directory;   // empty: derived from the scenario name
    int snapshot_every = 0;  // 0: only the final snapshot
    bool final_snapshot = true;
};

// Declared analytic reference, checked after the fact by `report`.
// kind "debye": least-squares exponential fit of |phi| over the x-window;
// the fitted decay length is compared against decay_length when given.
struct OracleSpec {
    std::string kind;
    double window_lo = 0.0;
    double window_hi = 0.0;
    std::optional<double> decay_length;
};

// A fully validated simulation setup, loadable from a JSON file. The schema
// is strict: unknown keys are configuration errors, and all errors in a file
// are collected and reported together.
struct Scenario {
    std::string name;
    ModelKind model = ModelKind::PNP;
    Grid1D grid;
    bool periodic = false;
    PhysicalConstants constants;
    MaterialParams material;
    std::vector<SpeciesSpec> species;  // solvent last
    ReactionNetwork network;           // empty when no reactions block
    VelocityClosure::Kind velocity_kind = VelocityClosure::Kind::Rest;
    ProfileSpec velocity_profile;      // prescribed closure only
    ProfileSpec init_density = ProfileSpec::constant(1.0);
    ProfileSpec init_temperature;      // defaults to the material reference temperature
    ProfileSpec init_pressure = ProfileSpec::constant(0.0);
    ProfileSpec init_potential = ProfileSpec::constant(0.0);
    FieldBC potential_boundary;        // NoFlux/NoFlux default; Periodic when the domain wraps
    NumericsConfig numerics;
    bool steady_mode = false;
    std::optional<ScalingInput> scaling;
    std::optional<OracleSpec> oracle;
    AuditConfig audit;
    OutputConfig output;
    std::vector<std::string> warnings;  // collected at load time (e.g. inadmissible viscous pair)

    // Assemble the solver-facing problem: admissibility checks, mixing-scale
    // coefficients, per-cell permittivity, velocity profile evaluation.
    Problem build_problem() const;

    // Evaluate the initial profiles into a validated state.
    MixtureState build_initial_state() const;
};

// Parse and validate a scenario file (or raw JSON text). Every schema
// violation is collected; the ConfigError message lists one per line.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& json_text, const std::string& origin);

// Canonical JSON round-trip of a scenario (used for run metadata and tests).
std::string serialize_scenario(const Scenario& sc);

} // namespace elk
