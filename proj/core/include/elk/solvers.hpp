#pragma once

#include <span>
#include <string>
#include <vector>

#include "elk/chemistry.hpp"
#include "elk/state.hpp"
#include "elk/thermo.hpp"

namespace elk {

enum class ModelKind { General, PNP, DPNP };
enum class FluxScheme { ExponentialFitted, Central };

struct NumericsConfig {
    double dt = 1e-3;
    double end_time = 0.0;
    double gummel_tol = 1e-10;       // max-norm potential change between sweeps
    int gummel_max_iter = 50;
    int reaction_substeps = 1;       // initial RK4 substep count (doubles adaptively)
    double steady_tol = 1e-10;       // max-norm state change per unit time
    int max_steps = 100000;
    FluxScheme scheme = FluxScheme::ExponentialFitted;
    int max_dt_halvings = 12;        // rejection floor: dt / 2^12, then hard failure
};

struct VelocityClosure {
    enum class Kind { Rest, Prescribed, Darcy };
    Kind kind = Kind::Rest;
    std::vector<double> prescribed;  // cell-centered profile for Kind::Prescribed
};

// Everything fixed over a run: the discrete problem definition.
struct Problem {
    Grid1D grid;
    std::vector<Species> species;          // solvent last
    ReactionNetwork network;               // may be empty
    std::vector<double> betas;             // from solve_betas
    MaterialParams material;
    PhysicalConstants constants;
    ModelKind model = ModelKind::PNP;
    FieldBC phi_bc;
    std::vector<FieldBC> species_bcs;      // one per species; solvent entry unused
    VelocityClosure velocity;
    std::vector<double> eps_r;             // per-cell relative permittivity
    NumericsConfig numerics;

    int n_species() const { return static_cast<int>(species.size()); }
    double porosity() const { return model == ModelKind::DPNP ? material.porosity : 1.0; }
};

// --- Poisson ---

struct PoissonResult {
    std::vector<double> phi;
    double residual = 0.0;  // relative max-norm residual of the assembled system
};

// Solve -d/dx(eps_r dphi/dx) = porosity * rho_E / eps0 on the cell-centered
// grid. Dirichlet ends enter through half-cell faces; a problem with no
// Dirichlet anchor (insulating or periodic ends) requires a net-neutral
// source and is gauged to zero mean. Incompatible charge -> SolverError.
PoissonResult solve_poisson(const Grid1D& grid, std::span<const double> rho_E, std::span<const double> eps_r,
                            const FieldBC& bc, const PhysicalConstants& c, double porosity = 1.0);

// --- building blocks of a time step ---

// One backward-Euler transport step for every solute with the potential
// frozen: exponential-fitted (or central) face fluxes, one tridiagonal solve
// per species. `base` supplies the start-of-step fractions; `out` must carry
// the step's density/temperature/velocity fields and receives the new
// fractions (solvent closed by y_L = 1 - sum). Throws SolverError when
// positivity is lost beyond rounding.
void transport_step(const Problem& prob, const MixtureState& base, MixtureState& out,
                    std::span<const double> phi, double dt);

// Explicit RK4 mass-action substeps on each cell's fractions. Starts from
// numerics.reaction_substeps and doubles (restarting the interval) whenever a
// substep moves any fraction by more than 0.1, up to 16 doublings.
void reaction_substep(const Problem& prob, MixtureState& s, double dt);

// Darcy closure v = permeability/viscosity * (-dp/dx + rho_E E), optionally
// projected onto its domain mean (exact 1-D incompressibility).
std::vector<double> darcy_velocity(const Grid1D& grid, std::span<const double> p, std::span<const double> rho_E,
                                   std::span<const double> E, double permeability, double viscosity,
                                   bool project_to_mean = true);

// --- full step ---

struct AdvanceReport {
    int gummel_iterations = 0;  // max over sub-steps
    int dt_halvings = 0;        // rejection depth actually used
    double poisson_residual = 0.0;
};

// One Strang-split step of size dt: half reaction, velocity closure +
// density advection, Gummel fixed-point (Poisson <-> transport), half
// reaction. Rejected steps retry with dt/2 down to the halving floor, then
// raise SolverError.
AdvanceReport advance(const Problem& prob, MixtureState& s, double dt);

struct SteadyReport {
    bool converged = false;
    int steps = 0;
    double residual = 0.0;
    std::vector<double> history;  // residual after each step
};

// March `advance` until ||state_{n+1} - state_n||_inf / dt <= steady_tol or
// max_steps is exhausted (reported, not thrown).
SteadyReport steady_state(const Problem& prob, MixtureState& s);

// Model-tag assumption checks (isothermal, incompressible, neutral
// nonreactive solvent, diluteness) for the reduced models; returns
// human-readable warnings, empty when all assumptions hold or the model is
// General.
std::vector<std::string> model_assumption_warnings(const Problem& prob, const MixtureState& s);

// Exponential-fitting weight B(x) = x / (e^x - 1), the two-point flux factor
// that is exact for equilibrium (Boltzmann) profiles.
double bernoulli_weight(double x);

} // namespace elk
