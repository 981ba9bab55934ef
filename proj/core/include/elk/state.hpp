#pragma once

#include <span>
#include <string>
#include <vector>

#include "elk/chemistry.hpp"
#include "elk/thermo.hpp"

namespace elk {

// Uniform cell-centered 1-D grid: cell k owns [k dx, (k+1) dx], center at
// (k + 1/2) dx.
struct Grid1D {
    int n_cells = 0;
    double length = 0.0;

    double dx() const { return length / n_cells; }
    double center(int k) const { return (k + 0.5) * dx(); }
};

Grid1D make_grid(int n_cells, double length);  // validates n_cells >= 4, length > 0

enum class BCType { Dirichlet, NoFlux, Periodic };

struct BoundaryCondition {
    BCType type = BCType::NoFlux;
    double value = 0.0;  // Dirichlet trace, ignored otherwise
};

// Boundary pair for one field; Periodic is only valid on both ends at once.
struct FieldBC {
    BoundaryCondition left, right;

    bool periodic() const { return left.type == BCType::Periodic; }
};

void validate_bc(const FieldBC& bc, const std::string& field_name);  // throws ConfigError

// Complete cell-centered mixture state. Fractions are stored per cell,
// species-major within the cell: y[k * L + l].
struct MixtureState {
    Grid1D grid;
    int n_species = 0;
    double time = 0.0;
    std::vector<double> rho;  // total mass density
    std::vector<double> y;    // mass fractions, n_cells * n_species
    std::vector<double> phi;  // electric potential
    std::vector<double> v;    // barycentric velocity
    std::vector<double> T;    // temperature
    std::vector<double> p;    // pressure

    double& y_at(int k, int l) { return y[static_cast<size_t>(k * n_species + l)]; }
    double y_at(int k, int l) const { return y[static_cast<size_t>(k * n_species + l)]; }
    std::span<const double> fractions(int k) const {
        return {y.data() + static_cast<size_t>(k) * static_cast<size_t>(n_species),
                static_cast<size_t>(n_species)};
    }
};

MixtureState make_state(const Grid1D& grid, int n_species);

// Invariants: positive rho and T, y in [0,1] with unit row sums (1e-12),
// finite fields. Throws StateError naming the first offending cell.
void validate_state(const MixtureState& s);

// Per-cell derived quantities.
struct DerivedFields {
    std::vector<double> rho_l;   // partial densities, cell-major like y
    std::vector<double> n_l;     // number densities
    std::vector<double> rho_E;   // free charge per cell
    std::vector<double> nu;      // specific volume 1/rho
};

DerivedFields derived_fields(const MixtureState& s, std::span<const Species> species, const PhysicalConstants& c);

// Clamp one cell's fractions at the floor and rescale to unit sum.
// Pre: sum within 1e-6 of one and no entry below -1e-6 (else StateError).
// Returns the applied max absolute adjustment. Idempotent.
double renormalize_fractions(std::span<double> y);

} // namespace elk
