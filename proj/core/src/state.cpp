#include "elk/state.hpp"

#include <cmath>

#include "elk/errors.hpp"

namespace elk {

Grid1D make_grid(int n_cells, double length) {
    if (n_cells < 4) throw ConfigError("grid needs at least 4 cells, got " + std::to_string(n_cells));
    if (!(length > 0.0)) throw ConfigError("grid length must be positive");
    return Grid1D{n_cells, length};
}

void validate_bc(const FieldBC& bc, const std::string& field_name) {
    const bool lp = bc.left.type == BCType::Periodic;
    const bool rp = bc.right.type == BCType::Periodic;
    if (lp != rp)
        throw ConfigError("boundary for '" + field_name + "': periodic ends must be paired");
    for (const BoundaryCondition* side : {&bc.left, &bc.right}) {
        if (side->type == BCType::Dirichlet && !std::isfinite(side->value))
            throw ConfigError("boundary for '" + field_name + "': Dirichlet value must be finite");
    }
}

MixtureState make_state(const Grid1D& grid, int n_species) {
    if (n_species < 1) throw ConfigError("state needs at least one species");
    MixtureState s;
    s.grid = grid;
    s.n_species = n_species;
    const size_t n = static_cast<size_t>(grid.n_cells);
    s.rho.assign(n, 1.0);
    s.y.assign(n * static_cast<size_t>(n_species), 0.0);
    s.phi.assign(n, 0.0);
    s.v.assign(n, 0.0);
    s.T.assign(n, 1.0);
    s.p.assign(n, 0.0);
    return s;
}

void validate_state(const MixtureState& s) {
    const int N = s.grid.n_cells;
    const int L = s.n_species;
    auto fail = [](int k, const std::string& what) {
        throw StateError("state invalid at cell " + std::to_string(k) + ": " + what);
    };
    for (int k = 0; k < N; ++k) {
        if (!std::isfinite(s.rho[static_cast<size_t>(k)]) || s.rho[static_cast<size_t>(k)] <= 0.0)
            fail(k, "total density must be finite and positive");
        if (!std::isfinite(s.T[static_cast<size_t>(k)]) || s.T[static_cast<size_t>(k)] <= 0.0)
            fail(k, "temperature must be finite and positive");
        for (const auto* f : {&s.phi, &s.v, &s.p})
            if (!std::isfinite((*f)[static_cast<size_t>(k)])) fail(k, "non-finite field value");
        double sum = 0.0;
        for (int l = 0; l < L; ++l) {
            const double yl = s.y_at(k, l);
            if (!std::isfinite(yl) || yl < 0.0 || yl > 1.0 + 1e-12) fail(k, "fraction out of [0,1]");
            sum += yl;
        }
        if (std::abs(sum - 1.0) > 1e-12) fail(k, "fractions sum to " + std::to_string(sum));
    }
}

DerivedFields derived_fields(const MixtureState& s, std::span<const Species> species, const PhysicalConstants& c) {
    if (static_cast<int>(species.size()) != s.n_species)
        throw StateError("derived fields: species list does not match state");
    const int N = s.grid.n_cells;
    const int L = s.n_species;
    DerivedFields d;
    d.rho_l.resize(static_cast<size_t>(N) * static_cast<size_t>(L));
    d.n_l.resize(d.rho_l.size());
    d.rho_E.resize(static_cast<size_t>(N));
    d.nu.resize(static_cast<size_t>(N));
    for (int k = 0; k < N; ++k) {
        double q = 0.0;
        for (int l = 0; l < L; ++l) {
            const double rl = s.rho[static_cast<size_t>(k)] * s.y_at(k, l);
            d.rho_l[static_cast<size_t>(k * L + l)] = rl;
            d.n_l[static_cast<size_t>(k * L + l)] = rl / species[static_cast<size_t>(l)].mass;
            q += c.elementary_charge * species[static_cast<size_t>(l)].valency /
                 species[static_cast<size_t>(l)].mass * rl;
        }
        d.rho_E[static_cast<size_t>(k)] = q;
        d.nu[static_cast<size_t>(k)] = 1.0 / s.rho[static_cast<size_t>(k)];
    }
    return d;
}

double renormalize_fractions(std::span<double> y) {
    double sum = 0.0;
    for (double v : y) {
        if (v < -1e-6)
            throw StateError("renormalize: fraction " + std::to_string(v) + " below the -1e-6 failure threshold");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6)
        throw StateError("renormalize: fraction sum " + std::to_string(sum) + " deviates by more than 1e-6");

    double clamped_sum = 0.0;
    for (double& v : y) {
        if (v < fraction_floor) v = fraction_floor;
        clamped_sum += v;
    }
    double max_adjust = 0.0;
    for (double& v : y) {
        const double before = v;
        v /= clamped_sum;
        max_adjust = std::max(max_adjust, std::abs(v - before));
    }
    return max_adjust;
}

} // namespace elk
