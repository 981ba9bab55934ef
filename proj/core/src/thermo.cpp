#include "elk/thermo.hpp"

#include <cmath>

#include "elk/errors.hpp"

namespace elk {

double chemical_potential_mixing(double beta, double y, double T, double mass, const PhysicalConstants& c) {
    return c.boltzmann * T / mass * (beta + std::log(clamp_fraction(y)));
}

double electrochemical_potential_mixing(double beta, double y, double T, double mass, int valency, double phi,
                                        const PhysicalConstants& c) {
    return chemical_potential_mixing(beta, y, T, mass, c) + c.elementary_charge * valency / mass * phi;
}

MixingEnergy mixing_internal_energy(std::span<const double> y, std::span<const double> betas,
                                    std::span<const Species> species, double T, const PhysicalConstants& c) {
    if (y.size() != species.size() || betas.size() != species.size())
        throw StateError("mixing internal energy: species/fraction/beta lengths differ");
    MixingEnergy e;
    e.contributions.resize(y.size());
    for (size_t l = 0; l < y.size(); ++l) {
        const double yl = clamp_fraction(y[l]);
        const double b = betas[l];
        const double term =
            c.boltzmann * T / species[l].mass * (yl * (b - 1.0 + std::log(yl)) + std::exp(-b));
        e.contributions[l] = term;
        e.total += term;
    }
    return e;
}

double mixing_entropy(std::span<const double> y, std::span<const double> betas, std::span<const Species> species,
                      const PhysicalConstants& c) {
    if (y.size() != species.size() || betas.size() != species.size())
        throw StateError("mixing entropy: species/fraction/beta lengths differ");
    // Temperature drops out of -u_mix/T analytically; evaluating it that way
    // keeps this an independent code path from mixing_internal_energy.
    double s = 0.0;
    for (size_t l = 0; l < y.size(); ++l) {
        const double yl = clamp_fraction(y[l]);
        const double b = betas[l];
        s -= c.boltzmann / species[l].mass * (yl * (b - 1.0 + std::log(yl)) + std::exp(-b));
    }
    return s;
}

double pure_specific_entropy(double T, const MaterialParams& mat, const PhysicalConstants& c) {
    if (!(T > 0.0)) throw StateError("pure entropy: temperature must be positive");
    return c.boltzmann / mat.reference_mass * std::log(T / mat.reference_temperature);
}

double pure_internal_energy(double s, double nu, double p, const MaterialParams& mat, const PhysicalConstants& c) {
    const double u1 = c.boltzmann * mat.reference_temperature / mat.reference_mass *
                      std::exp(mat.reference_mass * s / c.boltzmann);
    return u1 + p * nu;
}

double chemical_potential_total(double beta, double y, double T, double nu, double p, double mass,
                                const MaterialParams& mat, const PhysicalConstants& c) {
    const double chi_pure = pure_internal_energy(pure_specific_entropy(T, mat, c), nu, p, mat, c);
    return chi_pure + chemical_potential_mixing(beta, y, T, mass, c);
}

double electrochemical_potential_total(double beta, double y, double T, double nu, double p, double mass,
                                       int valency, double phi, const MaterialParams& mat,
                                       const PhysicalConstants& c) {
    return chemical_potential_total(beta, y, T, nu, p, mass, mat, c) +
           c.elementary_charge * valency / mass * phi;
}

namespace {

double drift_kinetic_term(std::span<const double> rho_l, std::span<const VecN> v_l, const VecN& v) {
    double s = 0.0;
    for (size_t l = 0; l < rho_l.size(); ++l) s += rho_l[l] * norm2(v_l[l] - v);
    return s / v.n;
}

} // namespace

double extended_dalton_pressure(std::span<const double> partial_pressures, std::span<const double> rho_l,
                                std::span<const VecN> v_l, const VecN& v) {
    if (partial_pressures.size() != rho_l.size() || rho_l.size() != v_l.size())
        throw StateError("extended Dalton: input lengths differ");
    double p = 0.0;
    for (double pl : partial_pressures) p += pl;
    return p + drift_kinetic_term(rho_l, v_l, v);
}

double extended_raoult_pressure(std::span<const double> pure_pressures, std::span<const double> y,
                                std::span<const double> rho_l, std::span<const VecN> v_l, const VecN& v) {
    if (pure_pressures.size() != y.size() || y.size() != rho_l.size() || rho_l.size() != v_l.size())
        throw StateError("extended Raoult: input lengths differ");
    double p = 0.0;
    for (size_t l = 0; l < y.size(); ++l) p += pure_pressures[l] * y[l];
    return p + drift_kinetic_term(rho_l, v_l, v);
}

} // namespace elk
