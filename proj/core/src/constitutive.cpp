#include "elk/constitutive.hpp"

#include <cmath>

#include "elk/errors.hpp"

namespace elk {

double einstein_mobility(double diffusivity, double T, const PhysicalConstants& c) {
    if (!(T > 0.0)) throw StateError("mobility: temperature must be positive");
    return diffusivity / (c.boltzmann * T);
}

namespace {

void check_flux_inputs(const LocalField& f, std::span<const Species> species, std::span<const double> betas) {
    if (f.y.size() != species.size() || f.dy.size() != species.size() || betas.size() != species.size())
        throw StateError("drift fluxes: species/fraction/beta lengths differ");
    if (species.size() < 2) throw StateError("drift fluxes: need at least one solute plus the solvent");
    if (!species.back().solvent) throw StateError("drift fluxes: solvent must be the last species");
    if (!(f.T > 0.0)) throw StateError("drift fluxes: temperature must be positive");
}

} // namespace

FluxSet drift_mass_fluxes(const LocalField& f, std::span<const Species> species, std::span<const double> betas,
                          const PhysicalConstants& c) {
    check_flux_inputs(f, species, betas);
    const size_t L = species.size();
    const Species& sol = species[L - 1];
    const double yL = clamp_fraction(f.y[L - 1]);
    const double dlnT = f.dT / f.T;
    const double E = f.electric_field();
    const double solvent_thermal = (betas[L - 1] + std::log(yL)) * dlnT;

    FluxSet out;
    out.j.assign(L, 0.0);
    double sum = 0.0;
    for (size_t l = 0; l + 1 < L; ++l) {
        const Species& sp = species[l];
        const double yl = clamp_fraction(f.y[l]);
        const double rho_l = f.rho * yl;
        const double D = sp.diffusivity;
        double jl = -f.rho * D * f.dy[l];
        jl += sp.mass * rho_l * D / (sol.mass * yL) * f.dy[L - 1];
        jl += c.elementary_charge * rho_l * D / (c.boltzmann * f.T) *
              (sp.valency - sp.mass * sol.valency / sol.mass) * E;
        jl -= rho_l * D * (betas[l] + std::log(yl)) * dlnT;
        jl += sp.mass * rho_l * D / sol.mass * solvent_thermal;
        out.j[l] = jl;
        sum += jl;
    }
    out.j[L - 1] = -sum;
    out.current = free_current(species, out.j, c);
    return out;
}

FluxSet drift_mass_fluxes_raw(const LocalField& f, std::span<const Species> species, std::span<const double> betas,
                              const PhysicalConstants& c) {
    check_flux_inputs(f, species, betas);
    const size_t L = species.size();

    // d chibar_mix_l by chain rule on the primitive gradients
    auto dchibar_mix = [&](size_t l) {
        const Species& sp = species[l];
        const double yl = clamp_fraction(f.y[l]);
        return c.boltzmann / sp.mass * (betas[l] + std::log(yl)) * f.dT +
               c.boltzmann * f.T / sp.mass * f.dy[l] / yl +
               c.elementary_charge * sp.valency / sp.mass * f.dphi;
    };

    FluxSet out;
    out.j.assign(L, 0.0);
    const double dchi_L = dchibar_mix(L - 1);
    double sum = 0.0;
    for (size_t l = 0; l + 1 < L; ++l) {
        const double rho_l = f.rho * clamp_fraction(f.y[l]);
        const double M = einstein_mobility(species[l].diffusivity, f.T, c);
        out.j[l] = -species[l].mass * rho_l * M * (dchibar_mix(l) - dchi_L);
        sum += out.j[l];
    }
    out.j[L - 1] = -sum;
    out.current = free_current(species, out.j, c);
    return out;
}

double free_charge_density(std::span<const Species> species, std::span<const double> rho_l,
                           const PhysicalConstants& c) {
    if (species.size() != rho_l.size()) throw StateError("free charge: input lengths differ");
    double q = 0.0;
    for (size_t l = 0; l < species.size(); ++l)
        q += c.elementary_charge * species[l].valency / species[l].mass * rho_l[l];
    return q;
}

double free_current(std::span<const Species> species, std::span<const double> j, const PhysicalConstants& c) {
    if (species.size() != j.size()) throw StateError("free current: input lengths differ");
    double i = 0.0;
    for (size_t l = 0; l < species.size(); ++l)
        i += c.elementary_charge * species[l].valency / species[l].mass * j[l];
    return i;
}

MatN newtonian_viscous_stress(const MatN& grad_v, double eta, double eta_v) {
    MatN tau = eta * (grad_v + transpose(grad_v));
    const double div_v = trace(grad_v);
    for (int i = 0; i < tau.n; ++i) tau(i, i) += eta_v * div_v;
    return tau;
}

double viscous_dissipation(const MatN& grad_v, double eta, double eta_v) {
    const MatN sym = grad_v + transpose(grad_v);
    const double div_v = trace(grad_v);
    return 0.5 * eta * ddot(sym, sym) + eta_v * div_v * div_v;
}

double viscous_dissipation_bound(const MatN& grad_v, double eta, double eta_v) {
    const double div_v = trace(grad_v);
    return (2.0 * eta / grad_v.n + eta_v) * div_v * div_v;
}

VecN extended_fourier_heat_flux(const VecN& grad_T, const MatN& kappa, double phi, const VecN& current,
                                std::span<const double> chibar_mix, std::span<const VecN> j) {
    if (chibar_mix.size() != j.size()) throw StateError("heat flux: potential/flux lengths differ");
    VecN q = -1.0 * matvec(kappa, grad_T) - phi * current;
    for (size_t l = 0; l < j.size(); ++l) q = q + chibar_mix[l] * j[l];
    return q;
}

double extended_fourier_heat_flux(double dT, double kappa, double phi, double current,
                                  std::span<const double> chibar_mix, std::span<const double> j) {
    if (chibar_mix.size() != j.size()) throw StateError("heat flux: potential/flux lengths differ");
    double q = -kappa * dT - phi * current;
    for (size_t l = 0; l < j.size(); ++l) q += chibar_mix[l] * j[l];
    return q;
}

} // namespace elk
