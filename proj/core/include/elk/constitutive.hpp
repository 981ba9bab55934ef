#pragma once

#include <span>
#include <vector>

#include "elk/chemistry.hpp"
#include "elk/smallvec.hpp"
#include "elk/thermo.hpp"

namespace elk {

// Einstein relation M_l = D_l / (kB T).
double einstein_mobility(double diffusivity, double T, const PhysicalConstants& c);

// Pointwise sample of the primitive fields and their spatial derivatives at
// one location of the 1-D domain. Audits and flux closures are pure algebra
// on one of these, so how the gradients were obtained (analytic fields or
// centered differences) is the caller's choice.
struct LocalField {
    std::vector<double> y;     // mole-mass fractions, length L
    std::vector<double> dy;    // d y_l / dx
    double rho = 1.0, drho = 0.0;
    double phi = 0.0, dphi = 0.0;  // electric field E = -dphi
    double T = 1.0, dT = 0.0;
    double v = 0.0, dv = 0.0;
    double p = 0.0, dp = 0.0;

    double electric_field() const { return -dphi; }
};

// Interdiffusional mass fluxes (1-D components) plus the free current they
// carry. j[L-1] is the solvent flux, fixed by sum_l j_l = 0.
struct FluxSet {
    std::vector<double> j;
    double current = 0.0;
};

// Computational path: the expanded flux
//   j_l = -rho D_l dy_l + (m_l rho_l D_l / (m_L y_L)) dy_L
//         + (e rho_l D_l / (kB T)) (z_l - m_l z_L / m_L) E
//         - rho_l D_l (beta_l + ln y_l) dlnT + (m_l rho_l D_l / m_L)(beta_L + ln y_L) dlnT
// for l < L, with j_L = -sum of the rest.
FluxSet drift_mass_fluxes(const LocalField& f, std::span<const Species> species, std::span<const double> betas,
                          const PhysicalConstants& c);

// Identity-check path: the raw ansatz j_l = -m_l rho_l M_l d(chibar_mix_l -
// chibar_mix_L), assembled via chain rule on the same primitive gradients.
// Agrees with drift_mass_fluxes to rounding; kept separate on purpose.
FluxSet drift_mass_fluxes_raw(const LocalField& f, std::span<const Species> species, std::span<const double> betas,
                              const PhysicalConstants& c);

// rho_E = sum_l (e z_l / m_l) rho_l
double free_charge_density(std::span<const Species> species, std::span<const double> rho_l,
                           const PhysicalConstants& c);

// i = sum_l (e z_l / m_l) j_l  (1-D components)
double free_current(std::span<const Species> species, std::span<const double> j, const PhysicalConstants& c);

// Newtonian viscous stress tau = eta (grad v + grad v^T) + eta_v (div v) I.
MatN newtonian_viscous_stress(const MatN& grad_v, double eta, double eta_v);

// tau : grad v, evaluated in closed form:
// (eta/2)|grad v + grad v^T|^2 + eta_v (div v)^2.
double viscous_dissipation(const MatN& grad_v, double eta, double eta_v);

// The sharp lower bound (2 eta / n + eta_v)(div v)^2 of the dissipation.
double viscous_dissipation_bound(const MatN& grad_v, double eta, double eta_v);

// Extended Fourier law q = -kappa grad T - phi i + sum_l chibar_mix_l j_l,
// n-dimensional form with a (symmetric PSD) conductivity tensor.
VecN extended_fourier_heat_flux(const VecN& grad_T, const MatN& kappa, double phi, const VecN& current,
                                std::span<const double> chibar_mix, std::span<const VecN> j);

// 1-D convenience overload with scalar conductivity.
double extended_fourier_heat_flux(double dT, double kappa, double phi, double current,
                                  std::span<const double> chibar_mix, std::span<const double> j);

} // namespace elk
