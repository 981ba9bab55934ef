#pragma once

#include <span>
#include <vector>

#include "elk/chemistry.hpp"
#include "elk/smallvec.hpp"

namespace elk {

// Fundamental constants (2018 CODATA). Scenario files may override any of
// them, e.g. to run in nondimensional units; everything downstream reads the
// values from here rather than hard-coding them.
struct PhysicalConstants {
    double elementary_charge = 1.602176634e-19;   // e  [C]
    double boltzmann = 1.380649e-23;              // kB [J/K]
    double vacuum_permittivity = 8.8541878128e-12;  // eps0 [C^2/(J m)]
    double speed_of_light = 299792458.0;          // c0 [m/s]

    double vacuum_permeability() const {  // mu0 = 1/(eps0 c0^2)
        return 1.0 / (vacuum_permittivity * speed_of_light * speed_of_light);
    }
};

// Bulk material/transport parameters shared by all species.
struct MaterialParams {
    double shear_viscosity = 0.0;      // eta   [Pa s]
    double bulk_viscosity = 0.0;       // eta_v [Pa s]
    double thermal_conductivity = 0.0; // kappa in q = -kappa grad T  [W/(m K)]
    double relative_permittivity = 1.0;
    double reference_temperature = 298.15;  // T_r for the pure-substance entropy scale
    double reference_mass = 1.0;            // m_a in the pure-substance ansatz [kg]
    // porous-medium / Darcy closure parameters
    double porosity = 1.0;             // theta in (0, 1]
    double permeability = 0.0;         // K_H [m^2]
    double darcy_viscosity = 1.0;      // dynamic viscosity for the Darcy law [Pa s]

    // Thermodynamic admissibility of the viscous pair in n dimensions:
    // 2 eta / n + eta_v >= 0 makes the viscous entropy production nonnegative.
    bool viscous_pair_admissible(int n) const {
        return 2.0 * shear_viscosity / n + bulk_viscosity >= 0.0;
    }
};

// --- mixing quantities (ideal-mixing ansatz with offsets beta_l) ---

// chi_mix_l = (kB T / m_l)(beta_l + ln y_l); y is clamped at the global floor.
double chemical_potential_mixing(double beta, double y, double T, double mass, const PhysicalConstants& c);

// chibar_mix_l = chi_mix_l + (e z_l / m_l) phi
double electrochemical_potential_mixing(double beta, double y, double T, double mass, int valency, double phi,
                                        const PhysicalConstants& c);

struct MixingEnergy {
    double total = 0.0;                  // u_mix, specific [J/kg]
    std::vector<double> contributions;   // per-species y_l u_mix_l
};

// y_l u_mix_l = (kB T / m_l)[ y_l (beta_l - 1 + ln y_l) + exp(-beta_l) ]
MixingEnergy mixing_internal_energy(std::span<const double> y, std::span<const double> betas,
                                    std::span<const Species> species, double T, const PhysicalConstants& c);

// s_mix = -u_mix / T, computed on its own path (no division of the energy)
// so the Gibbs relation -T s_mix = u_mix is an actual cross-check.
double mixing_entropy(std::span<const double> y, std::span<const double> betas, std::span<const Species> species,
                      const PhysicalConstants& c);

// --- pure-substance (solvent-scale) quantities ---

// s_pure(T) = (kB / m_a) ln(T / T_r)
double pure_specific_entropy(double T, const MaterialParams& mat, const PhysicalConstants& c);

// u_hat(s, nu; p) = (kB T_r / m_a) exp(m_a s / kB) + p nu
double pure_internal_energy(double s, double nu, double p, const MaterialParams& mat, const PhysicalConstants& c);

// chi_l = chi_pure + chi_mix_l, with the species-independent
// chi_pure = u_hat(s_pure(T), nu; p).
double chemical_potential_total(double beta, double y, double T, double nu, double p, double mass,
                                const MaterialParams& mat, const PhysicalConstants& c);

// chibar_l = chi_l + (e z_l / m_l) phi
double electrochemical_potential_total(double beta, double y, double T, double nu, double p, double mass,
                                       int valency, double phi, const MaterialParams& mat,
                                       const PhysicalConstants& c);

// --- mixture pressure closures ---

// Extended Dalton: p = sum_l p_l + (1/n) sum_l rho_l |v_l - v|^2.
double extended_dalton_pressure(std::span<const double> partial_pressures, std::span<const double> rho_l,
                                std::span<const VecN> v_l, const VecN& v);

// Extended Raoult: partial pressures replaced by p*_l y_l.
double extended_raoult_pressure(std::span<const double> pure_pressures, std::span<const double> y,
                                std::span<const double> rho_l, std::span<const VecN> v_l, const VecN& v);

} // namespace elk
