#pragma once

#include <span>
#include <vector>

#include "elk/thermo.hpp"

namespace elk {

// Closed-form reference solutions used to judge the solvers. These share no
// code with the solver paths: each is evaluated straight from its formula.

// Free-space heat kernel started from a Gaussian of mass `mass`, center x0
// and initial standard deviation sigma0: variance grows to sigma0^2 + 2 D t.
double heat_kernel(double x, double t, double x0, double sigma0, double diffusivity, double mass);

// Equilibrium profile of a charged species in a frozen potential:
// y(x) = y_ref exp(-e z phi(x) / (kB T)).
std::vector<double> boltzmann_profile(std::span<const double> phi, int valency, double T, double y_ref,
                                      const PhysicalConstants& c);

struct DebyeLayer {
    double screening_length = 0.0;      // lambda_D
    std::vector<double> phi;            // zeta exp(-x / lambda_D) at the sample points
    bool linearized_valid = true;       // |e zeta / kB T| <= 0.2
};

// Linearized double-layer profile near a wall at x = 0 held at potential zeta.
// n_inf are the bulk number densities matching `valencies`.
DebyeLayer debye_layer(std::span<const double> x, double zeta, double T, std::span<const int> valencies,
                       std::span<const double> n_inf, double relative_permittivity, const PhysicalConstants& c);

// Debye screening length only.
double debye_length(double T, std::span<const int> valencies, std::span<const double> n_inf,
                    double relative_permittivity, const PhysicalConstants& c);

// Two-species isomerization A <-> B with equilibrium constant K:
// returns (y_A, y_B) = (1, K) / (1 + K).
std::pair<double, double> reaction_equilibrium_fractions(double K);

} // namespace elk
