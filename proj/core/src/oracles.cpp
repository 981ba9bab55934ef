#include "elk/oracles.hpp"

#include <cmath>

#include "elk/errors.hpp"

namespace elk {

double heat_kernel(double x, double t, double x0, double sigma0, double diffusivity, double mass) {
    const double var = sigma0 * sigma0 + 2.0 * diffusivity * t;
    if (!(var > 0.0)) throw StateError("heat kernel: needs positive variance (sigma0 or D t)");
    const double d = x - x0;
    return mass / std::sqrt(2.0 * M_PI * var) * std::exp(-d * d / (2.0 * var));
}

std::vector<double> boltzmann_profile(std::span<const double> phi, int valency, double T, double y_ref,
                                      const PhysicalConstants& c) {
    if (!(T > 0.0)) throw StateError("Boltzmann profile: temperature must be positive");
    std::vector<double> y(phi.size());
    const double scale = c.elementary_charge * valency / (c.boltzmann * T);
    for (size_t k = 0; k < phi.size(); ++k) y[k] = y_ref * std::exp(-scale * phi[k]);
    return y;
}

double debye_length(double T, std::span<const int> valencies, std::span<const double> n_inf,
                    double relative_permittivity, const PhysicalConstants& c) {
    if (valencies.size() != n_inf.size()) throw StateError("Debye length: input lengths differ");
    double ionic = 0.0;
    for (size_t l = 0; l < valencies.size(); ++l)
        ionic += c.elementary_charge * c.elementary_charge * valencies[l] * valencies[l] * n_inf[l];
    if (!(ionic > 0.0)) throw StateError("Debye length: no ionic strength (all species neutral?)");
    return std::sqrt(relative_permittivity * c.vacuum_permittivity * c.boltzmann * T / ionic);
}

DebyeLayer debye_layer(std::span<const double> x, double zeta, double T, std::span<const int> valencies,
                       std::span<const double> n_inf, double relative_permittivity, const PhysicalConstants& c) {
    DebyeLayer out;
    out.screening_length = debye_length(T, valencies, n_inf, relative_permittivity, c);
    out.linearized_valid =
        std::abs(c.elementary_charge * zeta / (c.boltzmann * T)) <= 0.2;
    out.phi.resize(x.size());
    for (size_t k = 0; k < x.size(); ++k) out.phi[k] = zeta * std::exp(-x[k] / out.screening_length);
    return out;
}

std::pair<double, double> reaction_equilibrium_fractions(double K) {
    if (!(K > 0.0)) throw StateError("reaction equilibrium: K must be positive");
    return {1.0 / (1.0 + K), K / (1.0 + K)};
}

} // namespace elk
