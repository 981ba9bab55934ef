#include <cmath>
#include <vector>

#include "doctest.h"
#include "elk/smallvec.hpp"
#include "elk/thermo.hpp"

using namespace elk;

namespace {

PhysicalConstants unit_constants() {
    PhysicalConstants c;
    c.elementary_charge = 1.0;
    c.boltzmann = 1.0;
    c.vacuum_permittivity = 1.0;
    return c;
}

std::vector<Species> three_species() {
    return {{"plus", 1.0, 1, 0.004, false}, {"minus", 2.0, -1, 0.002, false}, {"solvent", 0.5, 0, 0.0, true}};
}

} // namespace

TEST_CASE("vacuum permeability follows from permittivity and light speed") {
    PhysicalConstants c; // SI defaults
    CHECK(c.vacuum_permeability() == doctest::Approx(1.25663706212e-6).epsilon(1e-9));
    // mu0 eps0 c^2 == 1 by construction
    CHECK(c.vacuum_permeability() * c.vacuum_permittivity * c.speed_of_light * c.speed_of_light ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("mixing chemical potential matches its formula") {
    const PhysicalConstants c = unit_constants();
    // (kB T / m)(beta + ln y)
    const double got = chemical_potential_mixing(0.3, 0.25, 2.0, 0.5, c);
    CHECK(got == doctest::Approx(4.0 * (0.3 + std::log(0.25))).epsilon(1e-15));

    // electrochemical version adds e z phi / m
    const double ec = electrochemical_potential_mixing(0.3, 0.25, 2.0, 0.5, -2, 0.7, c);
    CHECK(ec == doctest::Approx(got + 1.0 * (-2) * 0.7 / 0.5).epsilon(1e-15));
}

TEST_CASE("mixing chemical potential stays finite at the fraction floor") {
    const PhysicalConstants c = unit_constants();
    const double at_zero = chemical_potential_mixing(0.0, 0.0, 1.0, 1.0, c);
    CHECK(std::isfinite(at_zero));
    CHECK(at_zero == doctest::Approx(std::log(1e-30)).epsilon(1e-12));
}

TEST_CASE("mixing energy and entropy satisfy the Gibbs relation on separate paths") {
    const PhysicalConstants c = unit_constants();
    const auto species = three_species();
    const std::vector<double> betas{0.4, -0.3, 0.1};
    const std::vector<double> y{0.2, 0.3, 0.5};
    const double T = 1.7;

    const MixingEnergy u = mixing_internal_energy(y, betas, species, T, c);
    const double s = mixing_entropy(y, betas, species, c);
    CHECK(u.contributions.size() == 3);

    double sum = 0.0;
    for (double v : u.contributions) sum += v;
    CHECK(u.total == doctest::Approx(sum).epsilon(1e-14));

    // -T s_mix == u_mix, with s computed without dividing u by T
    CHECK(-T * s == doctest::Approx(u.total).epsilon(1e-13));
}

TEST_CASE("per-species mixing energy is minimized (and zero) at y = exp(-beta)") {
    const PhysicalConstants c = unit_constants();
    const std::vector<Species> species{{"a", 1.0, 0, 0.0, false}, {"w", 1.0, 0, 0.0, true}};
    const double beta = 0.8;
    const double y_star = std::exp(-beta);

    auto contribution = [&](double y) {
        const std::vector<double> ys{y, 1.0 - y};
        const std::vector<double> betas{beta, 0.0};
        return mixing_internal_energy(ys, betas, species, 1.0, c).contributions[0];
    };

    CHECK(contribution(y_star) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(contribution(y_star + 0.01) > contribution(y_star));
    CHECK(contribution(y_star - 0.01) > contribution(y_star));
}

TEST_CASE("pure-substance entropy and energy scale") {
    PhysicalConstants c = unit_constants();
    MaterialParams mat;
    mat.reference_temperature = 3.0;
    mat.reference_mass = 2.0;

    CHECK(pure_specific_entropy(3.0, mat, c) == 0.0);
    CHECK(pure_specific_entropy(6.0, mat, c) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));

    // d u_hat / d s == T at constant (nu, p)
    const double s = 0.4;
    const double nu = 0.7, p = 1.3;
    const double h = 1e-6;
    const double dids = (pure_internal_energy(s + h, nu, p, mat, c) - pure_internal_energy(s - h, nu, p, mat, c)) /
                        (2.0 * h);
    const double T = mat.reference_temperature * std::exp(mat.reference_mass * s / c.boltzmann);
    CHECK(dids == doctest::Approx(T).epsilon(1e-7));

    // d u_hat / d nu == p exactly
    CHECK(pure_internal_energy(s, nu + 0.1, p, mat, c) - pure_internal_energy(s, nu, p, mat, c) ==
          doctest::Approx(p * 0.1).epsilon(1e-12));
}

TEST_CASE("total chemical potential decomposes into pure + mixing parts") {
    PhysicalConstants c = unit_constants();
    MaterialParams mat;
    mat.reference_temperature = 1.0;
    mat.reference_mass = 2.0;

    const double beta = 0.3, y = 0.4, T = 1.5, nu = 0.8, p = 2.0, mass = 0.5;
    const double chi_pure = pure_internal_energy(pure_specific_entropy(T, mat, c), nu, p, mat, c);
    const double chi_mix = chemical_potential_mixing(beta, y, T, mass, c);

    CHECK(chemical_potential_total(beta, y, T, nu, p, mass, mat, c) ==
          doctest::Approx(chi_pure + chi_mix).epsilon(1e-14));

    const double phi = -0.6;
    CHECK(electrochemical_potential_total(beta, y, T, nu, p, mass, 2, phi, mat, c) ==
          doctest::Approx(chi_pure + chi_mix + 1.0 * 2 * phi / mass).epsilon(1e-14));
}

TEST_CASE("extended Dalton pressure") {
    const std::vector<double> partial{1.0, 2.0};
    const std::vector<double> rho_l{3.0, 4.0};

    SUBCASE("zero drift reduces exactly to the partial-pressure sum") {
        const VecN v(0.1, 0.2);
        const std::vector<VecN> v_l{v, v};
        CHECK(extended_dalton_pressure(partial, rho_l, v_l, v) == 3.0);
    }

    SUBCASE("drift kinetic term enters with the 1/n prefactor") {
        const VecN v(0.1, 0.2);
        const std::vector<VecN> v_l{VecN(0.3, 0.2), VecN(0.1, 0.5)};
        // (1/2)(3 * 0.04 + 4 * 0.09) = 0.24
        CHECK(extended_dalton_pressure(partial, rho_l, v_l, v) == doctest::Approx(3.24).epsilon(1e-14));
    }

    SUBCASE("one-dimensional prefactor is 1") {
        const VecN v(0.0);
        const std::vector<VecN> v_l{VecN(0.2), VecN(-0.1)};
        CHECK(extended_dalton_pressure(partial, rho_l, v_l, v) ==
              doctest::Approx(3.0 + 3.0 * 0.04 + 4.0 * 0.01).epsilon(1e-14));
    }
}

TEST_CASE("extended Raoult pressure weights pure pressures by fractions") {
    const std::vector<double> pure{10.0, 20.0};
    const std::vector<double> y{0.3, 0.7};
    const std::vector<double> rho_l{3.0, 4.0};
    const VecN v(0.1, 0.2);
    const std::vector<VecN> v_l{VecN(0.3, 0.2), VecN(0.1, 0.5)};

    const std::vector<double> dalton_partial{3.0, 14.0};
    CHECK(extended_raoult_pressure(pure, y, rho_l, v_l, v) ==
          doctest::Approx(extended_dalton_pressure(dalton_partial, rho_l, v_l, v)).epsilon(1e-14));
}
