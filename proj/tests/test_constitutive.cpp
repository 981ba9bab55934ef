#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "elk/constitutive.hpp"

using namespace elk;

namespace {

PhysicalConstants unit_constants() {
    PhysicalConstants c;
    c.elementary_charge = 1.0;
    c.boltzmann = 1.0;
    c.vacuum_permittivity = 1.0;
    return c;
}

std::vector<Species> salt_species() {
    return {{"plus", 1.0, 1, 0.004, false}, {"minus", 2.0, -1, 0.002, false}, {"water", 0.5, 0, 0.003, true}};
}

LocalField smooth_field() {
    LocalField f;
    f.y = {0.2, 0.3, 0.5};
    f.dy = {0.01, -0.02, 0.01};
    f.rho = 2.0;
    f.drho = 0.1;
    f.phi = 0.3;
    f.dphi = -0.4;
    f.T = 1.5;
    f.dT = 0.2;
    return f;
}

MatN random_gradient(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    MatN g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = u(rng);
    return g;
}

} // namespace

TEST_CASE("Einstein relation") {
    const PhysicalConstants c = unit_constants();
    CHECK(einstein_mobility(0.004, 2.0, c) == doctest::Approx(0.002).epsilon(1e-15));
}

TEST_CASE("expanded and raw drift fluxes agree and sum to zero") {
    const PhysicalConstants c = unit_constants();
    const auto species = salt_species();
    const std::vector<double> betas{0.1, -0.2, 0.05};
    const LocalField f = smooth_field();

    const FluxSet a = drift_mass_fluxes(f, species, betas, c);
    const FluxSet b = drift_mass_fluxes_raw(f, species, betas, c);
    REQUIRE(a.j.size() == 3);
    REQUIRE(b.j.size() == 3);

    double scale = 0.0;
    for (int l = 0; l < 3; ++l) scale = std::max(scale, std::abs(a.j[l]));
    REQUIRE(scale > 0.0);
    for (int l = 0; l < 3; ++l) CHECK(std::abs(a.j[l] - b.j[l]) <= 1e-12 * scale);

    double sum_a = 0.0, sum_b = 0.0;
    for (int l = 0; l < 3; ++l) {
        sum_a += a.j[l];
        sum_b += b.j[l];
    }
    CHECK(sum_a == 0.0); // solvent flux closes the sum by construction
    CHECK(sum_b == 0.0);

    CHECK(a.current == doctest::Approx(free_current(species, a.j, c)).epsilon(1e-14));
}

TEST_CASE("uniform field carries no drift flux") {
    const PhysicalConstants c = unit_constants();
    const auto species = salt_species();
    const std::vector<double> betas{0.1, -0.2, 0.05};
    LocalField f = smooth_field();
    f.dy = {0.0, 0.0, 0.0};
    f.dphi = 0.0;
    f.dT = 0.0;

    const FluxSet fx = drift_mass_fluxes(f, species, betas, c);
    for (double j : fx.j) CHECK(j == 0.0);
    CHECK(fx.current == 0.0);
}

TEST_CASE("neutral isothermal mixture reduces to Fick diffusion") {
    const PhysicalConstants c = unit_constants();
    const std::vector<Species> species{{"a", 1.0, 0, 0.01, false}, {"w", 2.0, 0, 0.0, true}};
    const std::vector<double> betas{0.0, 0.0};
    LocalField f;
    f.y = {0.3, 0.7};
    f.dy = {0.05, -0.05};
    f.rho = 2.0;
    f.T = 1.0;

    const FluxSet fx = drift_mass_fluxes(f, species, betas, c);
    // j_a = -rho D dy_a + (m_a rho_a D / (m_w y_w)) dy_w
    const double expect = -2.0 * 0.01 * 0.05 + (1.0 * 0.6 * 0.01 / (2.0 * 0.7)) * (-0.05);
    CHECK(fx.j[0] == doctest::Approx(expect).epsilon(1e-14));
    CHECK(fx.j[1] == -fx.j[0]);
    CHECK(fx.current == 0.0);
}

TEST_CASE("free charge density weights partial densities by e z / m") {
    const PhysicalConstants c = unit_constants();
    const std::vector<Species> species{{"p", 1.0, 1, 0, false}, {"m", 2.0, -2, 0, false}, {"w", 3.0, 0, 0, true}};
    const std::vector<double> rho_l{0.3, 0.4, 0.3};
    CHECK(free_charge_density(species, rho_l, c) == doctest::Approx(0.3 - 0.4).epsilon(1e-14));
}

TEST_CASE("Newtonian stress entries") {
    MatN g(2);
    g(0, 0) = 1.0;
    g(0, 1) = 2.0;
    g(1, 0) = 3.0;
    g(1, 1) = 4.0;
    const MatN tau = newtonian_viscous_stress(g, 0.5, 0.25);
    CHECK(tau(0, 0) == doctest::Approx(1.0 + 1.25));
    CHECK(tau(0, 1) == doctest::Approx(2.5));
    CHECK(tau(1, 0) == doctest::Approx(2.5));
    CHECK(tau(1, 1) == doctest::Approx(4.0 + 1.25));
}

TEST_CASE("closed-form viscous dissipation equals the stress contraction") {
    std::mt19937 rng(7);
    for (int n = 1; n <= 3; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            const MatN g = random_gradient(rng, n);
            const double eta = 0.7, eta_v = -0.3;
            const double direct = ddot(newtonian_viscous_stress(g, eta, eta_v), g);
            const double closed = viscous_dissipation(g, eta, eta_v);
            CHECK(closed == doctest::Approx(direct).epsilon(1e-13));
        }
    }
}

TEST_CASE("dissipation dominates its sharp lower bound") {
    std::mt19937 rng(11);
    for (int n = 1; n <= 3; ++n) {
        const double eta = 0.5;
        SUBCASE("admissible pair") {
            const double eta_v = -2.0 * eta / n + 0.1;
            for (int trial = 0; trial < 20; ++trial) {
                const MatN g = random_gradient(rng, n);
                CHECK(viscous_dissipation(g, eta, eta_v) >=
                      viscous_dissipation_bound(g, eta, eta_v) - 1e-13);
            }
        }
        SUBCASE("boundary pair eta_v = -2 eta / n") {
            const double eta_v = -2.0 * eta / n;
            for (int trial = 0; trial < 20; ++trial) {
                const MatN g = random_gradient(rng, n);
                const MatN tau = newtonian_viscous_stress(g, eta, eta_v);
                CHECK(std::abs(trace(tau)) <= 1e-12);
                CHECK(viscous_dissipation(g, eta, eta_v) >= -1e-13);
                CHECK(std::abs(viscous_dissipation_bound(g, eta, eta_v)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("extended Fourier heat flux, scalar and tensor paths") {
    const std::vector<double> chibar_mix{1.0, 2.0};
    const std::vector<double> j{0.05, -0.05};
    const double q1 = extended_fourier_heat_flux(0.2, 0.5, 0.3, 0.1, chibar_mix, j);
    CHECK(q1 == doctest::Approx(-0.5 * 0.2 - 0.3 * 0.1 + (0.05 - 0.1)).epsilon(1e-14));

    const VecN grad_T(0.2);
    const MatN kappa = 0.5 * MatN::identity(1);
    const VecN current(0.1);
    const std::vector<VecN> jv{VecN(0.05), VecN(-0.05)};
    const VecN qn = extended_fourier_heat_flux(grad_T, kappa, 0.3, current, chibar_mix, jv);
    CHECK(qn.n == 1);
    CHECK(qn[0] == doctest::Approx(q1).epsilon(1e-14));
}
