#include "elk/audit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "elk/errors.hpp"
#include "elk/parallel.hpp"

namespace elk {

namespace {

// Centered interior gradient; one-sided second-order at non-periodic ends.
std::vector<double> gradient_of(const Grid1D& g, bool periodic, const std::function<double(int)>& f) {
    const int n = g.n_cells;
    const double dx = g.dx();
    std::vector<double> out(static_cast<size_t>(n), 0.0);
    for (int k = 1; k + 1 < n; ++k) out[k] = (f(k + 1) - f(k - 1)) / (2.0 * dx);
    if (periodic) {
        out[0] = (f(1) - f(n - 1)) / (2.0 * dx);
        out[n - 1] = (f(0) - f(n - 2)) / (2.0 * dx);
    } else {
        out[0] = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * dx);
        out[n - 1] = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * dx);
    }
    return out;
}

std::vector<double> gradient_of(const Grid1D& g, bool periodic, std::span<const double> f) {
    return gradient_of(g, periodic, [&](int k) { return f[static_cast<size_t>(k)]; });
}

} // namespace

std::vector<LocalField> sample_fields(const Problem& prob, const MixtureState& s) {
    const int n = s.grid.n_cells;
    const int L = s.n_species;
    const bool periodic = prob.phi_bc.periodic();

    const std::vector<double> dT = gradient_of(s.grid, periodic, s.T);
    const std::vector<double> dphi = gradient_of(s.grid, periodic, s.phi);
    const std::vector<double> dv = gradient_of(s.grid, periodic, s.v);
    const std::vector<double> dp = gradient_of(s.grid, periodic, s.p);
    const std::vector<double> drho = gradient_of(s.grid, periodic, s.rho);
    std::vector<std::vector<double>> dy(static_cast<size_t>(L));
    for (int l = 0; l < L; ++l)
        dy[l] = gradient_of(s.grid, periodic, [&](int k) { return s.y_at(k, l); });

    std::vector<LocalField> out(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        LocalField& f = out[k];
        f.y.resize(static_cast<size_t>(L));
        f.dy.resize(static_cast<size_t>(L));
        for (int l = 0; l < L; ++l) {
            f.y[l] = s.y_at(k, l);
            f.dy[l] = dy[l][k];
        }
        f.rho = s.rho[k];
        f.drho = drho[k];
        f.phi = s.phi[k];
        f.dphi = dphi[k];
        f.T = s.T[k];
        f.dT = dT[k];
        f.v = s.v[k];
        f.dv = dv[k];
        f.p = s.p[k];
        f.dp = dp[k];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Entropy budget
// ---------------------------------------------------------------------------

EntropyBudget entropy_production(const Problem& prob, const MixtureState& s) {
    const int n = s.grid.n_cells;
    const int L = s.n_species;
    const double dx = s.grid.dx();
    const PhysicalConstants& c = prob.constants;
    const MaterialParams& mat = prob.material;
    const double kB = c.boltzmann;
    const double qe = c.elementary_charge;
    const int threads = thread_cap_from_env();

    const std::vector<LocalField> fields = sample_fields(prob, s);

    EntropyBudget out;
    EntropyCellTerms& t = out.cells;
    auto resize_all = [&](auto&... arrs) { (arrs.resize(static_cast<size_t>(n)), ...); };
    resize_all(t.electrothermal, t.viscous, t.thermo_mixing, t.ec_reaction, t.total_ec, t.heat, t.chemical_mixing,
               t.chemical_reaction, t.joule, t.total_chem, t.diss_pure, t.diss_mix_ec, t.diss_mix_chem, t.total_split,
               t.total_entropic, t.fourier, t.diffusion, t.mix_reaction, t.pure_reaction, t.pure_diffusion, t.flux_ec,
               t.flux_chem, t.flux_pure, t.flux_mix_ec, t.flux_mix_chem, t.heat_flux, t.current, t.tolerance,
               t.counter_thermal_flux);
    std::vector<double> flux_tolerance(static_cast<size_t>(n), 0.0);
    std::vector<double> decomposition(static_cast<size_t>(n), 0.0);

    parallel_for(static_cast<size_t>(n), threads, [&](size_t lo, size_t hi) {
        std::vector<double> y_cl(static_cast<size_t>(L)), chi_mix(static_cast<size_t>(L)),
            chibar_mix(static_cast<size_t>(L)), dchi_mix(static_cast<size_t>(L)), dchibar_mix(static_cast<size_t>(L)),
            chi(static_cast<size_t>(L)), chibar(static_cast<size_t>(L)), dchi(static_cast<size_t>(L)),
            dchibar(static_cast<size_t>(L));
        for (size_t kk = lo; kk < hi; ++kk) {
            const int k = static_cast<int>(kk);
            const LocalField& f = fields[kk];
            const double T = f.T;
            const double T2 = T * T;
            const double nu = 1.0 / f.rho;

            for (int l = 0; l < L; ++l) {
                const Species& sp = prob.species[l];
                y_cl[l] = clamp_fraction(f.y[l]);
                chi_mix[l] = kB * T / sp.mass * (prob.betas[l] + std::log(y_cl[l]));
                chibar_mix[l] = chi_mix[l] + qe * sp.valency / sp.mass * f.phi;
                dchi_mix[l] = kB / sp.mass * (prob.betas[l] + std::log(y_cl[l])) * f.dT +
                              kB * T / sp.mass * f.dy[l] / y_cl[l];
                dchibar_mix[l] = dchi_mix[l] + qe * sp.valency / sp.mass * f.dphi;
            }
            const double chi_pure = kB * T / mat.reference_mass + f.p * nu;
            const double dchi_pure = kB / mat.reference_mass * f.dT + nu * f.dp - f.p * nu * nu * f.drho;
            for (int l = 0; l < L; ++l) {
                chi[l] = chi_pure + chi_mix[l];
                chibar[l] = chi_pure + chibar_mix[l];
                dchi[l] = dchi_pure + dchi_mix[l];
                dchibar[l] = dchi_pure + dchibar_mix[l];
            }

            const FluxSet fx = drift_mass_fluxes_raw(f, prob.species, prob.betas, c);
            const double i = fx.current;
            const std::vector<double> r = mass_production_rates(prob.network, prob.species, y_cl);
            const double tau = (2.0 * mat.shear_viscosity + mat.bulk_viscosity) * f.dv;
            const double q = extended_fourier_heat_flux(f.dT, mat.thermal_conductivity, f.phi, i, chibar_mix, fx.j);
            const double E = f.electric_field();

            // electrochemical representation
            const double electrothermal = -(f.dT / T2) * (q + f.phi * i);
            const double viscous = tau * f.dv / T;
            double thermo_mixing = 0.0, ec_reaction = 0.0;
            for (int l = 0; l < L; ++l) {
                thermo_mixing -= (dchibar[l] / T - chibar[l] * f.dT / T2) * fx.j[l];
                ec_reaction -= chibar[l] / T * r[l];
            }
            const double total_ec = electrothermal + viscous + thermo_mixing + ec_reaction;

            // chemical representation
            const double heat = -(f.dT / T2) * q;
            double chemical_mixing = 0.0, chemical_reaction = 0.0;
            for (int l = 0; l < L; ++l) {
                chemical_mixing -= (dchi[l] / T - chi[l] * f.dT / T2) * fx.j[l];
                chemical_reaction -= chi[l] / T * r[l];
            }
            const double joule = E * i / T;
            const double total_chem = heat + viscous + chemical_mixing + chemical_reaction + joule;

            // pure / mixing split
            double sum_j = 0.0, sum_r = 0.0;
            for (int l = 0; l < L; ++l) {
                sum_j += fx.j[l];
                sum_r += r[l];
            }
            const double pure_diffusion = -(dchi_pure / T - chi_pure * f.dT / T2) * sum_j;
            const double pure_reaction = -(chi_pure / T) * sum_r;
            const double diss_pure = heat + viscous + pure_diffusion + pure_reaction;
            double diss_mix_chem = 0.0, diss_mix_ec = 0.0;
            for (int l = 0; l < L; ++l) {
                diss_mix_chem -= (dchi_mix[l] / T - chi_mix[l] * f.dT / T2) * fx.j[l] + chi_mix[l] / T * r[l];
                diss_mix_ec -= (dchibar_mix[l] / T - chibar_mix[l] * f.dT / T2) * fx.j[l] + chibar_mix[l] / T * r[l];
            }
            diss_mix_ec += -(f.dT / T2) * f.phi * i - E * i / T;
            const double total_split = diss_pure + diss_mix_ec + joule;

            // entropy fluxes
            double sum_chibar_j = 0.0, sum_chi_j = 0.0, sum_chibar_mix_j = 0.0, sum_chi_mix_j = 0.0;
            for (int l = 0; l < L; ++l) {
                sum_chibar_j += chibar[l] * fx.j[l];
                sum_chi_j += chi[l] * fx.j[l];
                sum_chibar_mix_j += chibar_mix[l] * fx.j[l];
                sum_chi_mix_j += chi_mix[l] * fx.j[l];
            }
            const double flux_ec = (q + f.phi * i) / T - sum_chibar_j / T;
            const double flux_chem = q / T - sum_chi_j / T;
            const double flux_pure = q / T - chi_pure / T * sum_j;
            const double flux_mix_ec = -sum_chibar_mix_j / T + f.phi * i / T;
            const double flux_mix_chem = -sum_chi_mix_j / T;

            // entropic-flux representation
            double sum_dchibar_j = 0.0, sum_chibar_r = 0.0;
            for (int l = 0; l < L; ++l) {
                sum_dchibar_j += dchibar[l] * fx.j[l];
                sum_chibar_r += chibar[l] * r[l];
            }
            const double total_entropic = -(f.dT / T) * flux_ec - sum_dchibar_j / T + viscous - sum_chibar_r / T;

            // sign-definite decomposition
            const double fourier = -(f.dT / T2) * (q + f.phi * i - sum_chibar_mix_j);
            double diffusion = 0.0, mix_reaction = 0.0;
            for (int l = 0; l < L; ++l) {
                diffusion -= dchibar_mix[l] * fx.j[l] / T;
                mix_reaction -= chi_mix[l] / T * r[l];
            }
            const double decomp =
                fourier + diffusion + viscous + mix_reaction + pure_reaction + pure_diffusion;

            // Audit scale: the representations agree as exact algebra, so the
            // only admissible discrepancy is rounding, which is bounded by the
            // machine epsilon times the magnitudes of the individual addends
            // BEFORE they cancel (potentials regroup between forms, so large
            // electric or pure-substance pieces can cancel inside any one sum).
            double flux_scale = std::abs(q / T) + std::abs(f.phi * i / T);
            for (int l = 0; l < L; ++l) {
                const Species& sp = prob.species[l];
                flux_scale += (std::abs(chibar[l]) + std::abs(chi[l]) + std::abs(chibar_mix[l]) +
                               std::abs(chi_mix[l]) + std::abs(qe * sp.valency / sp.mass * f.phi) +
                               std::abs(chi_pure)) /
                              T * std::abs(fx.j[l]);
            }
            const double flux_eps = 1e-12 * flux_scale;

            double scale = (std::abs(f.dT) / T2) * (std::abs(q) + std::abs(f.phi * i)) + std::abs(viscous) +
                           std::abs(joule) + (std::abs(f.dT) / T) * flux_scale + std::abs(pure_diffusion) +
                           std::abs(pure_reaction);
            for (int l = 0; l < L; ++l) {
                const double aj = std::abs(fx.j[l]);
                const double ar = std::abs(r[l]);
                scale += (std::abs(dchibar[l]) + std::abs(dchi[l]) + std::abs(dchibar_mix[l]) +
                          std::abs(dchi_mix[l]) + std::abs(dchi_pure)) /
                             T * aj +
                         (std::abs(chibar[l]) + std::abs(chi[l])) * (std::abs(f.dT) / T2) * aj +
                         (std::abs(chibar[l]) + std::abs(chi[l]) + std::abs(chibar_mix[l]) + std::abs(chi_mix[l]) +
                          std::abs(chi_pure)) /
                             T * ar;
            }
            const double eps = 1e-12 * scale;

            t.electrothermal[k] = electrothermal;
            t.viscous[k] = viscous;
            t.thermo_mixing[k] = thermo_mixing;
            t.ec_reaction[k] = ec_reaction;
            t.total_ec[k] = total_ec;
            t.heat[k] = heat;
            t.chemical_mixing[k] = chemical_mixing;
            t.chemical_reaction[k] = chemical_reaction;
            t.joule[k] = joule;
            t.total_chem[k] = total_chem;
            t.diss_pure[k] = diss_pure;
            t.diss_mix_ec[k] = diss_mix_ec;
            t.diss_mix_chem[k] = diss_mix_chem;
            t.total_split[k] = total_split;
            t.total_entropic[k] = total_entropic;
            t.fourier[k] = fourier;
            t.diffusion[k] = diffusion;
            t.mix_reaction[k] = mix_reaction;
            t.pure_reaction[k] = pure_reaction;
            t.pure_diffusion[k] = pure_diffusion;
            t.flux_ec[k] = flux_ec;
            t.flux_chem[k] = flux_chem;
            t.flux_pure[k] = flux_pure;
            t.flux_mix_ec[k] = flux_mix_ec;
            t.flux_mix_chem[k] = flux_mix_chem;
            t.heat_flux[k] = q;
            t.current[k] = i;
            t.tolerance[k] = eps;
            flux_tolerance[k] = flux_eps;
            decomposition[k] = decomp;
            t.counter_thermal_flux[k] = (f.dT * flux_ec > std::abs(f.dT) * flux_eps) ? 1 : 0;
        }
    });

    out.min_total_ec = t.total_ec.empty() ? 0.0 : t.total_ec[0];
    for (int k = 0; k < n; ++k) {
        const double eps = t.tolerance[k];
        auto sign_check = [&](const char* name, double value) {
            if (value < -eps) out.violations.push_back({name, k, value, eps});
        };
        auto identity_check = [&](const char* name, double value, double reference) {
            if (std::abs(value - reference) > eps) out.violations.push_back({name, k, value - reference, eps});
        };
        sign_check("fourier", t.fourier[k]);
        sign_check("diffusion", t.diffusion[k]);
        sign_check("viscous", t.viscous[k]);
        sign_check("mixing-reaction", t.mix_reaction[k]);
        sign_check("total", t.total_ec[k]);
        identity_check("form-equivalence", t.total_chem[k], t.total_ec[k]);
        identity_check("split-equivalence", t.total_split[k], t.total_ec[k]);
        identity_check("entropic-form-equivalence", t.total_entropic[k], t.total_ec[k]);
        identity_check("decomposition-equivalence", decomposition[k], t.total_ec[k]);
        identity_check("mixing-form-equivalence", t.diss_mix_ec[k], t.diss_mix_chem[k]);
        identity_check("pure-diffusion-vanishes", t.pure_diffusion[k], 0.0);
        identity_check("pure-reaction-vanishes", t.pure_reaction[k], 0.0);
        if (std::abs(t.flux_ec[k] - t.flux_chem[k]) > flux_tolerance[k])
            out.violations.push_back({"flux-equivalence", k, t.flux_ec[k] - t.flux_chem[k], flux_tolerance[k]});

        out.integral_total_ec += t.total_ec[k] * dx;
        out.integral_total_chem += t.total_chem[k] * dx;
        out.integral_fourier += t.fourier[k] * dx;
        out.integral_diffusion += t.diffusion[k] * dx;
        out.integral_viscous += t.viscous[k] * dx;
        out.integral_mix_reaction += t.mix_reaction[k] * dx;
        out.integral_joule += t.joule[k] * dx;
        out.min_total_ec = std::min(out.min_total_ec, t.total_ec[k]);
        out.counter_thermal_cells += t.counter_thermal_flux[k];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Conservation
// ---------------------------------------------------------------------------

ConservationTotals conservation_totals(const Problem& prob, const MixtureState& s) {
    const int n = s.grid.n_cells;
    const int L = s.n_species;
    const double dx = s.grid.dx();
    const double theta = prob.porosity();
    const PhysicalConstants& c = prob.constants;

    ConservationTotals out;
    out.time = s.time;
    out.species_mass.assign(static_cast<size_t>(L), 0.0);
    for (int k = 0; k < n; ++k) {
        out.mass += theta * s.rho[k] * dx;
        for (int l = 0; l < L; ++l) {
            const double rho_l = s.rho[k] * s.y_at(k, l);
            const double zq = c.elementary_charge * prob.species[l].valency / prob.species[l].mass;
            out.species_mass[l] += theta * rho_l * dx;
            out.charge += theta * zq * rho_l * dx;
            out.abs_charge += theta * std::abs(zq) * rho_l * dx;
        }
    }
    return out;
}

ConservationTracker::ConservationTracker(const Problem& prob) : prob_(&prob) {}

void ConservationTracker::record(const MixtureState& s) { samples_.push_back(conservation_totals(*prob_, s)); }

ConservationReport ConservationTracker::report() const {
    const Problem& prob = *prob_;
    const int L = prob.n_species();
    ConservationReport rep;
    rep.closed = true;
    for (const FieldBC& bc : prob.species_bcs)
        if (bc.left.type == BCType::Dirichlet || bc.right.type == BCType::Dirichlet) rep.closed = false;

    rep.species_conserved.assign(static_cast<size_t>(L), 0);
    for (int l = 0; l < L; ++l) {
        bool reactive = false;
        for (int j = 0; j < prob.network.n_reactions; ++j)
            if (prob.network.s(l, j) != 0) reactive = true;
        rep.species_conserved[l] = (rep.closed && !reactive) ? 1 : 0;
    }

    rep.species_drift.assign(static_cast<size_t>(L), 0.0);
    rep.samples = samples_;
    if (samples_.empty()) return rep;
    const ConservationTotals& first = samples_.front();
    const double tiny = std::numeric_limits<double>::min();
    for (const ConservationTotals& sm : samples_) {
        rep.mass_drift = std::max(rep.mass_drift, std::abs(sm.mass - first.mass) / std::max(std::abs(first.mass), tiny));
        const double qscale = std::max(first.abs_charge, tiny);
        rep.charge_drift = std::max(rep.charge_drift, std::abs(sm.charge - first.charge) / qscale);
        for (int l = 0; l < L; ++l)
            rep.species_drift[l] =
                std::max(rep.species_drift[l], std::abs(sm.species_mass[l] - first.species_mass[l]) /
                                                   std::max(std::abs(first.species_mass[l]), tiny));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Balance-law diagnostics
// ---------------------------------------------------------------------------

std::vector<double> momentum_residual(const Problem& prob, const MixtureState& s) {
    const int n = s.grid.n_cells;
    const bool periodic = prob.phi_bc.periodic();
    const DerivedFields d = derived_fields(s, prob.species, prob.constants);

    std::vector<double> w(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) w[k] = s.rho[k] * s.v[k] * s.v[k];
    const std::vector<double> dw = gradient_of(s.grid, periodic, w);
    const std::vector<double> dp = gradient_of(s.grid, periodic, s.p);
    const std::vector<double> dv = gradient_of(s.grid, periodic, s.v);
    std::vector<double> tau(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k)
        tau[k] = (2.0 * prob.material.shear_viscosity + prob.material.bulk_viscosity) * dv[k];
    const std::vector<double> dtau = gradient_of(s.grid, periodic, tau);
    const std::vector<double> dphi = gradient_of(s.grid, periodic, s.phi);

    std::vector<double> res(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) res[k] = dw[k] + dp[k] - dtau[k] - d.rho_E[k] * (-dphi[k]);
    return res;
}

std::vector<double> momentum_residual(const Problem& prob, const MixtureState& before, const MixtureState& after) {
    const double dt = after.time - before.time;
    if (!(dt > 0.0)) throw StateError("momentum residual: states must be in increasing time order");
    std::vector<double> res = momentum_residual(prob, after);
    for (int k = 0; k < after.grid.n_cells; ++k)
        res[k] += (after.rho[k] * after.v[k] - before.rho[k] * before.v[k]) / dt;
    return res;
}

namespace {

// rho (u_pure + u_mix) + rho_E phi + rho v^2 / 2 per cell
std::vector<double> energy_density(const Problem& prob, const MixtureState& s) {
    const int n = s.grid.n_cells;
    const DerivedFields d = derived_fields(s, prob.species, prob.constants);
    std::vector<double> e(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double nu = 1.0 / s.rho[k];
        const double spure = pure_specific_entropy(s.T[k], prob.material, prob.constants);
        const double upure = pure_internal_energy(spure, nu, s.p[k], prob.material, prob.constants);
        const double umix =
            mixing_internal_energy(s.fractions(k), prob.betas, prob.species, s.T[k], prob.constants).total;
        e[k] = s.rho[k] * (upure + umix) + d.rho_E[k] * s.phi[k] + 0.5 * s.rho[k] * s.v[k] * s.v[k];
    }
    return e;
}

} // namespace

std::vector<double> first_law_residual(const Problem& prob, const MixtureState& before, const MixtureState& after) {
    const double dt = after.time - before.time;
    if (!(dt > 0.0)) throw StateError("energy residual: states must be in increasing time order");
    const int n = after.grid.n_cells;
    const int L = after.n_species;
    const bool periodic = prob.phi_bc.periodic();
    const double kB = prob.constants.boltzmann;
    const double qe = prob.constants.elementary_charge;

    const std::vector<double> e_before = energy_density(prob, before);
    const std::vector<double> e_after = energy_density(prob, after);
    const std::vector<LocalField> fields = sample_fields(prob, after);

    std::vector<double> flux(static_cast<size_t>(n));
    std::vector<double> chibar_mix(static_cast<size_t>(L));
    for (int k = 0; k < n; ++k) {
        const LocalField& f = fields[k];
        for (int l = 0; l < L; ++l) {
            const Species& sp = prob.species[l];
            chibar_mix[l] = kB * f.T / sp.mass * (prob.betas[l] + std::log(clamp_fraction(f.y[l]))) +
                            qe * sp.valency / sp.mass * f.phi;
        }
        const FluxSet fx = drift_mass_fluxes_raw(f, prob.species, prob.betas, prob.constants);
        const double q =
            extended_fourier_heat_flux(f.dT, prob.material.thermal_conductivity, f.phi, fx.current, chibar_mix, fx.j);
        const double tau = (2.0 * prob.material.shear_viscosity + prob.material.bulk_viscosity) * f.dv;
        flux[k] = e_after[k] * f.v + q + f.phi * fx.current - tau * f.v;
    }
    const std::vector<double> dflux = gradient_of(after.grid, periodic, flux);

    std::vector<double> res(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) res[k] = (e_after[k] - e_before[k]) / dt + dflux[k];
    return res;
}

// ---------------------------------------------------------------------------
// Time-reversal diagnostic
// ---------------------------------------------------------------------------

ReversalReport time_reversal_residual(const Problem& prob, const Trajectory& traj, int species_index) {
    const size_t nt = traj.size();
    if (nt < 3) throw StateError("time-reversal audit needs at least three snapshots");
    const Grid1D& grid = traj.states.front().grid;
    const int n = grid.n_cells;
    const double dx = grid.dx();
    const bool periodic = prob.phi_bc.periodic();
    if (species_index < 0 || species_index >= prob.n_species())
        throw StateError("time-reversal audit: species index out of range");
    const Species& sp = prob.species[species_index];

    const double dt = traj.states[1].time - traj.states[0].time;
    if (!(dt > 0.0)) throw StateError("time-reversal audit: snapshots must advance in time");
    for (size_t m = 0; m + 1 < nt; ++m) {
        const double step = traj.states[m + 1].time - traj.states[m].time;
        if (std::abs(step - dt) > 1e-9 * dt)
            throw StateError("time-reversal audit: snapshots must be uniformly spaced in time");
    }

    // partial density, velocity, and E/T per snapshot
    std::vector<std::vector<double>> u(nt), vel(nt), eot(nt);
    for (size_t m = 0; m < nt; ++m) {
        const MixtureState& st = traj.states[m];
        u[m].resize(static_cast<size_t>(n));
        vel[m] = st.v;
        std::vector<double> dphi = gradient_of(grid, periodic, st.phi);
        eot[m].resize(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) {
            u[m][k] = st.rho[k] * st.y_at(k, species_index);
            eot[m][k] = -dphi[k] / st.T[k];
        }
    }

    const double drift_coef = prob.constants.elementary_charge * sp.valency * sp.diffusivity / prob.constants.boltzmann;
    auto wrap = [&](int k) { return (k % n + n) % n; };

    // residual of d_t u + d_x(u v) + d_x(drift_coef u E/T) - D d_xx u,
    // centered in both time and space
    auto accumulate = [&](const std::function<double(size_t, int)>& U, const std::function<double(size_t, int)>& V,
                          const std::function<double(size_t, int)>& EoT, double& rms, double& scale_rms) {
        double sum = 0.0, scale_sum = 0.0;
        size_t count = 0;
        const int k_lo = periodic ? 0 : 1;
        const int k_hi = periodic ? n : n - 1;
        for (size_t m = 1; m + 1 < nt; ++m) {
            for (int k = k_lo; k < k_hi; ++k) {
                const int kp = periodic ? wrap(k + 1) : k + 1;
                const int km = periodic ? wrap(k - 1) : k - 1;
                const double ut = (U(m + 1, k) - U(m - 1, k)) / (2.0 * dt);
                const double adv = (U(m, kp) * V(m, kp) - U(m, km) * V(m, km)) / (2.0 * dx);
                const double drift =
                    drift_coef * (U(m, kp) * EoT(m, kp) - U(m, km) * EoT(m, km)) / (2.0 * dx);
                const double diff = -sp.diffusivity * (U(m, kp) - 2.0 * U(m, k) + U(m, km)) / (dx * dx);
                const double r = ut + adv + drift + diff;
                sum += r * r;
                const double sc = std::abs(ut) + std::abs(adv) + std::abs(drift) + std::abs(diff);
                scale_sum += sc * sc;
                ++count;
            }
        }
        rms = count ? std::sqrt(sum / static_cast<double>(count)) : 0.0;
        scale_rms = count ? std::sqrt(scale_sum / static_cast<double>(count)) : 0.0;
    };

    ReversalReport rep;
    double fwd_scale = 0.0, rev_scale = 0.0;
    accumulate([&](size_t m, int k) { return u[m][k]; }, [&](size_t m, int k) { return vel[m][k]; },
               [&](size_t m, int k) { return eot[m][k]; }, rep.forward, fwd_scale);
    // reflect in time and space; velocity is even under the double reflection,
    // the electric field odd
    auto mirror = [&](int k) { return n - 1 - k; };
    accumulate([&](size_t m, int k) { return u[nt - 1 - m][mirror(k)]; },
               [&](size_t m, int k) { return vel[nt - 1 - m][mirror(k)]; },
               [&](size_t m, int k) { return -eot[nt - 1 - m][mirror(k)]; }, rep.reversed, rev_scale);

    rep.defined = fwd_scale > 0.0 && rep.forward > 1e-13 * fwd_scale;
    rep.ratio = rep.defined ? rep.reversed / rep.forward : 1.0;
    return rep;
}

} // namespace elk
