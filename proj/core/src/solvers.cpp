#include "elk/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "elk/errors.hpp"
#include "elk/parallel.hpp"
#include "elk/state.hpp"
#include "elk/tridiag.hpp"

namespace elk {

double bernoulli_weight(double x) {
    if (x > 500.0) return x * std::exp(-x);        // avoids expm1 overflow; underflow to 0 is the limit
    if (std::abs(x) < 1e-10) return 1.0 - 0.5 * x; // series; expm1 loses relative accuracy only at 0/0
    return x / std::expm1(x);
}

namespace {

double harmonic_mean(double a, double b) { return 2.0 * a * b / (a + b); }

std::vector<double> centered_gradient(const Grid1D& g, std::span<const double> f, bool periodic) {
    const int n = g.n_cells;
    const double dx = g.dx();
    std::vector<double> out(static_cast<size_t>(n), 0.0);
    for (int k = 1; k + 1 < n; ++k) out[k] = (f[k + 1] - f[k - 1]) / (2.0 * dx);
    if (periodic) {
        out[0] = (f[1] - f[n - 1]) / (2.0 * dx);
        out[n - 1] = (f[0] - f[n - 2]) / (2.0 * dx);
    } else {
        out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
        out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Poisson
// ---------------------------------------------------------------------------

PoissonResult solve_poisson(const Grid1D& grid, std::span<const double> rho_E, std::span<const double> eps_r,
                            const FieldBC& bc, const PhysicalConstants& c, double porosity) {
    const int n = grid.n_cells;
    if (static_cast<int>(rho_E.size()) != n || static_cast<int>(eps_r.size()) != n)
        throw StateError("potential solve: field size does not match the grid");
    const double dx = grid.dx();
    const double inv_dx2 = 1.0 / (dx * dx);

    std::vector<double> b(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) b[k] = porosity * rho_E[k] / c.vacuum_permittivity;

    Tridiagonal A(static_cast<size_t>(n));
    double corner_upper = 0.0, corner_lower = 0.0;
    for (int f = 1; f < n; ++f) {
        const double ce = harmonic_mean(eps_r[f - 1], eps_r[f]) * inv_dx2;
        A.diag[f - 1] += ce;
        A.upper[f - 1] -= ce;
        A.diag[f] += ce;
        A.lower[f] -= ce;
    }

    bool anchored = false;
    if (bc.periodic()) {
        const double ce = harmonic_mean(eps_r[n - 1], eps_r[0]) * inv_dx2;
        A.diag[0] += ce;
        A.diag[n - 1] += ce;
        corner_upper = -ce; // row 0 <- cell n-1
        corner_lower = -ce; // row n-1 <- cell 0
    } else {
        if (bc.left.type == BCType::Dirichlet) {
            const double ce = 2.0 * eps_r[0] * inv_dx2; // half-cell spacing to the wall value
            A.diag[0] += ce;
            b[0] += ce * bc.left.value;
            anchored = true;
        }
        if (bc.right.type == BCType::Dirichlet) {
            const double ce = 2.0 * eps_r[n - 1] * inv_dx2;
            A.diag[n - 1] += ce;
            b[n - 1] += ce * bc.right.value;
            anchored = true;
        }
    }

    std::vector<double> phi;
    if (anchored) {
        phi = solve_tridiagonal(A, b);
        // one iterative-refinement pass keeps the verified residual far below tolerance
        std::vector<double> r(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) {
            double ax = A.diag[k] * phi[k];
            if (k > 0) ax += A.lower[k] * phi[k - 1];
            if (k + 1 < n) ax += A.upper[k] * phi[k + 1];
            r[k] = b[k] - ax;
        }
        const std::vector<double> d = solve_tridiagonal(A, r);
        for (int k = 0; k < n; ++k) phi[k] += d[k];
    } else {
        // No potential anchor anywhere: the operator has a constant null space,
        // so the source must integrate to zero and the gauge is fixed afterwards.
        double total = 0.0, scale = 0.0;
        for (int k = 0; k < n; ++k) {
            total += b[k];
            scale += std::abs(b[k]);
        }
        if (std::abs(total) > 1e-10 * scale)
            throw SolverError("potential solve: net charge with no potential anchor (insulating or periodic ends "
                              "require an exactly neutral source)");
        // Pin cell 0 at zero, solve the reduced system, then shift to zero mean.
        Tridiagonal R(static_cast<size_t>(n - 1));
        std::vector<double> br(static_cast<size_t>(n - 1));
        for (int k = 1; k < n; ++k) {
            R.diag[k - 1] = A.diag[k];
            if (k > 1) R.lower[k - 1] = A.lower[k];
            if (k + 1 < n) R.upper[k - 1] = A.upper[k];
            br[k - 1] = b[k]; // couplings to the pinned cell multiply phi_0 = 0
        }
        const std::vector<double> red = solve_tridiagonal(R, br);
        phi.assign(static_cast<size_t>(n), 0.0);
        for (int k = 1; k < n; ++k) phi[k] = red[k - 1];
        double mean = 0.0;
        for (int k = 0; k < n; ++k) mean += phi[k];
        mean /= n;
        for (int k = 0; k < n; ++k) phi[k] -= mean;
    }

    const double res_inf = tridiagonal_residual_inf(A, corner_upper, corner_lower, phi, b);
    double b_inf = 0.0, a_inf = 0.0, phi_inf = 0.0;
    for (int k = 0; k < n; ++k) {
        b_inf = std::max(b_inf, std::abs(b[k]));
        phi_inf = std::max(phi_inf, std::abs(phi[k]));
        double row = std::abs(A.diag[k]) + std::abs(A.lower[k]) + std::abs(A.upper[k]);
        if (k == 0) row += std::abs(corner_upper);
        if (k == n - 1) row += std::abs(corner_lower);
        a_inf = std::max(a_inf, row);
    }
    const double denom = std::max(b_inf, a_inf * phi_inf);
    const double rel = denom > 0.0 ? res_inf / denom : (res_inf > 0.0 ? 1.0 : 0.0);
    if (!(rel <= 1e-12))
        throw SolverError("potential solve: residual " + std::to_string(rel) + " exceeds 1e-12");
    return {std::move(phi), rel};
}

// ---------------------------------------------------------------------------
// Transport
// ---------------------------------------------------------------------------

namespace {

struct FaceCoef {
    double a = 0.0; // multiplies the left/upwind unknown
    double b = 0.0; // multiplies the right unknown (with a minus sign in the flux)
};

// Two-point face flux F = a u_left - b u_right for flux density
// -D (du/dx + u dchi/dx) + u v. `exponent` is the potential part of dchi
// integrated across the face (drift is folded in here).
FaceCoef face_coefficients(FluxScheme scheme, double D, double h, double v_face, double exponent) {
    if (D <= 0.0) return {std::max(v_face, 0.0), std::max(-v_face, 0.0)};
    const double dchi = exponent - v_face * h / D;
    if (scheme == FluxScheme::ExponentialFitted)
        return {(D / h) * bernoulli_weight(dchi), (D / h) * bernoulli_weight(-dchi)};
    return {(D / h) * (1.0 - 0.5 * dchi), (D / h) * (1.0 + 0.5 * dchi)};
}

bool domain_periodic(const Problem& prob) { return prob.phi_bc.periodic(); }

// Face-centered velocities; walls are closed (zero) unless the domain wraps.
std::vector<double> face_velocities(const Grid1D& grid, std::span<const double> v, bool periodic) {
    const int n = grid.n_cells;
    std::vector<double> vf(static_cast<size_t>(n) + 1, 0.0);
    for (int f = 1; f < n; ++f) vf[f] = 0.5 * (v[f - 1] + v[f]);
    if (periodic) {
        const double wrap = 0.5 * (v[n - 1] + v[0]);
        vf[0] = wrap;
        vf[n] = wrap;
    }
    return vf;
}

} // namespace

void transport_step(const Problem& prob, const MixtureState& base, MixtureState& out,
                    std::span<const double> phi, double dt) {
    const int n = prob.grid.n_cells;
    const int L = prob.n_species();
    const double dx = prob.grid.dx();
    const double theta = prob.porosity();
    const double kB = prob.constants.boltzmann;
    const double qe = prob.constants.elementary_charge;
    const bool periodic = domain_periodic(prob);
    const int threads = thread_cap_from_env();

    if (static_cast<int>(prob.species_bcs.size()) != L)
        throw ConfigError("transport: one boundary condition per species is required");
    for (int l = 0; l + 1 < L; ++l)
        if (prob.species_bcs[l].periodic() != periodic)
            throw ConfigError("transport: periodic ends must apply to every field or none");

    // Solvent reference potential and log-density, used by the general model's
    // face exponents; evaluated on the current iterate carried by `out`.
    std::vector<double> g_solv, ln_rho;
    if (prob.model == ModelKind::General) {
        const Species& sv = prob.species[L - 1];
        g_solv.resize(static_cast<size_t>(n));
        ln_rho.resize(static_cast<size_t>(n));
        parallel_for(static_cast<size_t>(n), threads, [&](size_t lo, size_t hi) {
            for (size_t k = lo; k < hi; ++k) {
                const int kk = static_cast<int>(k);
                g_solv[k] = (kB * out.T[k] / sv.mass) * (prob.betas[L - 1] + std::log(clamp_fraction(out.y_at(kk, L - 1)))) +
                            (qe * sv.valency / sv.mass) * phi[k];
                ln_rho[k] = std::log(out.rho[k]);
            }
        });
    }

    const std::vector<double> vf = face_velocities(prob.grid, out.v, periodic);

    // Boundary solvent fractions for the general model: close against the
    // prescribed solute values when every solute has one, else the wall cell.
    auto boundary_solvent_fraction = [&](bool left) {
        const int cell = left ? 0 : n - 1;
        double sum = 0.0;
        for (int l = 0; l + 1 < L; ++l) {
            const BoundaryCondition& side = left ? prob.species_bcs[l].left : prob.species_bcs[l].right;
            if (side.type != BCType::Dirichlet) return out.y_at(cell, L - 1);
            sum += side.value;
        }
        return std::max(1.0 - sum, fraction_floor);
    };
    const double y_solv_left = (prob.model == ModelKind::General) ? boundary_solvent_fraction(true) : 0.0;
    const double y_solv_right = (prob.model == ModelKind::General) ? boundary_solvent_fraction(false) : 0.0;

    for (int l = 0; l + 1 < L; ++l) {
        const Species& sp = prob.species[l];
        const FieldBC& sbc = prob.species_bcs[l];
        const double D = sp.diffusivity;
        const double z = sp.valency;
        const double m = sp.mass;
        const double beta = prob.betas[l];

        // potential part of the face exponent between two sampled points
        auto exponent_between = [&](double T_a, double T_b, double phi_a, double phi_b, double gs_a, double gs_b,
                                    double lnr_a, double lnr_b) {
            const double T_bar = 0.5 * (T_a + T_b);
            if (prob.model == ModelKind::General) {
                const double g_a = (kB * T_a / m) * beta + (qe * z / m) * phi_a - gs_a;
                const double g_b = (kB * T_b / m) * beta + (qe * z / m) * phi_b - gs_b;
                return (m / (kB * T_bar)) * (g_b - g_a) - (lnr_b - lnr_a);
            }
            return qe * z * (phi_b - phi_a) / (kB * T_bar);
        };

        std::vector<FaceCoef> face(static_cast<size_t>(n) + 1);
        parallel_for(static_cast<size_t>(n) - 1, threads, [&](size_t lo, size_t hi) {
            for (size_t i = lo; i < hi; ++i) {
                const int f = static_cast<int>(i) + 1; // face between cells f-1 and f
                const double ex = prob.model == ModelKind::General
                                      ? exponent_between(out.T[f - 1], out.T[f], phi[f - 1], phi[f],
                                                         g_solv[f - 1], g_solv[f], ln_rho[f - 1], ln_rho[f])
                                      : exponent_between(out.T[f - 1], out.T[f], phi[f - 1], phi[f], 0, 0, 0, 0);
                face[f] = face_coefficients(prob.numerics.scheme, D, dx, vf[f], ex);
            }
        });

        Tridiagonal A(static_cast<size_t>(n));
        std::vector<double> rhs(static_cast<size_t>(n));
        double corner_upper = 0.0, corner_lower = 0.0;
        for (int k = 0; k < n; ++k) {
            A.diag[k] = theta / dt + (face[k + 1].a + face[k].b) / dx;
            if (k + 1 < n) A.upper[k] = -face[k + 1].b / dx;
            if (k > 0) A.lower[k] = -face[k].a / dx;
            rhs[k] = (theta / dt) * base.rho[k] * base.y_at(k, l);
        }

        if (periodic) {
            const double ex = exponent_between(out.T[n - 1], out.T[0], phi[n - 1], phi[0],
                                               prob.model == ModelKind::General ? g_solv[n - 1] : 0,
                                               prob.model == ModelKind::General ? g_solv[0] : 0,
                                               prob.model == ModelKind::General ? ln_rho[n - 1] : 0,
                                               prob.model == ModelKind::General ? ln_rho[0] : 0);
            const FaceCoef w = face_coefficients(prob.numerics.scheme, D, dx, vf[0], ex);
            A.diag[n - 1] += w.a / dx;
            A.diag[0] += w.b / dx;
            corner_lower = -w.b / dx; // row n-1 <- cell 0
            corner_upper = -w.a / dx; // row 0 <- cell n-1
        } else {
            if (sbc.left.type == BCType::Dirichlet) {
                const double h = 0.5 * dx;
                const double phi_b = prob.phi_bc.left.type == BCType::Dirichlet ? prob.phi_bc.left.value : phi[0];
                const double gs_b = prob.model == ModelKind::General
                                        ? (kB * out.T[0] / prob.species[L - 1].mass) *
                                                  (prob.betas[L - 1] + std::log(clamp_fraction(y_solv_left))) +
                                              (qe * prob.species[L - 1].valency / prob.species[L - 1].mass) * phi_b
                                        : 0.0;
                const double ex = exponent_between(out.T[0], out.T[0], phi_b, phi[0], gs_b,
                                                   prob.model == ModelKind::General ? g_solv[0] : 0.0,
                                                   prob.model == ModelKind::General ? ln_rho[0] : 0.0,
                                                   prob.model == ModelKind::General ? ln_rho[0] : 0.0);
                const FaceCoef w = face_coefficients(prob.numerics.scheme, D, h, out.v[0], ex);
                A.diag[0] += w.b / dx;
                rhs[0] += (w.a / dx) * out.rho[0] * sbc.left.value;
            }
            if (sbc.right.type == BCType::Dirichlet) {
                const double h = 0.5 * dx;
                const double phi_b = prob.phi_bc.right.type == BCType::Dirichlet ? prob.phi_bc.right.value : phi[n - 1];
                const double gs_b = prob.model == ModelKind::General
                                        ? (kB * out.T[n - 1] / prob.species[L - 1].mass) *
                                                  (prob.betas[L - 1] + std::log(clamp_fraction(y_solv_right))) +
                                              (qe * prob.species[L - 1].valency / prob.species[L - 1].mass) * phi_b
                                        : 0.0;
                const double ex = exponent_between(out.T[n - 1], out.T[n - 1], phi[n - 1], phi_b,
                                                   prob.model == ModelKind::General ? g_solv[n - 1] : 0.0, gs_b,
                                                   prob.model == ModelKind::General ? ln_rho[n - 1] : 0.0,
                                                   prob.model == ModelKind::General ? ln_rho[n - 1] : 0.0);
                const FaceCoef w = face_coefficients(prob.numerics.scheme, D, h, out.v[n - 1], ex);
                A.diag[n - 1] += w.a / dx;
                rhs[n - 1] += (w.b / dx) * out.rho[n - 1] * sbc.right.value;
            }
            // NoFlux walls contribute nothing: the face flux is identically zero.
        }

        std::vector<double> u = periodic ? solve_cyclic_tridiagonal(A, corner_upper, corner_lower, rhs)
                                         : solve_tridiagonal(A, rhs);

        double umin = u[0], umax = u[0];
        for (int k = 1; k < n; ++k) {
            umin = std::min(umin, u[k]);
            umax = std::max(umax, u[k]);
        }
        if (umin < -1e-12 * std::max(1.0, umax)) {
            std::ostringstream msg;
            msg << "transport: positivity lost for species '" << sp.name << "' (min partial density " << umin << ")";
            throw SolverError(msg.str());
        }
        for (int k = 0; k < n; ++k) out.y_at(k, l) = std::max(u[k], 0.0) / out.rho[k];
    }

    // solvent closure
    for (int k = 0; k < n; ++k) {
        double sum = 0.0;
        for (int l = 0; l + 1 < L; ++l) sum += out.y_at(k, l);
        const double y_solv = 1.0 - sum;
        if (y_solv < -1e-8) {
            std::ostringstream msg;
            msg << "transport: solute fractions exceed one at cell " << k << " (solvent closure " << y_solv << ")";
            throw SolverError(msg.str());
        }
        out.y_at(k, L - 1) = std::max(y_solv, fraction_floor);
        std::span<double> row{out.y.data() + static_cast<size_t>(k) * static_cast<size_t>(L), static_cast<size_t>(L)};
        renormalize_fractions(row);
    }
}

// ---------------------------------------------------------------------------
// Reactions
// ---------------------------------------------------------------------------

void reaction_substep(const Problem& prob, MixtureState& s, double dt) {
    if (prob.network.empty() || dt == 0.0) return;
    const int n = s.grid.n_cells;
    const int L = prob.n_species();
    const int threads = thread_cap_from_env();

    std::mutex fail_mutex;
    std::string fail_message;

    parallel_for(static_cast<size_t>(n), threads, [&](size_t lo, size_t hi) {
        std::vector<double> y0(static_cast<size_t>(L)), yw(static_cast<size_t>(L)), yc(static_cast<size_t>(L));
        std::vector<double> k1, k2, k3, k4;
        auto slopes = [&](const std::vector<double>& yv, double rho) {
            for (int l = 0; l < L; ++l) yc[l] = clamp_fraction(yv[l]);
            std::vector<double> r = mass_production_rates(prob.network, prob.species, yc);
            for (int l = 0; l < L; ++l) r[l] /= rho;
            return r;
        };
        try {
            for (size_t k = lo; k < hi; ++k) {
                const int kk = static_cast<int>(k);
                const double rho = s.rho[k];
                for (int l = 0; l < L; ++l) y0[l] = s.y_at(kk, l);

                long substeps = std::max(1, prob.numerics.reaction_substeps);
                bool done = false;
                for (int doubling = 0; doubling <= 16 && !done; ++doubling, substeps *= 2) {
                    yw = y0;
                    const double h = dt / static_cast<double>(substeps);
                    bool ok = true;
                    for (long stp = 0; stp < substeps && ok; ++stp) {
                        k1 = slopes(yw, rho);
                        std::vector<double> ytmp(static_cast<size_t>(L));
                        for (int l = 0; l < L; ++l) ytmp[l] = yw[l] + 0.5 * h * k1[l];
                        k2 = slopes(ytmp, rho);
                        for (int l = 0; l < L; ++l) ytmp[l] = yw[l] + 0.5 * h * k2[l];
                        k3 = slopes(ytmp, rho);
                        for (int l = 0; l < L; ++l) ytmp[l] = yw[l] + h * k3[l];
                        k4 = slopes(ytmp, rho);
                        for (int l = 0; l < L; ++l) {
                            const double dy = (h / 6.0) * (k1[l] + 2.0 * k2[l] + 2.0 * k3[l] + k4[l]);
                            if (std::abs(dy) > 0.1) ok = false;
                            yw[l] += dy;
                            if (yw[l] < -1e-12) ok = false;
                        }
                    }
                    if (ok) done = true;
                }
                if (!done) {
                    std::lock_guard<std::mutex> g(fail_mutex);
                    if (fail_message.empty())
                        fail_message = "reaction step too stiff at cell " + std::to_string(kk) +
                                       " (substep doubling limit reached)";
                    return;
                }
                for (int l = 0; l < L; ++l) s.y_at(kk, l) = yw[l];
                std::span<double> row{s.y.data() + k * static_cast<size_t>(L), static_cast<size_t>(L)};
                renormalize_fractions(row);
            }
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> g(fail_mutex);
            if (fail_message.empty()) fail_message = e.what();
        }
    });

    if (!fail_message.empty()) throw SolverError(fail_message);
}

// ---------------------------------------------------------------------------
// Velocity closure and density advection
// ---------------------------------------------------------------------------

std::vector<double> darcy_velocity(const Grid1D& grid, std::span<const double> p, std::span<const double> rho_E,
                                   std::span<const double> E, double permeability, double viscosity,
                                   bool project_to_mean) {
    const int n = grid.n_cells;
    if (viscosity <= 0.0) throw ConfigError("Darcy closure requires a positive viscosity");
    const std::vector<double> dp = centered_gradient(grid, p, false);
    std::vector<double> v(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) v[k] = (permeability / viscosity) * (-dp[k] + rho_E[k] * E[k]);
    if (project_to_mean) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= n;
        std::fill(v.begin(), v.end(), mean);
    }
    return v;
}

namespace {

void apply_velocity_closure(const Problem& prob, MixtureState& s) {
    const int n = prob.grid.n_cells;
    switch (prob.velocity.kind) {
    case VelocityClosure::Kind::Rest:
        std::fill(s.v.begin(), s.v.end(), 0.0);
        break;
    case VelocityClosure::Kind::Prescribed:
        if (static_cast<int>(prob.velocity.prescribed.size()) != n)
            throw ConfigError("prescribed velocity profile size does not match the grid");
        s.v = prob.velocity.prescribed;
        break;
    case VelocityClosure::Kind::Darcy: {
        const DerivedFields d = derived_fields(s, prob.species, prob.constants);
        std::vector<double> E = centered_gradient(prob.grid, s.phi, domain_periodic(prob));
        for (double& x : E) x = -x;
        s.v = darcy_velocity(prob.grid, s.p, d.rho_E, E, prob.material.permeability, prob.material.darcy_viscosity,
                             true);
        break;
    }
    }
}

// Backward-Euler upwind advection of the total density by the closed velocity
// field (no-flux walls, or wrap-around when the domain is periodic).
void advect_density(const Problem& prob, MixtureState& s, double dt) {
    const int n = prob.grid.n_cells;
    const double dx = prob.grid.dx();
    const double theta = prob.porosity();
    const bool periodic = domain_periodic(prob);
    const std::vector<double> vf = face_velocities(prob.grid, s.v, periodic);
    if (std::all_of(vf.begin(), vf.end(), [](double x) { return x == 0.0; })) return;

    Tridiagonal A(static_cast<size_t>(n));
    std::vector<double> rhs(static_cast<size_t>(n));
    auto up = [](double v) { return std::max(v, 0.0); };
    auto dn = [](double v) { return std::max(-v, 0.0); };
    for (int k = 0; k < n; ++k) {
        double a_right = (k + 1 < n || periodic) ? up(vf[k + 1]) : 0.0;
        double b_left = (k > 0 || periodic) ? dn(vf[k]) : 0.0;
        A.diag[k] = theta / dt + (a_right + b_left) / dx;
        if (k + 1 < n) A.upper[k] = -dn(vf[k + 1]) / dx;
        if (k > 0) A.lower[k] = -up(vf[k]) / dx;
        rhs[k] = (theta / dt) * s.rho[k];
    }
    double corner_upper = 0.0, corner_lower = 0.0;
    if (periodic) {
        corner_upper = -up(vf[0]) / dx; // row 0 <- cell n-1 (inflow through the wrap face)
        corner_lower = -dn(vf[0]) / dx; // row n-1 <- cell 0
    }
    std::vector<double> rho = periodic ? solve_cyclic_tridiagonal(A, corner_upper, corner_lower, rhs)
                                       : solve_tridiagonal(A, rhs);
    for (int k = 0; k < n; ++k) {
        if (!(rho[k] > 0.0)) throw SolverError("density advection produced a nonpositive density");
    }
    s.rho = std::move(rho);
}

struct GummelOutcome {
    int iterations = 0;
    double poisson_residual = 0.0;
};

std::vector<double> charge_density(const Problem& prob, const MixtureState& s) {
    return derived_fields(s, prob.species, prob.constants).rho_E;
}

// Fixed-point sweep between the potential and the transported composition.
// `base` carries the start-of-step composition (the backward-Euler data);
// `s` carries the advected density and receives the converged composition and
// potential. Convergence is measured on the potential update, plus the
// composition update for the general model whose face exponents depend on it.
GummelOutcome gummel_solve(const Problem& prob, const MixtureState& base, MixtureState& s, double dt) {
    GummelOutcome out;
    PoissonResult pr = solve_poisson(prob.grid, charge_density(prob, s), prob.eps_r, prob.phi_bc, prob.constants,
                                     prob.porosity());
    std::vector<double> phi = std::move(pr.phi);
    out.poisson_residual = pr.residual;

    std::vector<double> y_prev = s.y;
    for (int it = 1; it <= prob.numerics.gummel_max_iter; ++it) {
        transport_step(prob, base, s, phi, dt);
        PoissonResult next = solve_poisson(prob.grid, charge_density(prob, s), prob.eps_r, prob.phi_bc,
                                           prob.constants, prob.porosity());
        out.poisson_residual = std::max(out.poisson_residual, next.residual);
        double dphi = 0.0;
        for (int k = 0; k < prob.grid.n_cells; ++k) dphi = std::max(dphi, std::abs(next.phi[k] - phi[k]));
        phi = std::move(next.phi);

        double dy = 0.0;
        if (prob.model == ModelKind::General) {
            for (size_t i = 0; i < s.y.size(); ++i) dy = std::max(dy, std::abs(s.y[i] - y_prev[i]));
            y_prev = s.y;
        }

        out.iterations = it;
        if (dphi <= prob.numerics.gummel_tol && dy <= prob.numerics.gummel_tol) {
            s.phi = std::move(phi);
            return out;
        }
    }
    throw SolverError("self-consistent potential iteration did not converge in " +
                      std::to_string(prob.numerics.gummel_max_iter) + " sweeps");
}

void single_step(const Problem& prob, MixtureState& s, double dt, AdvanceReport& rep) {
    if (!prob.network.empty()) reaction_substep(prob, s, 0.5 * dt);
    apply_velocity_closure(prob, s);
    const MixtureState base = s; // backward-Euler data: post-reaction, pre-advection
    advect_density(prob, s, dt);
    const GummelOutcome g = gummel_solve(prob, base, s, dt);
    rep.gummel_iterations = std::max(rep.gummel_iterations, g.iterations);
    rep.poisson_residual = std::max(rep.poisson_residual, g.poisson_residual);
    if (!prob.network.empty()) reaction_substep(prob, s, 0.5 * dt);
    s.time += dt;
}

void advance_impl(const Problem& prob, MixtureState& s, double dt, int depth, AdvanceReport& rep) {
    MixtureState trial = s;
    try {
        single_step(prob, trial, dt, rep);
    } catch (const SolverError& e) {
        if (depth >= prob.numerics.max_dt_halvings)
            throw SolverError("time step rejected at the halving floor (dt = " + std::to_string(dt) +
                              "): " + e.what());
        rep.dt_halvings = std::max(rep.dt_halvings, depth + 1);
        advance_impl(prob, s, 0.5 * dt, depth + 1, rep);
        advance_impl(prob, s, 0.5 * dt, depth + 1, rep);
        return;
    }
    s = std::move(trial);
}

} // namespace

AdvanceReport advance(const Problem& prob, MixtureState& s, double dt) {
    if (!(dt > 0.0)) throw ConfigError("advance requires a positive time step");
    AdvanceReport rep;
    advance_impl(prob, s, dt, 0, rep);
    return rep;
}

SteadyReport steady_state(const Problem& prob, MixtureState& s) {
    SteadyReport rep;
    const double dt = prob.numerics.dt;
    for (int step = 1; step <= prob.numerics.max_steps; ++step) {
        const std::vector<double> y0 = s.y;
        const std::vector<double> phi0 = s.phi;
        const std::vector<double> rho0 = s.rho;
        advance(prob, s, dt);
        double d = 0.0;
        for (size_t i = 0; i < y0.size(); ++i) d = std::max(d, std::abs(s.y[i] - y0[i]));
        for (size_t i = 0; i < phi0.size(); ++i) d = std::max(d, std::abs(s.phi[i] - phi0[i]));
        for (size_t i = 0; i < rho0.size(); ++i) d = std::max(d, std::abs(s.rho[i] - rho0[i]));
        rep.steps = step;
        rep.residual = d / dt;
        rep.history.push_back(rep.residual);
        if (rep.residual <= prob.numerics.steady_tol) {
            rep.converged = true;
            break;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Reduced-model assumption checks
// ---------------------------------------------------------------------------

std::vector<std::string> model_assumption_warnings(const Problem& prob, const MixtureState& s) {
    std::vector<std::string> warnings;
    if (prob.model == ModelKind::General) return warnings;
    const int n = s.grid.n_cells;
    const int L = prob.n_species();
    const double rel = 1e-9;

    double t_min = s.T[0], t_max = s.T[0], r_min = s.rho[0], r_max = s.rho[0], solute_max = 0.0;
    for (int k = 0; k < n; ++k) {
        t_min = std::min(t_min, s.T[k]);
        t_max = std::max(t_max, s.T[k]);
        r_min = std::min(r_min, s.rho[k]);
        r_max = std::max(r_max, s.rho[k]);
        double sum = 0.0;
        for (int l = 0; l + 1 < L; ++l) sum += s.y_at(k, l);
        solute_max = std::max(solute_max, sum);
    }

    std::ostringstream msg;
    if (t_max - t_min > rel * std::abs(t_max)) {
        msg << "PNP1: reduced model assumes an isothermal mixture, but T spans [" << t_min << ", " << t_max << "]";
        warnings.push_back(msg.str());
        msg.str("");
    }
    if (r_max - r_min > rel * std::abs(r_max)) {
        msg << "PNP2: reduced model assumes a uniform total density, but rho spans [" << r_min << ", " << r_max
            << "]";
        warnings.push_back(msg.str());
        msg.str("");
    }
    const Species& solvent = prob.species[L - 1];
    if (solvent.valency != 0) {
        msg << "PNP3: reduced model assumes a neutral solvent, but '" << solvent.name << "' has valency "
            << solvent.valency;
        warnings.push_back(msg.str());
        msg.str("");
    }
    for (int j = 0; j < prob.network.n_reactions; ++j) {
        if (prob.network.s(L - 1, j) != 0) {
            msg << "PNP4: reduced model assumes a nonreactive solvent, but '" << solvent.name
                << "' participates in reaction " << j;
            warnings.push_back(msg.str());
            break;
        }
    }
    if (solute_max > 0.1) {
        msg << "PNP5: reduced model assumes dilute solutes, but the solute fraction sum reaches " << solute_max;
        warnings.push_back(msg.str());
        msg.str("");
    }
    return warnings;
}

} // namespace elk
