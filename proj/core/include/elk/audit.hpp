#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "elk/constitutive.hpp"
#include "elk/solvers.hpp"
#include "elk/state.hpp"

namespace elk {

// The auditor re-derives every budget from the primitive fields with centered
// differences (one-sided second order at non-periodic ends) and pointwise
// algebra, sharing nothing with the time steppers. Each entropy-production
// representation is assembled independently from its own definition, so their
// agreement -- and the sign of every dissipation channel -- is evidence about
// the computed state, not an arithmetic tautology.

// Per-cell budget terms. All productions are volumetric densities; fluxes are
// 1-D components.
struct EntropyCellTerms {
    // electrochemical representation (potentials include the electric part)
    std::vector<double> electrothermal;  // -(1/T^2) dT (q + phi i)
    std::vector<double> viscous;         // (1/T) tau dv
    std::vector<double> thermo_mixing;   // -sum_l d(chibar_l/T) j_l
    std::vector<double> ec_reaction;     // -sum_l (chibar_l/T) r_l
    std::vector<double> total_ec;

    // chemical representation (electric work appears as an explicit Joule term)
    std::vector<double> heat;               // -(1/T^2) dT q
    std::vector<double> chemical_mixing;    // -sum_l d(chi_l/T) j_l
    std::vector<double> chemical_reaction;  // -sum_l (chi_l/T) r_l
    std::vector<double> joule;              // E i / T
    std::vector<double> total_chem;

    // pure-substance / mixing split
    std::vector<double> diss_pure;
    std::vector<double> diss_mix_ec;
    std::vector<double> diss_mix_chem;
    std::vector<double> total_split;  // diss_pure + diss_mix_ec + joule

    // entropic-flux representation (temperature gradient against the entropy flux)
    std::vector<double> total_entropic;

    // sign-definite decomposition
    std::vector<double> fourier;         // kappa |dT|^2 / T^2
    std::vector<double> diffusion;       // quadratic form in the mixing-potential gradients
    std::vector<double> mix_reaction;    // -sum_l (chi_mix_l/T) r_l
    std::vector<double> pure_reaction;   // vanishes: species-independent potential, zero-sum rates
    std::vector<double> pure_diffusion;  // vanishes: zero-sum mass fluxes

    // entropy fluxes
    std::vector<double> flux_ec;        // (q + phi i)/T - sum (chibar_l/T) j_l
    std::vector<double> flux_chem;      // q/T - sum (chi_l/T) j_l  (identical to flux_ec)
    std::vector<double> flux_pure;
    std::vector<double> flux_mix_ec;
    std::vector<double> flux_mix_chem;

    // shared primitives kept for reports
    std::vector<double> heat_flux;  // q
    std::vector<double> current;    // i
    std::vector<double> tolerance;  // per-cell audit scale

    // 1 where dT * flux_ec > 0 beyond the audit scale (entropy flowing up the
    // temperature gradient; recorded, not enforced)
    std::vector<std::uint8_t> counter_thermal_flux;
};

struct EntropyViolation {
    std::string check;  // sign checks: "fourier", "diffusion", "viscous",
                        // "mixing-reaction", "total"; identity checks:
                        // "form-equivalence", "split-equivalence",
                        // "entropic-form-equivalence", "decomposition-equivalence",
                        // "mixing-form-equivalence", "flux-equivalence",
                        // "pure-diffusion-vanishes", "pure-reaction-vanishes"
    int cell = -1;
    double value = 0.0;
    double tolerance = 0.0;
};

struct EntropyBudget {
    EntropyCellTerms cells;
    // domain integrals (cell sums times dx)
    double integral_total_ec = 0.0;
    double integral_total_chem = 0.0;
    double integral_fourier = 0.0;
    double integral_diffusion = 0.0;
    double integral_viscous = 0.0;
    double integral_mix_reaction = 0.0;
    double integral_joule = 0.0;
    double min_total_ec = 0.0;          // most negative cell value
    int counter_thermal_cells = 0;      // cells with the counter_thermal_flux flag set
    std::vector<EntropyViolation> violations;

    bool pass() const { return violations.empty(); }
};

// Evaluate the full entropy budget of a state. The per-cell tolerance is
// 1e-12 times the magnitude sum of every addend entering any representation,
// taken before the sums cancel; rounding in the cross-form identities scales
// with those raw addends (large electric and pure-substance pieces regroup
// between forms), not with the net per-channel values.
EntropyBudget entropy_production(const Problem& prob, const MixtureState& s);

// Primitive fields + centered-difference gradients per cell, the common input
// of all audits (exposed for tests that want analytic cross-checks).
std::vector<LocalField> sample_fields(const Problem& prob, const MixtureState& s);

// ---- conservation ----

struct ConservationTotals {
    double time = 0.0;
    double mass = 0.0;        // integral of porosity * rho
    double charge = 0.0;      // integral of porosity * rho_E
    double abs_charge = 0.0;  // integral of porosity * sum_l |e z_l/m_l| rho_l (drift scale)
    std::vector<double> species_mass;
};

ConservationTotals conservation_totals(const Problem& prob, const MixtureState& s);

struct ConservationReport {
    bool closed = false;          // no Dirichlet species exchange anywhere
    double mass_drift = 0.0;      // max |m(t)-m(0)| / |m(0)|
    double charge_drift = 0.0;    // max |Q(t)-Q(0)| scaled by the absolute charge content
    std::vector<double> species_drift;          // per species, relative to its initial mass
    std::vector<std::uint8_t> species_conserved;  // expected to be constant (closed + nonreactive)
    std::vector<ConservationTotals> samples;
};

// Records totals after each step and reports the worst drifts. Drift bounds
// are only claims for closed quantities; open-system samples are still kept
// so reports can show the exchange.
class ConservationTracker {
  public:
    explicit ConservationTracker(const Problem& prob);
    void record(const MixtureState& s);
    ConservationReport report() const;

  private:
    const Problem* prob_;
    std::vector<ConservationTotals> samples_;
};

// ---- balance-law diagnostics ----

// Static momentum residual d/dx(rho v^2 + p - tau) - rho_E E; the discrete
// mechanical-equilibrium defect (zero at a Boltzmann double layer).
std::vector<double> momentum_residual(const Problem& prob, const MixtureState& s);

// Two-state version including the (rho v) time difference.
std::vector<double> momentum_residual(const Problem& prob, const MixtureState& before, const MixtureState& after);

// Total-energy balance residual between two states: time difference of
// rho(u_pure + u_mix) + rho_E phi + rho v^2/2 plus the divergence of
// (energy) v + q + phi i - tau v. For prescribed-temperature runs this
// converges to the heat exchanged with the thermostat, not to zero.
std::vector<double> first_law_residual(const Problem& prob, const MixtureState& before, const MixtureState& after);

// ---- time-reversal diagnostic ----

struct Trajectory {
    std::vector<MixtureState> states;

    void push(const MixtureState& s) { states.push_back(s); }
    size_t size() const { return states.size(); }
};

struct ReversalReport {
    double forward = 0.0;   // RMS residual of the transport law on the trajectory
    double reversed = 0.0;  // same functional on the time- and space-reflected trajectory
    double ratio = 1.0;     // reversed / forward
    bool defined = false;   // false when the trajectory carries no usable signal
};

// Reflect the trajectory in both time and space and re-test the transport
// law: advection survives the reflection (ratio near one), diffusion turns
// into its unstable mirror (ratio far above one). Uniform step spacing is
// required; at least three snapshots.
ReversalReport time_reversal_residual(const Problem& prob, const Trajectory& traj, int species_index);

} // namespace elk
