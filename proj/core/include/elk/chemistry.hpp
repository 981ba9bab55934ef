#pragma once

#include <span>
#include <string>
#include <vector>

namespace elk {

// Mole fractions are clamped to this floor before any log or power so that
// near-depleted species stay finite; see clamp_fraction().
inline constexpr double fraction_floor = 1e-30;

inline double clamp_fraction(double y) { return y < fraction_floor ? fraction_floor : y; }

struct Species {
    std::string name;
    double mass = 0.0;         // molecular mass m_l [kg]
    int valency = 0;           // charge number z_l
    double diffusivity = 0.0;  // D_l [m^2/s]
    bool solvent = false;      // exactly one species, listed last
};

// Stoichiometry S is L x J (row per species, column per reaction), integer
// entries: negative = consumed by the forward direction, positive = produced.
struct ReactionNetwork {
    int n_species = 0;
    int n_reactions = 0;
    std::vector<int> stoich;  // row-major, stoich[l * n_reactions + j]
    std::vector<double> k_forward;
    std::vector<double> k_backward;

    int s(int l, int j) const { return stoich[static_cast<size_t>(l * n_reactions + j)]; }
    double equilibrium_constant(int j) const {
        return k_forward[static_cast<size_t>(j)] / k_backward[static_cast<size_t>(j)];
    }
    bool empty() const { return n_reactions == 0; }

    static ReactionNetwork none(int n_species) {
        ReactionNetwork net;
        net.n_species = n_species;
        return net;
    }
};

// One failed admissibility criterion. `criterion` names which rule broke
// ("shape", "rate-positivity", "mass", "charge", "rank"); `reaction` is the
// offending column or -1 when the issue is not column-specific.
struct NetworkIssue {
    std::string criterion;
    int reaction = -1;
    std::string message;
};

// Evaluate every admissibility criterion; returns all violations (empty means
// admissible). Mass/charge balances are weighted sums tested at 1e-12 relative
// to the sum of their term magnitudes; the rank test is exact integer
// arithmetic (fraction-free elimination).
std::vector<NetworkIssue> network_criteria(const ReactionNetwork& net, std::span<const double> masses,
                                           std::span<const double> valencies);

// Throws ConfigError listing every violated criterion.
void validate_network(std::span<const Species> species, const ReactionNetwork& net);

// Rank of the stoichiometry matrix over the integers (Bareiss fraction-free
// elimination; no floating-point tolerance involved).
int stoichiometry_rank(const ReactionNetwork& net);

// Mixing-scale coefficients beta_l: the minimum-norm solution of
// S^T beta = (-ln K_1, ..., -ln K_J), via the J x J Gram system with one
// iterative-refinement pass. Requires rank(S) == J; L == n_species entries.
// An empty network yields all zeros.
std::vector<double> solve_betas(const ReactionNetwork& net);

// Net forward mass-action rates R_j = kf_j prod_{s<0} y^{-s} - kb_j prod_{s>0} y^s.
// Any y_l <= 0 is a domain error; callers clamp first (see clamp_fraction).
std::vector<double> reaction_rates(const ReactionNetwork& net, std::span<const double> y);

// Species mass production r_l = m_l sum_j s_lj R_j. Sums to zero over species
// by the mass criterion; the charge-weighted sum vanishes likewise.
std::vector<double> mass_production_rates(const ReactionNetwork& net, std::span<const Species> species,
                                          std::span<const double> y);

// Per-reaction distance from chemical equilibrium: | prod_l y_l^{s_lj} - K_j |.
std::vector<double> equilibrium_residual(const ReactionNetwork& net, std::span<const double> y);

} // namespace elk
