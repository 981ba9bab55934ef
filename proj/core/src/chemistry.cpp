#include "elk/chemistry.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>

#include "elk/errors.hpp"

namespace elk {

namespace {

// Fraction-free (Bareiss) elimination on an integer copy of S^T. Row echelon
// over the integers: the rank is exact, no pivot tolerance. Stoichiometric
// entries are small, so int64 intermediates are ample for L, J <= 16.
int integer_rank(const ReactionNetwork& net) {
    const int rows = net.n_reactions;  // eliminate on S^T: J x L
    const int cols = net.n_species;
    std::vector<int64_t> a(static_cast<size_t>(rows) * static_cast<size_t>(cols));
    for (int j = 0; j < rows; ++j)
        for (int l = 0; l < cols; ++l) a[static_cast<size_t>(j * cols + l)] = net.s(l, j);

    auto at = [&](int r, int c) -> int64_t& { return a[static_cast<size_t>(r * cols + c)]; };

    int rank = 0;
    int64_t prev = 1;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (at(r, c) != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        if (pivot != rank)
            for (int k = 0; k < cols; ++k) std::swap(at(pivot, k), at(rank, k));
        for (int r = rank + 1; r < rows; ++r) {
            for (int k = c + 1; k < cols; ++k)
                at(r, k) = (at(rank, c) * at(r, k) - at(r, c) * at(rank, k)) / prev;
            at(r, c) = 0;
        }
        prev = at(rank, c);
        ++rank;
    }
    return rank;
}

std::string join_messages(const std::vector<NetworkIssue>& issues) {
    std::ostringstream os;
    os << "reaction network rejected (" << issues.size() << " issue" << (issues.size() == 1 ? "" : "s") << "):";
    for (const auto& i : issues) os << "\n  [" << i.criterion << "] " << i.message;
    return os.str();
}

// Solve the J x J symmetric positive definite Gram system G w = rhs in place
// by Gaussian elimination with partial pivoting (J is tiny).
std::vector<double> solve_dense(std::vector<double> g, std::vector<double> rhs) {
    const int n = static_cast<int>(rhs.size());
    auto at = [&](int r, int c) -> double& { return g[static_cast<size_t>(r * n + c)]; };
    for (int c = 0; c < n; ++c) {
        int pivot = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(at(r, c)) > std::abs(at(pivot, c))) pivot = r;
        if (at(pivot, c) == 0.0) throw SolverError("beta solve: singular Gram matrix (rank-deficient stoichiometry)");
        if (pivot != c) {
            for (int k = 0; k < n; ++k) std::swap(at(pivot, k), at(c, k));
            std::swap(rhs[static_cast<size_t>(pivot)], rhs[static_cast<size_t>(c)]);
        }
        for (int r = c + 1; r < n; ++r) {
            const double f = at(r, c) / at(c, c);
            for (int k = c; k < n; ++k) at(r, k) -= f * at(c, k);
            rhs[static_cast<size_t>(r)] -= f * rhs[static_cast<size_t>(c)];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = rhs[static_cast<size_t>(r)];
        for (int k = r + 1; k < n; ++k) s -= at(r, k) * rhs[static_cast<size_t>(k)];
        rhs[static_cast<size_t>(r)] = s / at(r, r);
    }
    return rhs;
}

} // namespace

std::vector<NetworkIssue> network_criteria(const ReactionNetwork& net, std::span<const double> masses,
                                           std::span<const double> valencies) {
    std::vector<NetworkIssue> issues;
    const int L = net.n_species;
    const int J = net.n_reactions;

    if (L <= 0) {
        issues.push_back({"shape", -1, "network declares no species"});
        return issues;
    }
    if (net.stoich.size() != static_cast<size_t>(L) * static_cast<size_t>(J)) {
        issues.push_back({"shape", -1, "stoichiometry matrix is not n_species x n_reactions"});
        return issues;
    }
    if (net.k_forward.size() != static_cast<size_t>(J) || net.k_backward.size() != static_cast<size_t>(J)) {
        issues.push_back({"shape", -1, "rate vectors do not match the number of reactions"});
        return issues;
    }
    if (masses.size() != static_cast<size_t>(L) || valencies.size() != static_cast<size_t>(L)) {
        issues.push_back({"shape", -1, "mass/valency vectors do not match the number of species"});
        return issues;
    }
    if (J == 0) return issues;

    for (int j = 0; j < J; ++j) {
        if (!(net.k_forward[static_cast<size_t>(j)] > 0.0) || !(net.k_backward[static_cast<size_t>(j)] > 0.0))
            issues.push_back({"rate-positivity", j,
                              "reaction " + std::to_string(j) + " needs strictly positive forward and backward rates"});
        bool all_zero = true;
        for (int l = 0; l < L; ++l)
            if (net.s(l, j) != 0) all_zero = false;
        if (all_zero)
            issues.push_back({"shape", j, "reaction " + std::to_string(j) + " has an all-zero stoichiometry column"});
    }

    // Weighted balance criteria, tolerance relative to the term magnitudes so
    // the test is meaningful for kg-scale molecular masses.
    for (int j = 0; j < J; ++j) {
        double mass_sum = 0.0, mass_scale = 0.0;
        double charge_sum = 0.0, charge_scale = 0.0;
        for (int l = 0; l < L; ++l) {
            const double sm = masses[static_cast<size_t>(l)] * net.s(l, j);
            const double sz = valencies[static_cast<size_t>(l)] * net.s(l, j);
            mass_sum += sm;
            mass_scale += std::abs(sm);
            charge_sum += sz;
            charge_scale += std::abs(sz);
        }
        if (std::abs(mass_sum) > 1e-12 * std::max(mass_scale, 1e-300))
            issues.push_back({"mass", j,
                              "reaction " + std::to_string(j) + " does not conserve mass (weighted sum " +
                                  std::to_string(mass_sum / std::max(mass_scale, 1e-300)) + " relative)"});
        if (std::abs(charge_sum) > 1e-12 * std::max(charge_scale, 1e-300))
            issues.push_back({"charge", j,
                              "reaction " + std::to_string(j) + " does not conserve charge (weighted sum " +
                                  std::to_string(charge_sum) + ")"});
    }

    if (integer_rank(net) != J)
        issues.push_back({"rank", -1, "stoichiometry columns are linearly dependent (rank < number of reactions)"});

    return issues;
}

void validate_network(std::span<const Species> species, const ReactionNetwork& net) {
    std::vector<double> m(species.size()), z(species.size());
    for (size_t l = 0; l < species.size(); ++l) {
        m[l] = species[l].mass;
        z[l] = species[l].valency;
    }
    if (net.n_species != static_cast<int>(species.size()))
        throw ConfigError("reaction network species count does not match the species list");
    auto issues = network_criteria(net, m, z);
    if (!issues.empty()) throw ConfigError(join_messages(issues));
}

int stoichiometry_rank(const ReactionNetwork& net) { return integer_rank(net); }

std::vector<double> solve_betas(const ReactionNetwork& net) {
    const int L = net.n_species;
    const int J = net.n_reactions;
    std::vector<double> beta(static_cast<size_t>(L), 0.0);
    if (J == 0) return beta;
    if (integer_rank(net) != J)
        throw ConfigError("beta solve requires linearly independent reactions (rank == n_reactions)");

    std::vector<double> k(static_cast<size_t>(J));
    for (int j = 0; j < J; ++j) k[static_cast<size_t>(j)] = -std::log(net.equilibrium_constant(j));

    // Gram matrix G = S^T S (J x J); minimum-norm solution beta = S w with
    // G w = k, then one refinement pass to push the residual to rounding.
    std::vector<double> gram(static_cast<size_t>(J) * static_cast<size_t>(J), 0.0);
    for (int a = 0; a < J; ++a)
        for (int b = 0; b < J; ++b) {
            double s = 0;
            for (int l = 0; l < L; ++l) s += static_cast<double>(net.s(l, a)) * net.s(l, b);
            gram[static_cast<size_t>(a * J + b)] = s;
        }

    auto apply_st = [&](std::span<const double> b) {  // S^T b, length J
        std::vector<double> out(static_cast<size_t>(J), 0.0);
        for (int j = 0; j < J; ++j) {
            double s = 0;
            for (int l = 0; l < L; ++l) s += net.s(l, j) * b[static_cast<size_t>(l)];
            out[static_cast<size_t>(j)] = s;
        }
        return out;
    };

    std::vector<double> w = solve_dense(gram, k);
    for (int l = 0; l < L; ++l) {
        double s = 0;
        for (int j = 0; j < J; ++j) s += net.s(l, j) * w[static_cast<size_t>(j)];
        beta[static_cast<size_t>(l)] = s;
    }

    std::vector<double> res = apply_st(beta);
    for (int j = 0; j < J; ++j) res[static_cast<size_t>(j)] = k[static_cast<size_t>(j)] - res[static_cast<size_t>(j)];
    std::vector<double> dw = solve_dense(gram, res);
    for (int l = 0; l < L; ++l) {
        double s = 0;
        for (int j = 0; j < J; ++j) s += net.s(l, j) * dw[static_cast<size_t>(j)];
        beta[static_cast<size_t>(l)] += s;
    }
    return beta;
}

std::vector<double> reaction_rates(const ReactionNetwork& net, std::span<const double> y) {
    const int L = net.n_species;
    const int J = net.n_reactions;
    if (y.size() != static_cast<size_t>(L)) throw StateError("reaction rates: fraction vector has wrong length");
    for (int l = 0; l < L; ++l)
        if (!(y[static_cast<size_t>(l)] > 0.0))
            throw StateError("reaction rates: nonpositive fraction for species " + std::to_string(l) +
                             " (clamp before calling)");

    std::vector<double> rates(static_cast<size_t>(J), 0.0);
    for (int j = 0; j < J; ++j) {
        double fwd = net.k_forward[static_cast<size_t>(j)];
        double bwd = net.k_backward[static_cast<size_t>(j)];
        for (int l = 0; l < L; ++l) {
            const int s = net.s(l, j);
            if (s < 0) fwd *= std::pow(y[static_cast<size_t>(l)], -s);
            if (s > 0) bwd *= std::pow(y[static_cast<size_t>(l)], s);
        }
        rates[static_cast<size_t>(j)] = fwd - bwd;
    }
    return rates;
}

std::vector<double> mass_production_rates(const ReactionNetwork& net, std::span<const Species> species,
                                          std::span<const double> y) {
    const auto rates = reaction_rates(net, y);
    std::vector<double> r(species.size(), 0.0);
    for (int l = 0; l < net.n_species; ++l) {
        double s = 0;
        for (int j = 0; j < net.n_reactions; ++j) s += net.s(l, j) * rates[static_cast<size_t>(j)];
        r[static_cast<size_t>(l)] = species[static_cast<size_t>(l)].mass * s;
    }
    return r;
}

std::vector<double> equilibrium_residual(const ReactionNetwork& net, std::span<const double> y) {
    const int L = net.n_species;
    const int J = net.n_reactions;
    std::vector<double> res(static_cast<size_t>(J), 0.0);
    for (int j = 0; j < J; ++j) {
        double q = 1.0;
        for (int l = 0; l < L; ++l) {
            const int s = net.s(l, j);
            if (s != 0) q *= std::pow(clamp_fraction(y[static_cast<size_t>(l)]), s);
        }
        res[static_cast<size_t>(j)] = std::abs(q - net.equilibrium_constant(j));
    }
    return res;
}

} // namespace elk
