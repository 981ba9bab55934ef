#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "elk/errors.hpp"

namespace elk {

// Tridiagonal system solvers for the 1-D finite-volume stencils.
// Layout: lower[k] couples row k to k-1 (lower[0] unused), upper[k] couples
// row k to k+1 (upper[n-1] unused). All systems assembled here are strictly
// diagonally dominant M-matrices, so plain Thomas elimination is stable.

struct Tridiagonal {
    std::vector<double> lower, diag, upper;

    explicit Tridiagonal(size_t n) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
    size_t size() const { return diag.size(); }
};

inline std::vector<double> solve_tridiagonal(const Tridiagonal& m, std::vector<double> rhs) {
    const size_t n = m.size();
    std::vector<double> c(n, 0.0);
    double piv = m.diag[0];
    if (piv == 0.0) throw SolverError("tridiagonal solve: zero pivot in row 0");
    c[0] = m.upper[0] / piv;
    rhs[0] /= piv;
    for (size_t k = 1; k < n; ++k) {
        piv = m.diag[k] - m.lower[k] * c[k - 1];
        if (piv == 0.0) throw SolverError("tridiagonal solve: zero pivot in row " + std::to_string(k));
        c[k] = m.upper[k] / piv;
        rhs[k] = (rhs[k] - m.lower[k] * rhs[k - 1]) / piv;
    }
    for (size_t k = n - 1; k-- > 0;) rhs[k] -= c[k] * rhs[k + 1];
    return rhs;
}

// Cyclic (periodic) tridiagonal system with corner couplings
// A[0][n-1] = corner_upper and A[n-1][0] = corner_lower, via the
// Sherman-Morrison rank-one update of a plain tridiagonal solve.
inline std::vector<double> solve_cyclic_tridiagonal(const Tridiagonal& m, double corner_upper,
                                                    double corner_lower, const std::vector<double>& rhs) {
    const size_t n = m.size();
    if (n < 3) throw SolverError("cyclic tridiagonal solve needs at least 3 rows");
    const double gamma = -m.diag[0];
    Tridiagonal t = m;
    t.diag[0] -= gamma;
    t.diag[n - 1] -= corner_upper * corner_lower / gamma;

    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = corner_lower;

    std::vector<double> y = solve_tridiagonal(t, rhs);
    std::vector<double> z = solve_tridiagonal(t, u);

    const double vy = y[0] + (corner_upper / gamma) * y[n - 1];
    const double vz = 1.0 + z[0] + (corner_upper / gamma) * z[n - 1];
    if (vz == 0.0) throw SolverError("cyclic tridiagonal solve: singular rank-one update");
    const double f = vy / vz;
    for (size_t k = 0; k < n; ++k) y[k] -= f * z[k];
    return y;
}

// max-norm residual ||Ax - b|| for a (possibly cyclic) tridiagonal system
inline double tridiagonal_residual_inf(const Tridiagonal& m, double corner_upper, double corner_lower,
                                       const std::vector<double>& x, const std::vector<double>& rhs) {
    const size_t n = m.size();
    double r = 0.0;
    for (size_t k = 0; k < n; ++k) {
        double ax = m.diag[k] * x[k];
        if (k > 0) ax += m.lower[k] * x[k - 1];
        if (k + 1 < n) ax += m.upper[k] * x[k + 1];
        if (k == 0 && n > 1) ax += corner_upper * x[n - 1];
        if (k == n - 1 && n > 1) ax += corner_lower * x[0];
        r = std::max(r, std::abs(ax - rhs[k]));
    }
    return r;
}

} // namespace elk
