#pragma once

#include <array>
#include <cassert>
#include <cmath>

namespace elk {

// Fixed-capacity vector/matrix for pointwise tensor algebra in n = 1, 2, 3
// spatial dimensions. The simulator grid is 1-D; these exist so the stress,
// dissipation and heat-flux algebra (and their tests) work in any n.

struct VecN {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    int n = 1;

    VecN() = default;
    explicit VecN(double x) : c{x, 0, 0}, n(1) {}
    VecN(double x, double y) : c{x, y, 0}, n(2) {}
    VecN(double x, double y, double z) : c{x, y, z}, n(3) {}

    double& operator[](int i) { return c[static_cast<size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<size_t>(i)]; }
};

inline VecN operator+(VecN a, const VecN& b) {
    assert(a.n == b.n);
    for (int i = 0; i < a.n; ++i) a[i] += b[i];
    return a;
}

inline VecN operator-(VecN a, const VecN& b) {
    assert(a.n == b.n);
    for (int i = 0; i < a.n; ++i) a[i] -= b[i];
    return a;
}

inline VecN operator*(double s, VecN a) {
    for (int i = 0; i < a.n; ++i) a[i] *= s;
    return a;
}

inline double dot(const VecN& a, const VecN& b) {
    assert(a.n == b.n);
    double s = 0;
    for (int i = 0; i < a.n; ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const VecN& a) { return dot(a, a); }

struct MatN {
    std::array<double, 9> c{};  // row-major n x n
    int n = 1;

    MatN() = default;
    explicit MatN(int dim) : n(dim) { assert(dim >= 1 && dim <= 3); }

    double& operator()(int i, int j) { return c[static_cast<size_t>(i * n + j)]; }
    double operator()(int i, int j) const { return c[static_cast<size_t>(i * n + j)]; }

    static MatN identity(int dim) {
        MatN m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline MatN operator+(MatN a, const MatN& b) {
    assert(a.n == b.n);
    for (int i = 0; i < a.n * a.n; ++i) a.c[static_cast<size_t>(i)] += b.c[static_cast<size_t>(i)];
    return a;
}

inline MatN operator*(double s, MatN a) {
    for (int i = 0; i < a.n * a.n; ++i) a.c[static_cast<size_t>(i)] *= s;
    return a;
}

inline MatN transpose(const MatN& a) {
    MatN t(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) t(i, j) = a(j, i);
    return t;
}

inline double trace(const MatN& a) {
    double s = 0;
    for (int i = 0; i < a.n; ++i) s += a(i, i);
    return s;
}

// Frobenius inner product A:B
inline double ddot(const MatN& a, const MatN& b) {
    assert(a.n == b.n);
    double s = 0;
    for (int i = 0; i < a.n * a.n; ++i) s += a.c[static_cast<size_t>(i)] * b.c[static_cast<size_t>(i)];
    return s;
}

inline VecN matvec(const MatN& a, const VecN& x) {
    assert(a.n == x.n);
    VecN y;
    y.n = a.n;
    for (int i = 0; i < a.n; ++i) {
        double s = 0;
        for (int j = 0; j < a.n; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

} // namespace elk
