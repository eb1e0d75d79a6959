// Test-only oracles, kept independent of the library's computation paths:
// plain-loop matrix algebra instead of Eigen expressions, analytic formulas
// instead of solvers.
#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ringab/common.hpp"

namespace oracles {

using ringab::cx;
using ringab::CMatrix;

/// Triple-loop product, no Eigen expression machinery.
inline CMatrix naive_matmul(const CMatrix& a, const CMatrix& b) {
    const int n = static_cast<int>(a.rows());
    CMatrix out = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) out(i, j) += a(i, k) * b(k, j);
    return out;
}

inline CMatrix naive_commutator(const CMatrix& a, const CMatrix& b) {
    const CMatrix ab = naive_matmul(a, b);
    const CMatrix ba = naive_matmul(b, a);
    return ab - ba;
}

/// Tight-binding ring dispersion -2 t cos(2 pi (k + q f)/N), sorted.
inline std::vector<double> analytic_ring_spectrum(int n, double t, int q, double f) {
    std::vector<double> e(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        e[static_cast<std::size_t>(k)] = -2.0 * t * std::cos(2.0 * ringab::pi * (k + q * f) / n);
    std::sort(e.begin(), e.end());
    return e;
}

/// Deterministic random Hermitian PSD unit-trace matrix (test-local stream).
inline CMatrix random_density(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMatrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = cx{u(rng), u(rng)};
    CMatrix rho = naive_matmul(g, g.adjoint());
    rho /= rho.trace().real();
    return rho;
}

inline CMatrix random_hermitian(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMatrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = cx{u(rng), u(rng)};
    return CMatrix(0.5 * (g + g.adjoint()));
}

/// Random diagonal unitary (single-valued phase table on the sites).
inline ringab::CVector random_diagonal_unitary(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * ringab::pi);
    ringab::CVector d(n);
    for (int i = 0; i < n; ++i) d(i) = std::exp(ringab::imag_unit * u(rng));
    return d;
}

} // namespace oracles
