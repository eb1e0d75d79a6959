// One-body density matrices on the ring, the coherence profile used as the
// ODLRO diagnostic, and positive-semidefinite band-control kernels.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ringab/common.hpp"
#include "ringab/ring_model.hpp"

namespace ringab {

/// N x N complex matrix constrained to be Hermitian (1e-12), unit trace
/// (1e-12), and positive semidefinite (min eigenvalue >= -1e-12; checked on
/// demand, not at every construction).
struct DensityMatrix {
    CMatrix mat;

    int size() const { return static_cast<int>(mat.rows()); }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(mat, Eigen::EigenvaluesOnly);
        return solver.eigenvalues()(0);
    }

    double purity() const { return (mat * mat).trace().real(); }

    static DensityMatrix from_matrix(CMatrix m, double tol = kBandTol) {
        if (m.rows() != m.cols())
            throw std::invalid_argument("DensityMatrix: matrix must be square");
        if (!is_hermitian(m, tol))
            throw std::invalid_argument("DensityMatrix: not Hermitian within tolerance");
        const double tr = m.trace().real();
        if (std::abs(tr - 1.0) > tol || std::abs(m.trace().imag()) > tol)
            throw std::invalid_argument("DensityMatrix: trace != 1 within tolerance");
        return DensityMatrix{std::move(m)};
    }

    /// No invariant checks; for internal stepper use where the invariants
    /// are maintained structurally.
    static DensityMatrix unchecked(CMatrix m) { return DensityMatrix{std::move(m)}; }
};

/// c[d] = max over site pairs at shortest-arc separation d of |rho(n,n')|,
/// for d = 0..floor(N/2). A state has no coherence beyond a iff c[d]
/// vanishes for all d > a.
struct CoherenceProfile {
    std::vector<double> c;

    int max_separation() const { return static_cast<int>(c.size()) - 1; }
};

inline CoherenceProfile coherence_profile(const DensityMatrix& rho) {
    const int n = rho.size();
    CoherenceProfile profile;
    profile.c.assign(static_cast<std::size_t>(n / 2) + 1, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int d = std::abs(shortest_arc(i, j, n));
            profile.c[d] = std::max(profile.c[d], std::abs(rho.mat(i, j)));
        }
    return profile;
}

/// True iff all coherence at separations beyond a is below tol.
inline bool is_banded(const DensityMatrix& rho, int bandwidth, double tol = kBandTol) {
    const int n = rho.size();
    if (bandwidth < 1 || 2 * bandwidth >= n)
        throw BandTooWide("is_banded: bandwidth " + std::to_string(bandwidth) +
                          " not in [1, N/2) for N = " + std::to_string(n));
    const auto profile = coherence_profile(rho);
    for (int d = bandwidth + 1; d <= profile.max_separation(); ++d)
        if (profile.c[d] > tol) return false;
    return true;
}

/// Largest separation carrying coherence above tol (0 for a diagonal state).
inline int effective_bandwidth(const DensityMatrix& rho, double tol = kBandTol) {
    const auto profile = coherence_profile(rho);
    for (int d = profile.max_separation(); d >= 1; --d)
        if (profile.c[d] > tol) return d;
    return 0;
}

/// Smallest separation where coherence has dropped below the threshold
/// (the measured coherence length); c.size() when it never drops.
inline int effective_coherence_length(const DensityMatrix& rho, double threshold) {
    const auto profile = coherence_profile(rho);
    for (int d = 0; d <= profile.max_separation(); ++d)
        if (profile.c[d] < threshold) return d;
    return static_cast<int>(profile.c.size());
}

// ---------------------------------------------------------------------------
// Band-control kernels
// ---------------------------------------------------------------------------

/// Real circulant profile k[d] with k[0] = 1, 0 <= k[d] <= 1, and k[d] = 0
/// for d > support. The circulant K(n,n') = k[|delta(n,n')|] must be positive
/// semidefinite so that entrywise multiplication by K (Schur product) is a
/// completely positive, trace-preserving, diagonal-preserving channel.
struct BandKernel {
    int n_sites = 0;
    int support = 0;              // largest separation with k > 0
    std::vector<double> k;        // indexed by separation 0..floor(N/2)

    double at(int separation) const { return k[static_cast<std::size_t>(separation)]; }

    RMatrix circulant() const {
        RMatrix m(n_sites, n_sites);
        for (int i = 0; i < n_sites; ++i)
            for (int j = 0; j < n_sites; ++j)
                m(i, j) = k[static_cast<std::size_t>(std::abs(shortest_arc(i, j, n_sites)))];
        return m;
    }

    /// Circulant eigenvalues by direct DFT of the first row (real since the
    /// profile is symmetric).
    std::vector<double> circulant_eigenvalues() const {
        std::vector<double> first_row(static_cast<std::size_t>(n_sites));
        for (int m = 0; m < n_sites; ++m)
            first_row[static_cast<std::size_t>(m)] =
                k[static_cast<std::size_t>(std::abs(shortest_arc(0, m, n_sites)))];
        std::vector<double> lambda(static_cast<std::size_t>(n_sites), 0.0);
        for (int j = 0; j < n_sites; ++j) {
            double sum = 0.0;
            for (int m = 0; m < n_sites; ++m)
                sum += first_row[static_cast<std::size_t>(m)] *
                       std::cos(2.0 * pi * j * m / n_sites);
            lambda[static_cast<std::size_t>(j)] = sum;
        }
        return lambda;
    }
};

namespace detail {

inline BandKernel finalize_kernel(BandKernel kernel, const char* name) {
    for (double v : kernel.k)
        if (v < -1e-15 || v > 1.0 + 1e-15)
            throw std::logic_error(std::string(name) + ": profile value out of [0,1]");
    for (double lambda : kernel.circulant_eigenvalues())
        if (lambda < -kBandTol)
            throw std::logic_error(std::string(name) +
                                   ": circulant not PSD, eigenvalue " + std::to_string(lambda));
    return kernel;
}

} // namespace detail

/// Bartlett/Fejer triangle k[d] = max(0, 1 - d/a): the unique choice here
/// with both strict band support (k[d] = 0 for d >= a) and a PSD circulant
/// (it is the autocorrelation of a width-a rectangular window). The support
/// a-1 must stay below half the ring.
inline BandKernel triangular_kernel(int n_sites, int a) {
    if (a < 1 || 2 * (a - 1) >= n_sites)
        throw BandTooWide("triangular_kernel: parameter " + std::to_string(a) +
                          " puts the support at or past N/2 for N = " + std::to_string(n_sites));
    BandKernel kernel;
    kernel.n_sites = n_sites;
    kernel.support = a - 1;
    kernel.k.assign(static_cast<std::size_t>(n_sites / 2) + 1, 0.0);
    for (int d = 0; d <= n_sites / 2; ++d)
        kernel.k[static_cast<std::size_t>(d)] = std::max(0.0, 1.0 - double(d) / a);
    return detail::finalize_kernel(std::move(kernel), "triangular_kernel");
}

/// Periodized triangle: wrap-summed copies of the width-a triangle. Valid
/// for any a >= 1 (PSD because its circulant eigenvalues are Fejer-kernel
/// samples); identical to triangular_kernel when a < N/2. Used for
/// mesoscopic rings where the coherence range covers the whole circuit.
inline BandKernel wrapped_triangular_kernel(int n_sites, int a) {
    if (a < 1)
        throw std::invalid_argument("wrapped_triangular_kernel: support must be >= 1");
    BandKernel kernel;
    kernel.n_sites = n_sites;
    kernel.k.assign(static_cast<std::size_t>(n_sites / 2) + 1, 0.0);
    for (int d = 0; d <= n_sites / 2; ++d) {
        double sum = 0.0;
        for (int w = -(a / n_sites + 1); w <= a / n_sites + 1; ++w) {
            const double x = std::abs(double(d) + double(w) * n_sites);
            sum += std::max(0.0, 1.0 - x / a);
        }
        kernel.k[static_cast<std::size_t>(d)] = sum;
    }
    const double peak = kernel.k[0];  // > 1 only once wraps overlap the origin
    for (double& v : kernel.k) v /= peak;
    kernel.support = 0;
    for (int d = n_sites / 2; d >= 1; --d)
        if (kernel.k[static_cast<std::size_t>(d)] > 0.0) {
            kernel.support = d;
            break;
        }
    return detail::finalize_kernel(std::move(kernel), "wrapped_triangular_kernel");
}

/// Gaussian profile exp(-d^2 / (2 sigma^2)), wrap-summed. Smooth but with
/// unbounded support: it only suppresses, never zeroes, long coherence.
inline BandKernel gaussian_kernel(int n_sites, double sigma) {
    if (sigma <= 0.0)
        throw std::invalid_argument("gaussian_kernel: sigma must be positive");
    BandKernel kernel;
    kernel.n_sites = n_sites;
    kernel.support = n_sites / 2;
    kernel.k.assign(static_cast<std::size_t>(n_sites / 2) + 1, 0.0);
    for (int d = 0; d <= n_sites / 2; ++d) {
        double sum = 0.0;
        for (int w = -3; w <= 3; ++w) {
            const double x = double(d) + double(w) * n_sites;
            sum += std::exp(-x * x / (2.0 * sigma * sigma));
        }
        kernel.k[static_cast<std::size_t>(d)] = sum;
    }
    const double k0 = kernel.k[0];
    for (double& v : kernel.k) v /= k0;
    return detail::finalize_kernel(std::move(kernel), "gaussian_kernel");
}

/// Entrywise product rho o K. Trace, Hermiticity, the whole diagonal, and
/// positivity (Schur product theorem) are preserved; the result carries no
/// coherence beyond the kernel support.
inline DensityMatrix hadamard_damp(const DensityMatrix& rho, const BandKernel& kernel) {
    const int n = rho.size();
    if (kernel.n_sites != n)
        throw std::invalid_argument("hadamard_damp: kernel size mismatch");
    CMatrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out(i, j) = rho.mat(i, j) *
                        kernel.at(std::abs(shortest_arc(i, j, n)));
    return DensityMatrix::unchecked(std::move(out));
}

/// Hard band cut (diagnostic only): zeroes everything beyond the band and
/// reports the resulting minimum eigenvalue, which may be negative -- the
/// sharp cut is not a completely positive map. Prefer hadamard_damp.
struct BandProjection {
    DensityMatrix state;
    double min_eigenvalue;
};

inline BandProjection hard_band_project(const DensityMatrix& rho, int bandwidth) {
    const int n = rho.size();
    if (bandwidth < 0 || 2 * bandwidth >= n)
        throw BandTooWide("hard_band_project: bandwidth not in [0, N/2)");
    CMatrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out(i, j) = std::abs(shortest_arc(i, j, n)) <= bandwidth ? rho.mat(i, j) : cx{0.0, 0.0};
    DensityMatrix projected = DensityMatrix::unchecked(std::move(out));
    const double min_eig = projected.min_eigenvalue();
    return BandProjection{std::move(projected), min_eig};
}

// ---------------------------------------------------------------------------
// State builders
// ---------------------------------------------------------------------------

inline DensityMatrix maximally_mixed(int n_sites) {
    return DensityMatrix::unchecked(CMatrix::Identity(n_sites, n_sites) / double(n_sites));
}

inline DensityMatrix site_localized(int n_sites, int site) {
    if (site < 0 || site >= n_sites)
        throw std::invalid_argument("site_localized: site index out of range");
    CMatrix m = CMatrix::Zero(n_sites, n_sites);
    m(site, site) = 1.0;
    return DensityMatrix::unchecked(std::move(m));
}

inline DensityMatrix pure_state(const CVector& psi) {
    const double norm = psi.norm();
    if (norm < 1e-300) throw std::invalid_argument("pure_state: zero vector");
    const CVector normalized = psi / norm;
    return DensityMatrix::unchecked(normalized * normalized.adjoint());
}

/// Momentum eigenstate: the standard ODLRO counterexample, with coherence
/// 1/N at every separation.
inline DensityMatrix plane_wave(int n_sites, int k) {
    CVector psi(n_sites);
    for (int s = 0; s < n_sites; ++s)
        psi(s) = std::exp(imag_unit * (2.0 * pi * k * s / n_sites));
    return pure_state(psi);
}

inline DensityMatrix gaussian_packet(int n_sites, int center, double width) {
    if (width <= 0.0) throw std::invalid_argument("gaussian_packet: width must be positive");
    if (center < 0 || center >= n_sites)
        throw std::invalid_argument("gaussian_packet: center out of range");
    CVector psi(n_sites);
    for (int s = 0; s < n_sites; ++s) {
        const double d = shortest_arc(center, s, n_sites);
        psi(s) = std::exp(-d * d / (4.0 * width * width));
    }
    return pure_state(psi);
}

/// exp(-beta H)/Z through the eigenbasis, with the spectrum shifted by its
/// minimum so Z >= 1 and cannot underflow.
inline DensityMatrix thermal_state(const FluxHamiltonian& h, double beta) {
    if (beta < 0.0) throw std::invalid_argument("thermal_state: beta must be >= 0");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.mat);
    const RVector energies = solver.eigenvalues();
    const CMatrix& vectors = solver.eigenvectors();
    const double ground = energies(0);
    RVector weights(h.size());
    for (int i = 0; i < h.size(); ++i) weights(i) = std::exp(-beta * (energies(i) - ground));
    const double z = weights.sum();
    if (!(z > 0.0)) throw std::runtime_error("thermal_state: partition function underflow");
    CMatrix rho = vectors * (weights / z).asDiagonal() * vectors.adjoint();
    return DensityMatrix::unchecked(std::move(rho));
}

} // namespace ringab
