// Gauge transformations on the ring.
//
// The full gauge function that trivializes the bond phases accumulates the
// Peierls phase from site 0 and must close on itself around the ring; it
// exists only at quantized flux (integer q*f). The restricted transformation
// instead assigns a unit-modulus phase to every site *pair* within a band
// narrower than half the ring, using the shortest-arc path. On density
// matrices and Hamiltonians that carry no weight beyond that band this is a
// consistent change of frame for any flux: it removes the bond phases exactly
// and maps the flux-threaded commutator algebra onto the flux-free one,
// entry by entry.
#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "ringab/common.hpp"
#include "ringab/density_states.hpp"
#include "ringab/ring_model.hpp"

namespace ringab {

namespace detail {

/// Diagonal-unitary conjugation h' = D h D^dagger for a phase table D.
/// The diagonal is passed through untouched (the pair phase there is
/// identically 1, not merely 1 up to rounding).
inline CMatrix conjugate_by_phases(const CVector& phases, const CMatrix& h) {
    const auto n = h.rows();
    CMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = i == j ? h(i, j) : phases(i) * h(i, j) * std::conj(phases(j));
    return out;
}

} // namespace detail

/// Single-valued diagonal gauge unitary U(n) = exp(-i*2*pi*q*f*n/N),
/// constructible only at integer q*f (where it closes around the ring).
/// Conjugation by U removes every bond phase from a Peierls Hamiltonian.
struct FullGaugeUnitary {
    RingLattice ring;
    CVector phases;
};

/// Exists iff q*f is an integer (tolerance 1e-9); otherwise the gauge
/// function cannot be single-valued on the ring and NotSingleValued is
/// raised -- that refusal is load-bearing and tested.
inline FullGaugeUnitary full_gauge_unitary(const RingLattice& ring) {
    const double qf = double(ring.charge) * ring.flux;
    const double nearest = std::round(qf);
    if (std::abs(qf - nearest) > kFluxIntTol)
        throw NotSingleValued("full_gauge_unitary: q*f = " + std::to_string(qf) +
                              " is not an integer; the flux is not quantized");
    const long winding = std::lround(nearest);
    CVector phases(ring.n_sites);
    for (int s = 0; s < ring.n_sites; ++s)
        phases(s) = std::exp(-imag_unit * (2.0 * pi * double(winding) * s / ring.n_sites));
    return FullGaugeUnitary{ring, std::move(phases)};
}

/// Same phase table but defined for arbitrary flux by cutting the ring
/// between sites N-1 and 0. Negative control: conjugation concentrates the
/// whole holonomy on the cut bond instead of removing it.
struct CutGaugeUnitary {
    RingLattice ring;
    CVector phases;
};

inline CutGaugeUnitary cut_gauge_unitary(const RingLattice& ring) {
    CVector phases(ring.n_sites);
    const double theta = ring.link_phase();
    for (int s = 0; s < ring.n_sites; ++s)
        phases(s) = std::exp(-imag_unit * (theta * s));
    return CutGaugeUnitary{ring, std::move(phases)};
}

/// U H U^dagger. The result is the flux-free Hamiltonian (same hop, same
/// potential, every bond phase 1) with the spectrum untouched.
inline FluxHamiltonian gauge_conjugate_hamiltonian(const FullGaugeUnitary& u,
                                                   const FluxHamiltonian& h) {
    RingLattice flux_free = h.ring;
    flux_free.flux = 0.0;
    return FluxHamiltonian{flux_free, h.hop, h.potential,
                           detail::conjugate_by_phases(u.phases, h.mat)};
}

/// Cut-unitary conjugation. Unitary, so the spectrum and the holonomy are
/// preserved; all bond phases move onto the cut bond (N-1, 0).
inline FluxHamiltonian gauge_conjugate_hamiltonian(const CutGaugeUnitary& u,
                                                   const FluxHamiltonian& h) {
    return FluxHamiltonian{h.ring, h.hop, h.potential,
                           detail::conjugate_by_phases(u.phases, h.mat)};
}

/// U rho U^dagger: trace, spectrum, purity, and every coherence magnitude
/// are preserved exactly.
inline DensityMatrix gauge_conjugate_density(const FullGaugeUnitary& u, const DensityMatrix& rho) {
    return DensityMatrix::unchecked(detail::conjugate_by_phases(u.phases, rho.mat));
}

/// Banded table of pair phases V(n,n') = exp(i*2*pi*q*f*delta(n,n')/N),
/// defined exactly for |delta(n,n')| <= bandwidth < N/2 and deliberately
/// *absent* (not zero) outside the band.
struct RestrictedGauge {
    RingLattice ring;
    int bandwidth = 0;

    /// Phase for the pair (n, m), or nullopt off the band.
    std::optional<cx> phase(int n, int m) const {
        const int d = ring.delta(n, m);
        if (std::abs(d) > bandwidth) return std::nullopt;
        return std::exp(imag_unit * (2.0 * pi * ring.charge * ring.flux * d / ring.n_sites));
    }

    /// Phase for an on-band pair; throws if the pair is off the band.
    cx phase_on_band(int n, int m) const {
        const auto p = phase(n, m);
        if (!p)
            throw std::domain_error("RestrictedGauge: pair (" + std::to_string(n) + "," +
                                    std::to_string(m) + ") lies outside bandwidth " +
                                    std::to_string(bandwidth));
        return *p;
    }
};

/// Bandwidth must stay below half the shortest path around the ring, else
/// the shortest-arc phases stop being single-valued.
inline RestrictedGauge restricted_gauge(const RingLattice& ring, int bandwidth) {
    if (bandwidth < 1 || 2 * bandwidth >= ring.n_sites)
        throw BandTooWide("restricted_gauge: bandwidth " + std::to_string(bandwidth) +
                          " must satisfy 1 <= a < N/2 with N = " + std::to_string(ring.n_sites));
    return RestrictedGauge{ring, bandwidth};
}

/// rho_bar(n,n') = V(n,n') rho(n,n') on the band, 0 beyond it. The input
/// must already be banded within the table's bandwidth; coherence found
/// beyond it means the state has ODLRO and the construction does not apply
/// (NotBanded).
inline DensityMatrix apply_restricted_gauge_to_density(const RestrictedGauge& v,
                                                       const DensityMatrix& rho,
                                                       double tol = kBandTol) {
    const int n = rho.size();
    if (v.ring.n_sites != n)
        throw std::invalid_argument("apply_restricted_gauge_to_density: size mismatch");
    CMatrix out = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto p = v.phase(i, j);
            if (p) {
                out(i, j) = *p * rho.mat(i, j);
            } else if (std::abs(rho.mat(i, j)) > tol) {
                throw NotBanded("apply_restricted_gauge_to_density: coherence " +
                                    std::to_string(std::abs(rho.mat(i, j))) + " at separation " +
                                    std::to_string(std::abs(v.ring.delta(i, j))) +
                                    " exceeds bandwidth " + std::to_string(v.bandwidth),
                                std::abs(v.ring.delta(i, j)), std::abs(rho.mat(i, j)));
            }
        }
    return DensityMatrix::unchecked(std::move(out));
}

/// H_bar(n,n') = V(n,n') H(n,n') on the band, 0 elsewhere. For a Peierls
/// Hamiltonian the bond phases cancel exactly: H_bar is the flux-free
/// Hamiltonian, for any flux.
inline FluxHamiltonian apply_restricted_gauge_to_hamiltonian(const RestrictedGauge& v,
                                                             const FluxHamiltonian& h) {
    const int n = h.size();
    if (v.ring.n_sites != n)
        throw std::invalid_argument("apply_restricted_gauge_to_hamiltonian: size mismatch");
    if (FluxHamiltonian::bandwidth > v.bandwidth)
        throw std::invalid_argument(
            "apply_restricted_gauge_to_hamiltonian: hop range exceeds gauge bandwidth");
    CMatrix out = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto p = v.phase(i, j);
            if (p) out(i, j) = *p * h.mat(i, j);
        }
    RingLattice flux_free = h.ring;
    flux_free.flux = 0.0;
    return FluxHamiltonian{flux_free, h.hop, h.potential, std::move(out)};
}

/// Max-entry deviation, over the widened band |delta| <= a_rho + 1, between
///   [H_bar, rho_bar](n,n')   and   V(n,n') [H, rho](n,n').
/// The restricted construction makes these equal identically, so the return
/// value is floating-point noise whenever the preconditions hold:
/// rho banded with a_rho, hop range 1, a_rho + 1 < N/2, V covering a_rho + 1.
inline double commutator_equivalence_residual(const FluxHamiltonian& h, const DensityMatrix& rho,
                                              const RestrictedGauge& v, double tol = kBandTol) {
    const int n = h.size();
    if (rho.size() != n || v.ring.n_sites != n)
        throw std::invalid_argument("commutator_equivalence_residual: size mismatch");
    const int a_rho = effective_bandwidth(rho, tol);
    const int widened = a_rho + FluxHamiltonian::bandwidth;
    if (2 * widened >= n)
        throw BandTooWide("commutator_equivalence_residual: a_rho + hop range = " +
                          std::to_string(widened) + " reaches N/2");
    if (v.bandwidth < widened)
        throw std::invalid_argument("commutator_equivalence_residual: gauge bandwidth " +
                                    std::to_string(v.bandwidth) + " below a_rho + hop range = " +
                                    std::to_string(widened));

    const DensityMatrix rho_bar = apply_restricted_gauge_to_density(v, rho, tol);
    const FluxHamiltonian h_bar = apply_restricted_gauge_to_hamiltonian(v, h);
    const CMatrix lhs = h_bar.mat * rho_bar.mat - rho_bar.mat * h_bar.mat;
    const CMatrix rhs = h.mat * rho.mat - rho.mat * h.mat;

    double residual = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int d = std::abs(shortest_arc(i, j, n));
            if (d > widened) continue;
            residual = std::max(residual, std::abs(lhs(i, j) - v.phase_on_band(i, j) * rhs(i, j)));
        }
    return residual;
}

} // namespace ringab
