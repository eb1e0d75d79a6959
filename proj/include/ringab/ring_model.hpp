// Discrete flux-threaded ring: unit conventions, Peierls-substituted
// Hamiltonians, and the loop holonomy invariant.
//
// Units: hbar = c = 1, unit charge e = 1, so flux is stored as the
// dimensionless f = Phi/(hc/e) and every gauge phase reduces to
// 2*pi*(integer charge)*(flux)*(arc fraction).
#pragma once

#include <cmath>
#include <utility>

#include "ringab/common.hpp"

namespace ringab {

/// Ring geometry plus the two numbers the field couples to: the carrier
/// charge (in units of e, signed; -1 for an electron, -2 for a pair
/// carrier) and the dimensionless flux.
struct RingLattice {
    int n_sites = 0;
    int charge = 0;
    double flux = 0.0;

    /// Signed shortest-arc displacement from site n to site m.
    int delta(int n, int m) const { return shortest_arc(n, m, n_sites); }

    /// Peierls phase per directed bond n -> n+1: theta = 2*pi*q*f/N.
    double link_phase() const { return 2.0 * pi * charge * flux / n_sites; }
};

inline RingLattice build_ring(int n_sites, int charge, double flux) {
    if (n_sites < 3)
        throw std::invalid_argument("build_ring: need at least 3 sites, got " +
                                    std::to_string(n_sites));
    if (charge == 0)
        throw std::invalid_argument("build_ring: carrier charge must be nonzero");
    return RingLattice{n_sites, charge, flux};
}

/// Nearest-neighbor tight-binding Hamiltonian with the vector potential
/// encoded in the bond phases:
///   H(n+1,n) = -t * exp(i*theta),  H(n,n) = potential[n].
struct FluxHamiltonian {
    RingLattice ring;
    double hop = 1.0;
    RVector potential;  // length N, zeros when no disorder
    CMatrix mat;

    int size() const { return ring.n_sites; }
    static constexpr int bandwidth = 1;  // nearest-neighbor hop range
};

inline FluxHamiltonian build_peierls_hamiltonian(const RingLattice& ring, double hop = 1.0,
                                                 RVector potential = RVector()) {
    const int n = ring.n_sites;
    if (hop <= 0.0)
        throw std::invalid_argument("build_peierls_hamiltonian: hop amplitude must be positive");
    if (potential.size() == 0) potential = RVector::Zero(n);
    if (potential.size() != n)
        throw std::invalid_argument("build_peierls_hamiltonian: potential length " +
                                    std::to_string(potential.size()) + " != n_sites " +
                                    std::to_string(n));

    const cx forward = -hop * std::exp(imag_unit * ring.link_phase());
    CMatrix h = CMatrix::Zero(n, n);
    for (int s = 0; s < n; ++s) {
        const int next = (s + 1) % n;
        h(next, s) = forward;
        h(s, next) = std::conj(forward);
        h(s, s) = potential[s];
    }
    return FluxHamiltonian{ring, hop, std::move(potential), std::move(h)};
}

/// Product of the N directed bond phase factors around the ring, read off
/// the matrix itself. Equals exp(i*2*pi*q*f) for a Peierls Hamiltonian and
/// is invariant under conjugation by any single-valued diagonal unitary.
inline cx loop_holonomy(const FluxHamiltonian& h) {
    const int n = h.size();
    cx hol{1.0, 0.0};
    for (int s = 0; s < n; ++s) {
        const cx bond = h.mat((s + 1) % n, s);
        const double mag = std::abs(bond);
        if (mag < 1e-14)
            throw BrokenRing("loop_holonomy: zero bond between sites " + std::to_string(s) +
                             " and " + std::to_string((s + 1) % n));
        hol *= -bond / mag;  // bond = -t*exp(i*phase); strip the -t
    }
    return hol;
}

/// Eigenvalues, ascending.
inline RVector spectrum(const CMatrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

inline RVector spectrum(const FluxHamiltonian& h) { return spectrum(h.mat); }

} // namespace ringab
