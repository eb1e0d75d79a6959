// Time evolution of density matrices.
//
// Three modes:
//  - exact_unitary: rho(t) = exp(-iHt) rho exp(+iHt) through the eigenbasis.
//  - dephased: drho/dt = -i[H,rho] - gamma*(rho - rho o K), a completely
//    positive generator whose damping part is a Schur-multiplier channel.
//  - band_truncated: every right-hand-side evaluation -i[H,rho] is Schur-
//    damped by the kernel, inside each integrator stage, so the trajectory
//    never leaves the band and the restricted-gauge frame change commutes
//    with the stepper at machine precision.
//
// Generator modes use a fixed-step classical RK4 (dt chosen so that
// ||generator||*dt stays near 0.1 or below; determinism over cleverness).
// After each step the state is projected back onto the constraint manifold
// (hermitize, renormalize trace); both projections act entrywise or on the
// diagonal only, so they commute with the restricted gauge as well.
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "ringab/common.hpp"
#include "ringab/density_states.hpp"
#include "ringab/ring_model.hpp"

namespace ringab {

enum class EvolutionMode { exact_unitary, dephased, band_truncated };

struct EvolutionSpec {
    EvolutionMode mode = EvolutionMode::exact_unitary;
    double dt = 0.0;
    int n_steps = 0;
    double gamma = 0.0;
    std::optional<BandKernel> kernel;
    int check_stride = 100;    // positivity / band monitoring cadence
    int snapshot_stride = 0;   // 0 = no snapshots

    void validate() const {
        if (mode == EvolutionMode::exact_unitary) return;
        if (dt <= 0.0) throw std::invalid_argument("EvolutionSpec: dt must be positive");
        if (n_steps < 1) throw std::invalid_argument("EvolutionSpec: n_steps must be >= 1");
        if (!kernel) throw std::invalid_argument("EvolutionSpec: generator modes need a kernel");
        if (mode == EvolutionMode::dephased && gamma < 0.0)
            throw std::invalid_argument("EvolutionSpec: gamma must be >= 0");
        if (check_stride < 1) throw std::invalid_argument("EvolutionSpec: check_stride >= 1");
    }
};

inline EvolutionSpec dephased_spec(double dt, int n_steps, double gamma, BandKernel kernel,
                                   int check_stride = 100, int snapshot_stride = 0) {
    EvolutionSpec spec{EvolutionMode::dephased, dt, n_steps, gamma, std::move(kernel),
                       check_stride, snapshot_stride};
    spec.validate();
    return spec;
}

inline EvolutionSpec band_truncated_spec(double dt, int n_steps, BandKernel kernel,
                                         int check_stride = 100, int snapshot_stride = 0) {
    EvolutionSpec spec{EvolutionMode::band_truncated, dt, n_steps, 0.0, std::move(kernel),
                       check_stride, snapshot_stride};
    spec.validate();
    return spec;
}

using SnapshotFn = std::function<void(int step, double time, const DensityMatrix&)>;

struct EvolutionResult {
    DensityMatrix state;
    double min_eigenvalue_seen = 0.0;  // worst value at the monitoring cadence
};

/// rho(t) = exp(-iHt) rho exp(+iHt). Trace, spectrum, and purity preserved.
inline DensityMatrix evolve_exact(const FluxHamiltonian& h, const DensityMatrix& rho, double t) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.mat);
    const RVector energies = solver.eigenvalues();
    const CMatrix& vectors = solver.eigenvectors();
    CVector propagator(h.size());
    for (int i = 0; i < h.size(); ++i) propagator(i) = std::exp(-imag_unit * (energies(i) * t));
    const CMatrix u = vectors * propagator.asDiagonal() * vectors.adjoint();
    CMatrix evolved = u * rho.mat * u.adjoint();
    evolved = 0.5 * (evolved + evolved.adjoint().eval());
    return DensityMatrix::unchecked(std::move(evolved));
}

namespace detail {

inline CMatrix commutator_rhs(const CMatrix& h, const CMatrix& rho) {
    return -imag_unit * (h * rho - rho * h);
}

inline void damp_in_place(CMatrix& m, const BandKernel& kernel) {
    const int n = static_cast<int>(m.rows());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) *= kernel.at(std::abs(shortest_arc(i, j, n)));
}

/// One classical RK4 step of rho' = rhs(rho), then projection back onto
/// Hermitian unit-trace matrices.
template <typename Rhs>
inline void rk4_step(CMatrix& rho, double dt, const Rhs& rhs) {
    const CMatrix k1 = rhs(rho);
    const CMatrix k2 = rhs(rho + (0.5 * dt) * k1);
    const CMatrix k3 = rhs(rho + (0.5 * dt) * k2);
    const CMatrix k4 = rhs(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = 0.5 * (rho + rho.adjoint().eval());
    rho /= rho.trace().real();
}

template <typename Rhs, typename Monitor>
inline EvolutionResult run_stepper(const DensityMatrix& rho0, const EvolutionSpec& spec,
                                   const Rhs& rhs, const Monitor& monitor,
                                   const SnapshotFn& snapshot) {
    CMatrix rho = rho0.mat;
    double worst_eigenvalue = DensityMatrix{rho}.min_eigenvalue();
    for (int step = 1; step <= spec.n_steps; ++step) {
        rk4_step(rho, spec.dt, rhs);
        if (step % spec.check_stride == 0 || step == spec.n_steps) {
            const DensityMatrix current{rho};
            const double min_eig = current.min_eigenvalue();
            worst_eigenvalue = std::min(worst_eigenvalue, min_eig);
            monitor(step, current, min_eig);
        }
        if (snapshot && spec.snapshot_stride > 0 &&
            (step % spec.snapshot_stride == 0 || step == spec.n_steps))
            snapshot(step, step * spec.dt, DensityMatrix{rho});
    }
    return EvolutionResult{DensityMatrix::unchecked(std::move(rho)), worst_eigenvalue};
}

} // namespace detail

/// Band-preserving dephasing channel around the unitary flow:
///   drho/dt = -i[H,rho] - gamma*(rho - rho o K).
/// Trace and Hermiticity are maintained exactly; positivity is monitored and
/// a drift beyond -1e-8 rejects the step size.
inline EvolutionResult evolve_dephased(const FluxHamiltonian& h, const DensityMatrix& rho0,
                                       const EvolutionSpec& spec, const SnapshotFn& snapshot = {}) {
    spec.validate();
    if (spec.mode != EvolutionMode::dephased)
        throw std::invalid_argument("evolve_dephased: spec mode is not 'dephased'");
    const BandKernel& kernel = *spec.kernel;
    if (kernel.n_sites != h.size())
        throw std::invalid_argument("evolve_dephased: kernel size mismatch");

    const auto rhs = [&](const CMatrix& rho) {
        CMatrix damped = rho;
        detail::damp_in_place(damped, kernel);
        return (detail::commutator_rhs(h.mat, rho) - spec.gamma * (rho - damped)).eval();
    };
    const auto monitor = [&](int step, const DensityMatrix&, double min_eig) {
        if (min_eig < -1e-8)
            throw StepRejected("evolve_dephased: min eigenvalue " + std::to_string(min_eig) +
                               " at step " + std::to_string(step) +
                               "; positivity drifted beyond 1e-8, reduce dt");
    };
    return detail::run_stepper(rho0, spec, rhs, monitor, snapshot);
}

/// Hard band-limited dynamics: rhs evaluations are Schur-damped inside every
/// stage, so the trajectory is banded at every algebraic operation. This is
/// the dynamics on which the restricted-gauge frame equivalence is an exact
/// identity rather than an approximation.
inline EvolutionResult evolve_band_truncated(const FluxHamiltonian& h, const DensityMatrix& rho0,
                                             const EvolutionSpec& spec,
                                             const SnapshotFn& snapshot = {}) {
    spec.validate();
    if (spec.mode != EvolutionMode::band_truncated)
        throw std::invalid_argument("evolve_band_truncated: spec mode is not 'band_truncated'");
    const BandKernel& kernel = *spec.kernel;
    if (kernel.n_sites != h.size())
        throw std::invalid_argument("evolve_band_truncated: kernel size mismatch");
    if (2 * (kernel.support + FluxHamiltonian::bandwidth) >= h.size())
        throw BandTooWide("evolve_band_truncated: kernel support + hop range reaches N/2");
    if (effective_bandwidth(rho0, 1e-9) > kernel.support)
        throw std::invalid_argument(
            "evolve_band_truncated: initial state carries coherence beyond the kernel support");

    const auto rhs = [&](const CMatrix& rho) {
        CMatrix flow = detail::commutator_rhs(h.mat, rho);
        detail::damp_in_place(flow, kernel);
        return flow;
    };
    const auto monitor = [&](int step, const DensityMatrix& current, double) {
        if (effective_bandwidth(current, 1e-9) > kernel.support)
            throw std::logic_error("evolve_band_truncated: band violation at step " +
                                   std::to_string(step) + " (internal bug)");
    };
    return detail::run_stepper(rho0, spec, rhs, monitor, snapshot);
}

} // namespace ringab
