// Named, reproducible experiment drivers.
//
// All randomness in the project enters here, through a seeded mt19937_64
// consumed in a documented order (disorder first, then state draws, then
// per-scan repeats), with distributions hand-rolled from the raw 64-bit
// stream so any implementation of the same generator reproduces the runs.
// Assertion outcomes are recorded in the result, never thrown.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ringab/common.hpp"
#include "ringab/density_states.hpp"
#include "ringab/dynamics.hpp"
#include "ringab/gauge.hpp"
#include "ringab/observables.hpp"
#include "ringab/ring_model.hpp"

namespace ringab {

inline constexpr const char* kVersion = "0.1.0";

enum class ExperimentKind {
    flux_sweep,
    crossover_scan,
    quantized_flux_check,
    frame_equivalence,
    negative_control,
};

enum class StateRecipe {
    thermal_damped,   // thermal state of H(f), Schur-damped to the band
    ground_state,     // lowest eigenstate of H(f): the ODLRO control
    plane_wave,       // fixed momentum eigenstate, flux-independent matrix
    maximally_mixed,
    site_localized,
    gaussian_packet,
};

enum class KernelKind { triangular, triangular_wrapped, gaussian };

struct RingParams {
    int n_sites = 0;
    int charge = 0;
    double hop = 1.0;
    double disorder = 0.0;  // uniform on-site amplitude, 0 = clean ring
    bool operator==(const RingParams&) const = default;
};

struct StateSpec {
    StateRecipe recipe = StateRecipe::maximally_mixed;
    double beta = 0.0;   // thermal_damped
    int momentum = 0;    // plane_wave
    int site = 0;        // site_localized, gaussian_packet
    double width = 0.0;  // gaussian_packet
    bool operator==(const StateSpec&) const = default;
};

struct EvolutionParams {
    EvolutionMode mode = EvolutionMode::band_truncated;
    double dt = 0.0;
    int n_steps = 0;
    double gamma = 0.0;
    KernelKind kernel = KernelKind::triangular;
    double sigma = 0.0;  // gaussian kernel only
    int snapshot_stride = 10;
    bool operator==(const EvolutionParams&) const = default;
};

struct FluxGridSpec {
    double min = 0.0;
    double max = 0.0;
    int points = 0;

    std::vector<double> values() const {
        std::vector<double> grid(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i)
            grid[static_cast<std::size_t>(i)] = min + (max - min) * i / (points - 1);
        return grid;
    }
    bool operator==(const FluxGridSpec&) const = default;
};

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::flux_sweep;
    RingParams ring;
    int bandwidth = 0;        // coherence band a / kernel support parameter
    StateSpec state;
    EvolutionParams evolution;
    FluxGridSpec flux_grid;   // sweep, crossover, quantized-flux check
    double flux = 0.0;        // single-flux experiments
    std::vector<int> scan_sizes;  // crossover ring sizes
    std::uint64_t seed = 0;
    std::string output_dir;
    bool operator==(const ExperimentSpec&) const = default;
};

struct Assertion {
    std::string name;
    std::string expected;
    double observed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct SweepRecord {
    double flux = 0.0;
    std::string observable;
    double value = 0.0;
};

struct CrossoverRecord {
    int n_sites = 0;
    double amplitude = 0.0;
    std::string regime;
};

struct ExperimentResult {
    ExperimentKind kind = ExperimentKind::flux_sweep;
    std::vector<SweepRecord> sweep_rows;
    std::vector<CrossoverRecord> crossover_rows;
    std::vector<Assertion> assertions;

    bool all_passed() const {
        return std::all_of(assertions.begin(), assertions.end(),
                           [](const Assertion& a) { return a.pass; });
    }
};

// ---------------------------------------------------------------------------
// Seeded draws (hand-rolled on top of mt19937_64 for stream portability)
// ---------------------------------------------------------------------------

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;  // 53-bit mantissa in [0,1)
}

inline double standard_normal(std::mt19937_64& rng) {
    // Box-Muller; rejects u = 0 to keep the log finite.
    double u = 0.0;
    do { u = uniform01(rng); } while (u <= 0.0);
    const double v = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * pi * v);
}

} // namespace detail

/// Uniform on-site disorder in [-amplitude, amplitude].
inline RVector make_disorder_potential(int n_sites, double amplitude, std::mt19937_64& rng) {
    RVector v(n_sites);
    for (int s = 0; s < n_sites; ++s)
        v(s) = amplitude * (2.0 * detail::uniform01(rng) - 1.0);
    return v;
}

/// Random positive-semidefinite unit-trace state with coherence support
/// exactly inside |delta| <= band: a random Wishart matrix Schur-damped by
/// the triangular kernel of support band (requires band + 1 < N/2).
inline DensityMatrix random_banded_state(int n_sites, int band, std::mt19937_64& rng) {
    if (band < 0 || 2 * (band + 1) >= n_sites)
        throw BandTooWide("random_banded_state: band + 1 must stay below N/2");
    CMatrix g(n_sites, n_sites);
    for (int i = 0; i < n_sites; ++i)
        for (int j = 0; j < n_sites; ++j)
            g(i, j) = cx{detail::standard_normal(rng), detail::standard_normal(rng)};
    CMatrix wishart = g * g.adjoint();
    wishart /= wishart.trace().real();
    return hadamard_damp(DensityMatrix::unchecked(std::move(wishart)),
                         triangular_kernel(n_sites, band + 1));
}

// ---------------------------------------------------------------------------
// Shared driver helpers
// ---------------------------------------------------------------------------

namespace detail {

inline BandKernel build_kernel(const ExperimentSpec& spec, int n_sites) {
    switch (spec.evolution.kernel) {
        case KernelKind::triangular: return triangular_kernel(n_sites, spec.bandwidth);
        case KernelKind::triangular_wrapped:
            return wrapped_triangular_kernel(n_sites, spec.bandwidth);
        case KernelKind::gaussian: return gaussian_kernel(n_sites, spec.evolution.sigma);
    }
    throw std::logic_error("build_kernel: unknown kernel kind");
}

inline DensityMatrix build_state(const ExperimentSpec& spec, const FluxHamiltonian& h,
                                 const BandKernel& kernel) {
    switch (spec.state.recipe) {
        case StateRecipe::thermal_damped:
            return hadamard_damp(thermal_state(h, spec.state.beta), kernel);
        case StateRecipe::ground_state: {
            Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.mat);
            return pure_state(solver.eigenvectors().col(0));
        }
        case StateRecipe::plane_wave: return plane_wave(h.size(), spec.state.momentum);
        case StateRecipe::maximally_mixed: return maximally_mixed(h.size());
        case StateRecipe::site_localized: return site_localized(h.size(), spec.state.site);
        case StateRecipe::gaussian_packet:
            return gaussian_packet(h.size(), spec.state.site, spec.state.width);
    }
    throw std::logic_error("build_state: unknown recipe");
}

/// Gauge-invariant observables recorded per flux point in a sweep.
struct SweepObservables {
    Observable total_current;  // persistent-current operator (2 pi q/N) sum_j j_n
    Observable density0;
    Observable current0;

    static SweepObservables for_hamiltonian(const FluxHamiltonian& h) {
        const int n = h.size();
        CMatrix total = CMatrix::Zero(n, n);
        for (int s = 0; s < n; ++s) total += link_current(h, s).mat;
        total *= 2.0 * pi * h.ring.charge / n;
        return SweepObservables{Observable{std::move(total), 1, true}, local_density(n, 0),
                                link_current(h, 0)};
    }
};

inline Assertion make_assertion(std::string name, std::string expected, double observed,
                                double tolerance, bool pass) {
    return Assertion{std::move(name), std::move(expected), observed, tolerance, pass};
}

inline double linear_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

/// Sweeps the flux over the grid, builds the configured state per flux,
/// optionally relaxes it with band-truncated dynamics, and records
/// gauge-invariant observables. Banded recipes assert flux-independence at
/// 1e-10; coherent (ODLRO) recipes assert a response above 1e-2 with the
/// carrier's flux period measured by autocorrelation to 2%.
inline ExperimentResult run_flux_sweep(const ExperimentSpec& spec) {
    if (spec.flux_grid.points < 2)
        throw std::invalid_argument("run_flux_sweep: flux grid needs at least 2 points");
    const RingParams& rp = spec.ring;
    std::mt19937_64 rng(spec.seed);
    const RVector potential = make_disorder_potential(rp.n_sites, rp.disorder, rng);
    const double expected_period = 1.0 / std::abs(rp.charge);

    ExperimentResult result;
    result.kind = ExperimentKind::flux_sweep;

    const std::vector<double> grid = spec.flux_grid.values();
    std::vector<double> currents, energies, densities, link_currents;
    // Coherent per-flux eigenstates are the ODLRO controls; every other
    // recipe prepares (or aims at) a band-limited state and is held to the
    // theorem's flux-independence bound.
    const bool banded_branch = spec.state.recipe != StateRecipe::ground_state &&
                               spec.state.recipe != StateRecipe::plane_wave;

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const RingLattice ring = build_ring(rp.n_sites, rp.charge, grid[i]);
        const FluxHamiltonian h = build_peierls_hamiltonian(ring, rp.hop, potential);
        const BandKernel kernel = detail::build_kernel(spec, rp.n_sites);
        DensityMatrix rho = detail::build_state(spec, h, kernel);
        if (spec.evolution.n_steps > 0) {
            const EvolutionSpec evo = band_truncated_spec(
                spec.evolution.dt, spec.evolution.n_steps, kernel, 200);
            rho = evolve_band_truncated(h, rho, evo).state;
        }
        const auto obs = detail::SweepObservables::for_hamiltonian(h);
        currents.push_back(expectation(rho, obs.total_current));
        energies.push_back((rho.mat * h.mat).trace().real());
        densities.push_back(expectation(rho, obs.density0));
        link_currents.push_back(expectation(rho, obs.current0));

        result.sweep_rows.push_back({grid[i], "persistent_current", currents.back()});
        result.sweep_rows.push_back({grid[i], "energy", energies.back()});
        result.sweep_rows.push_back({grid[i], "density_site0", densities.back()});
        result.sweep_rows.push_back({grid[i], "link_current_site0", link_currents.back()});
    }

    const ABResponse current_response = ab_response(grid, currents, expected_period);
    if (banded_branch) {
        double worst = 0.0;
        for (const auto* series : {&currents, &energies, &densities, &link_currents}) {
            const double amp = *std::max_element(series->begin(), series->end()) -
                               *std::min_element(series->begin(), series->end());
            worst = std::max(worst, amp);
        }
        result.assertions.push_back(detail::make_assertion(
            "banded_flux_independence", "< 1e-10", worst, 1e-10, worst < 1e-10));
    } else {
        result.assertions.push_back(detail::make_assertion(
            "control_amplitude", "> 1e-2", current_response.amplitude, 1e-2,
            current_response.amplitude > 1e-2));
        // The 1/|q| flux period belongs to spectrum-tracking states (the
        // per-flux ground state); a fixed plane wave oscillates with period
        // N/|q| instead. And a period is only measurable from a grid
        // spanning at least two of them.
        const double span = grid.back() - grid.front();
        if (spec.state.recipe == StateRecipe::ground_state &&
            span >= 2.0 * expected_period - 1e-12) {
            const double period_err =
                std::abs(current_response.period_estimate - expected_period) / expected_period;
            result.assertions.push_back(detail::make_assertion(
                "control_period", "within 2% of " + std::to_string(expected_period), period_err,
                0.02, std::isfinite(period_err) && period_err <= 0.02));
        }
    }
    return result;
}

/// Fixed kernel support, growing ring: time-averaged flux response of the
/// dephased dynamics from a localized initial state. Rings the band covers
/// entirely (a >= N/2) respond at full strength; larger rings are suppressed
/// exponentially, which is asserted through the sign of the log-linear slope.
inline ExperimentResult run_crossover_scan(const ExperimentSpec& spec) {
    if (spec.scan_sizes.size() < 4)
        throw std::invalid_argument("run_crossover_scan: need at least 4 ring sizes");
    if (spec.evolution.mode != EvolutionMode::dephased)
        throw std::invalid_argument("run_crossover_scan: requires dephased dynamics");
    if (spec.flux_grid.points < 2)
        throw std::invalid_argument("run_crossover_scan: flux grid needs at least 2 points");

    const RingParams& rp = spec.ring;
    std::mt19937_64 rng(spec.seed);
    ExperimentResult result;
    result.kind = ExperimentKind::crossover_scan;

    std::vector<double> mesoscopic_amps;
    std::vector<double> macroscopic_n, macroscopic_log_amp;
    std::vector<double> amplitudes;

    for (int n_sites : spec.scan_sizes) {
        const RVector potential = make_disorder_potential(n_sites, rp.disorder, rng);
        const BandKernel kernel = wrapped_triangular_kernel(n_sites, spec.bandwidth);
        std::vector<double> averaged;

        for (double f : spec.flux_grid.values()) {
            const RingLattice ring = build_ring(n_sites, rp.charge, f);
            const FluxHamiltonian h = build_peierls_hamiltonian(ring, rp.hop, potential);
            const auto obs = detail::SweepObservables::for_hamiltonian(h);
            double sum = 0.0;
            int samples = 0;
            const EvolutionSpec evo =
                dephased_spec(spec.evolution.dt, spec.evolution.n_steps, spec.evolution.gamma,
                              kernel, 500, spec.evolution.snapshot_stride);
            evolve_dephased(h, site_localized(n_sites, spec.state.site), evo,
                            [&](int, double, const DensityMatrix& snapshot) {
                                sum += expectation(snapshot, obs.total_current);
                                ++samples;
                            });
            averaged.push_back(sum / samples);
        }
        const double amplitude = *std::max_element(averaged.begin(), averaged.end()) -
                                 *std::min_element(averaged.begin(), averaged.end());
        const bool mesoscopic = 2 * spec.bandwidth >= n_sites;
        result.crossover_rows.push_back(
            {n_sites, amplitude, mesoscopic ? "mesoscopic (theorem inapplicable)" : "macroscopic"});
        amplitudes.push_back(amplitude);
        if (mesoscopic) {
            mesoscopic_amps.push_back(amplitude);
        } else {
            macroscopic_n.push_back(double(n_sites));
            macroscopic_log_amp.push_back(std::log(std::max(amplitude, 1e-300)));
        }
    }

    bool monotone = true;
    for (std::size_t i = 1; i < amplitudes.size(); ++i)
        if (amplitudes[i] > amplitudes[i - 1] * (1.0 + 1e-9) + 1e-15) monotone = false;
    result.assertions.push_back(detail::make_assertion(
        "monotone_non_increasing", "amplitude non-increasing with N", monotone ? 1.0 : 0.0, 0.0,
        monotone));

    if (!mesoscopic_amps.empty()) {
        const double weakest =
            *std::min_element(mesoscopic_amps.begin(), mesoscopic_amps.end());
        result.assertions.push_back(detail::make_assertion(
            "mesoscopic_response", "> 1e-2 where a >= N/2", weakest, 1e-2, weakest > 1e-2));
    }
    if (macroscopic_n.size() >= 2) {
        const double slope = detail::linear_slope(macroscopic_n, macroscopic_log_amp);
        result.assertions.push_back(detail::make_assertion(
            "suppression_slope", "log-linear slope < -0.1 for N/2 > a", slope, -0.1,
            slope < -0.1));
    }
    return result;
}

/// Existence dichotomy of the full gauge unitary over a flux grid: it must
/// exist exactly at integer q*f, where the conjugated spectrum matches the
/// flux-free one at 1e-12; elsewhere NotSingleValued must fire and spectra
/// generically differ.
inline ExperimentResult run_quantized_flux_check(const ExperimentSpec& spec) {
    if (spec.flux_grid.points < 2)
        throw std::invalid_argument("run_quantized_flux_check: flux grid needs at least 2 points");
    const RingParams& rp = spec.ring;
    std::mt19937_64 rng(spec.seed);
    const RVector potential = make_disorder_potential(rp.n_sites, rp.disorder, rng);

    ExperimentResult result;
    result.kind = ExperimentKind::quantized_flux_check;

    const FluxHamiltonian h_free =
        build_peierls_hamiltonian(build_ring(rp.n_sites, rp.charge, 0.0), rp.hop, potential);
    const RVector free_spectrum = spectrum(h_free);

    bool dichotomy = true;
    double worst_match = 0.0;
    double best_mismatch = 0.0;  // largest spectral deviation seen off quantization

    for (double f : spec.flux_grid.values()) {
        const RingLattice ring = build_ring(rp.n_sites, rp.charge, f);
        const FluxHamiltonian h = build_peierls_hamiltonian(ring, rp.hop, potential);
        const double qf = double(rp.charge) * f;
        const bool should_exist = std::abs(qf - std::round(qf)) <= kFluxIntTol;

        bool exists = true;
        double deviation = 0.0;
        try {
            const FullGaugeUnitary u = full_gauge_unitary(ring);
            deviation =
                (spectrum(gauge_conjugate_hamiltonian(u, h)) - free_spectrum).cwiseAbs().maxCoeff();
            worst_match = std::max(worst_match, deviation);
        } catch (const NotSingleValued&) {
            exists = false;
            deviation = (spectrum(h) - free_spectrum).cwiseAbs().maxCoeff();
            best_mismatch = std::max(best_mismatch, deviation);
        }
        if (exists != should_exist) dichotomy = false;
        result.sweep_rows.push_back({f, "unitary_exists", exists ? 1.0 : 0.0});
        result.sweep_rows.push_back({f, "spectral_deviation", deviation});
    }

    result.assertions.push_back(detail::make_assertion(
        "existence_dichotomy", "exists iff q*f integer, all grid points", dichotomy ? 1.0 : 0.0,
        0.0, dichotomy));
    result.assertions.push_back(detail::make_assertion(
        "quantized_spectrum_match", "< 1e-12", worst_match, 1e-12, worst_match < 1e-12));
    result.assertions.push_back(detail::make_assertion(
        "nonquantized_spectra_differ", "> 1e-3 somewhere off quantization", best_mismatch, 1e-3,
        best_mismatch > 1e-3));
    return result;
}

/// Evolves a seeded random banded state under the flux-threaded truncated
/// dynamics and its restricted-gauge transform under the flux-free one;
/// the on-band deviation between the transported trajectories must stay
/// below 1e-10 (it is an exact identity up to rounding).
inline ExperimentResult run_frame_equivalence(const ExperimentSpec& spec) {
    const RingParams& rp = spec.ring;
    std::mt19937_64 rng(spec.seed);
    const RVector potential = make_disorder_potential(rp.n_sites, rp.disorder, rng);
    const RingLattice ring = build_ring(rp.n_sites, rp.charge, spec.flux);
    const FluxHamiltonian h = build_peierls_hamiltonian(ring, rp.hop, potential);
    const BandKernel kernel = triangular_kernel(rp.n_sites, spec.bandwidth);
    const RestrictedGauge v = restricted_gauge(ring, spec.bandwidth);

    const DensityMatrix rho0 = random_banded_state(rp.n_sites, spec.bandwidth - 1, rng);
    const DensityMatrix rho0_bar = apply_restricted_gauge_to_density(v, rho0);
    const FluxHamiltonian h_bar = apply_restricted_gauge_to_hamiltonian(v, h);

    ExperimentResult result;
    result.kind = ExperimentKind::frame_equivalence;

    const int stride = std::max(1, spec.evolution.snapshot_stride);
    std::vector<DensityMatrix> lab_frames, transformed_frames;
    const EvolutionSpec evo = band_truncated_spec(spec.evolution.dt, spec.evolution.n_steps,
                                                  kernel, 200, stride);
    evolve_band_truncated(h, rho0, evo, [&](int, double, const DensityMatrix& s) {
        lab_frames.push_back(s);
    });
    evolve_band_truncated(h_bar, rho0_bar, evo, [&](int, double, const DensityMatrix& s) {
        transformed_frames.push_back(s);
    });

    double worst = 0.0;
    for (std::size_t i = 0; i < lab_frames.size(); ++i) {
        const DensityMatrix transported = apply_restricted_gauge_to_density(v, lab_frames[i]);
        const double residual = max_abs(transported.mat - transformed_frames[i].mat);
        worst = std::max(worst, residual);
        result.sweep_rows.push_back(
            {spec.flux, "frame_residual_step_" + std::to_string((i + 1) * stride), residual});
    }
    result.assertions.push_back(detail::make_assertion("frame_equivalence_residual", "< 1e-10",
                                                       worst, 1e-10, worst < 1e-10));
    return result;
}

/// Cut-gauge negative control: the single-valued-by-cutting transformation
/// concentrates the holonomy on the cut bond instead of removing it, the
/// spectrum stays that of the flux-threaded ring, and a coherent (ODLRO)
/// state's observables remain flux-dependent.
inline ExperimentResult run_negative_control(const ExperimentSpec& spec) {
    const RingParams& rp = spec.ring;
    std::mt19937_64 rng(spec.seed);
    const RVector potential = make_disorder_potential(rp.n_sites, rp.disorder, rng);
    const RingLattice ring = build_ring(rp.n_sites, rp.charge, spec.flux);
    const FluxHamiltonian h = build_peierls_hamiltonian(ring, rp.hop, potential);
    const FluxHamiltonian h_free =
        build_peierls_hamiltonian(build_ring(rp.n_sites, rp.charge, 0.0), rp.hop, potential);

    const CutGaugeUnitary cut = cut_gauge_unitary(ring);
    const FluxHamiltonian h_cut = gauge_conjugate_hamiltonian(cut, h);
    const int n = rp.n_sites;

    ExperimentResult result;
    result.kind = ExperimentKind::negative_control;

    double interior_phase_dev = 0.0;  // interior bonds must come out flux-free
    for (int s = 0; s + 1 < n; ++s)
        interior_phase_dev =
            std::max(interior_phase_dev, std::abs(h_cut.mat(s + 1, s) - cx{-rp.hop, 0.0}));
    const cx expected_holonomy =
        std::exp(imag_unit * (2.0 * pi * rp.charge * spec.flux));
    const double cut_bond_dev = std::abs(h_cut.mat(0, n - 1) + rp.hop * expected_holonomy);
    const double holonomy_dev = std::abs(loop_holonomy(h_cut) - expected_holonomy);
    const double spectrum_dev = (spectrum(h_cut) - spectrum(h)).cwiseAbs().maxCoeff();
    const double free_spectrum_gap = (spectrum(h_cut) - spectrum(h_free)).cwiseAbs().maxCoeff();

    // Flux response of a coherent state: ground-state persistent currents at
    // two fluxes a quarter period apart.
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.mat);
    const DensityMatrix gs = pure_state(solver.eigenvectors().col(0));
    const double current_here = persistent_current(h, gs);
    const double f_shifted = spec.flux + 0.25 / std::abs(rp.charge);
    const FluxHamiltonian h_shifted =
        build_peierls_hamiltonian(build_ring(n, rp.charge, f_shifted), rp.hop, potential);
    Eigen::SelfAdjointEigenSolver<CMatrix> solver_shifted(h_shifted.mat);
    const DensityMatrix gs_shifted = pure_state(solver_shifted.eigenvectors().col(0));
    const double current_shift =
        std::abs(persistent_current(h_shifted, gs_shifted) - current_here);

    result.sweep_rows.push_back({spec.flux, "interior_phase_deviation", interior_phase_dev});
    result.sweep_rows.push_back({spec.flux, "cut_bond_deviation", cut_bond_dev});
    result.sweep_rows.push_back({spec.flux, "holonomy_deviation", holonomy_dev});
    result.sweep_rows.push_back({spec.flux, "spectrum_deviation_vs_flux", spectrum_dev});
    result.sweep_rows.push_back({spec.flux, "spectrum_gap_vs_fluxfree", free_spectrum_gap});
    result.sweep_rows.push_back({spec.flux, "odlro_current_shift", current_shift});

    result.assertions.push_back(detail::make_assertion(
        "cut_concentrates_holonomy", "interior bonds flux-free, cut bond carries exp(i 2 pi q f)",
        std::max(interior_phase_dev, cut_bond_dev), 1e-12,
        std::max(interior_phase_dev, cut_bond_dev) < 1e-12));
    result.assertions.push_back(detail::make_assertion(
        "holonomy_preserved", "< 1e-12", holonomy_dev, 1e-12, holonomy_dev < 1e-12));
    result.assertions.push_back(detail::make_assertion(
        "spectrum_preserved", "< 1e-12", spectrum_dev, 1e-12, spectrum_dev < 1e-12));

    const double qf = double(rp.charge) * spec.flux;
    const bool quantized = std::abs(qf - std::round(qf)) <= kFluxIntTol;
    if (!quantized) {
        result.assertions.push_back(detail::make_assertion(
            "cut_does_not_remove_flux", "spectrum differs from flux-free by > 1e-3",
            free_spectrum_gap, 1e-3, free_spectrum_gap > 1e-3));
        result.assertions.push_back(detail::make_assertion(
            "odlro_state_flux_dependent", "ground-state current shifts by > 1e-3", current_shift,
            1e-3, current_shift > 1e-3));
    }
    return result;
}

inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
    switch (spec.kind) {
        case ExperimentKind::flux_sweep: return run_flux_sweep(spec);
        case ExperimentKind::crossover_scan: return run_crossover_scan(spec);
        case ExperimentKind::quantized_flux_check: return run_quantized_flux_check(spec);
        case ExperimentKind::frame_equivalence: return run_frame_equivalence(spec);
        case ExperimentKind::negative_control: return run_negative_control(spec);
    }
    throw std::logic_error("run_experiment: unknown experiment kind");
}

} // namespace ringab
