#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ringab/ring_model.hpp"
#include "oracles.hpp"

using namespace ringab;

TEST_CASE("shortest arc convention") {
    // delta in (-N/2, N/2], zero on the diagonal, antisymmetric away from the
    // even-N antipode, which is assigned +N/2.
    CHECK(shortest_arc(0, 0, 8) == 0);
    CHECK(shortest_arc(0, 3, 8) == 3);
    CHECK(shortest_arc(3, 0, 8) == -3);
    CHECK(shortest_arc(0, 5, 8) == -3);
    CHECK(shortest_arc(0, 4, 8) == 4);   // antipode
    CHECK(shortest_arc(4, 0, 8) == 4);   // antipode, both positive
    CHECK(shortest_arc(0, 3, 7) == 3);
    CHECK(shortest_arc(0, 4, 7) == -3);
    CHECK(shortest_arc(6, 0, 7) == 1);

    for (int n : {3, 4, 7, 8, 16, 17}) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const int d = shortest_arc(i, j, n);
                CHECK(2 * d <= n);
                CHECK(2 * d > -n);
                CHECK(((j - i) - d) % n == 0);
                if (2 * std::abs(d) != n) CHECK(shortest_arc(j, i, n) == -d);
            }
    }
}

TEST_CASE("build_ring validation") {
    const RingLattice ring = build_ring(8, -1, 0.5);
    CHECK(ring.n_sites == 8);
    CHECK(ring.charge == -1);
    CHECK(ring.flux == doctest::Approx(0.5));
    CHECK_THROWS_AS(build_ring(2, -1, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(build_ring(8, 0, 0.3), std::invalid_argument);
}

TEST_CASE("zero flux ring has real bonds") {
    const auto h = build_peierls_hamiltonian(build_ring(8, -1, 0.0));
    for (int s = 0; s < 8; ++s) {
        CHECK(h.mat((s + 1) % 8, s).real() == doctest::Approx(-1.0));
        CHECK(h.mat((s + 1) % 8, s).imag() == doctest::Approx(0.0));
    }
    CHECK(loop_holonomy(h) == cx{1.0, 0.0});
}

TEST_CASE("peierls hamiltonian structure and spectrum") {
    SUBCASE("N=4 f=0 spectrum {-2, 0, 0, 2}") {
        const auto h = build_peierls_hamiltonian(build_ring(4, -1, 0.0));
        const RVector e = spectrum(h);
        CHECK(e(0) == doctest::Approx(-2.0).epsilon(1e-12));
        CHECK(e(1) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(e(2) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(e(3) == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("N=4 q=-1 f=-0.5 spectrum {-sqrt2, -sqrt2, sqrt2, sqrt2}") {
        const auto h = build_peierls_hamiltonian(build_ring(4, -1, -0.5));
        const RVector e = spectrum(h);
        const double r2 = std::sqrt(2.0);
        CHECK(std::abs(e(0) + r2) < 1e-12);
        CHECK(std::abs(e(1) + r2) < 1e-12);
        CHECK(std::abs(e(2) - r2) < 1e-12);
        CHECK(std::abs(e(3) - r2) < 1e-12);
    }
    SUBCASE("quantized flux reproduces the zero-flux spectrum") {
        const auto h0 = build_peierls_hamiltonian(build_ring(4, -1, 0.0));
        const auto h1 = build_peierls_hamiltonian(build_ring(4, -1, -1.0));
        CHECK((spectrum(h0) - spectrum(h1)).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("hermitian and nearest-neighbor banded") {
        const auto h = build_peierls_hamiltonian(build_ring(9, -2, 0.37));
        CHECK(is_hermitian(h.mat, 1e-15));
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 9; ++j)
                if (std::abs(shortest_arc(i, j, 9)) > 1)
                    CHECK(std::abs(h.mat(i, j)) == 0.0);
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(build_peierls_hamiltonian(build_ring(4, -1, 0.0), 0.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_peierls_hamiltonian(build_ring(4, -1, 0.0), 1.0, RVector::Zero(5)),
                        std::invalid_argument);
    }
}

TEST_CASE("spectrum matches the analytic dispersion across N and f") {
    for (int n : {3, 4, 5, 8, 16, 33, 64}) {
        for (double f : {-2.0, -1.3, -0.5, 0.0, 0.21, 1.0, 2.0}) {
            const auto h = build_peierls_hamiltonian(build_ring(n, -1, f));
            const RVector e = spectrum(h);
            const auto exact = oracles::analytic_ring_spectrum(n, 1.0, -1, f);
            for (int k = 0; k < n; ++k) CHECK(std::abs(e(k) - exact[std::size_t(k)]) < 1e-12);
        }
    }
}

TEST_CASE("spectrum is periodic in f with period 1/|q|") {
    for (int q : {-1, -2, 3}) {
        const double period = 1.0 / std::abs(q);
        for (double f : {-0.8, 0.0, 0.37}) {
            const auto ha = build_peierls_hamiltonian(build_ring(12, q, f));
            const auto hb = build_peierls_hamiltonian(build_ring(12, q, f + period));
            CHECK((spectrum(ha) - spectrum(hb)).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("loop holonomy") {
    SUBCASE("equals exp(i 2 pi q f)") {
        CHECK(std::abs(loop_holonomy(build_peierls_hamiltonian(build_ring(8, -1, 0.0))) -
                       cx{1.0, 0.0}) < 1e-12);
        // quantized flux: exp(-i 2 pi) = 1
        CHECK(std::abs(loop_holonomy(build_peierls_hamiltonian(build_ring(8, -1, 1.0))) -
                       cx{1.0, 0.0}) < 1e-12);
        // q=-1, f=0.5: exp(-i pi) = -1
        CHECK(std::abs(loop_holonomy(build_peierls_hamiltonian(build_ring(8, -1, 0.5))) -
                       cx{-1.0, 0.0}) < 1e-12);
        // q=-2, f=0.5: exp(-i 2 pi) = +1, the paired-carrier cancellation
        CHECK(std::abs(loop_holonomy(build_peierls_hamiltonian(build_ring(8, -2, 0.5))) -
                       cx{1.0, 0.0}) < 1e-12);
    }
    SUBCASE("invariant under single-valued diagonal conjugation") {
        std::mt19937_64 rng(91);
        for (int trial = 0; trial < 20; ++trial) {
            const auto h = build_peierls_hamiltonian(build_ring(10, -1, 0.37));
            const CVector d = oracles::random_diagonal_unitary(10, rng);
            FluxHamiltonian conjugated = h;
            for (int i = 0; i < 10; ++i)
                for (int j = 0; j < 10; ++j)
                    conjugated.mat(i, j) = d(i) * h.mat(i, j) * std::conj(d(j));
            CHECK(std::abs(loop_holonomy(conjugated) - loop_holonomy(h)) < 1e-12);
        }
    }
    SUBCASE("broken ring reported distinctly") {
        auto h = build_peierls_hamiltonian(build_ring(6, -1, 0.2));
        h.mat(3, 2) = 0.0;
        h.mat(2, 3) = 0.0;
        CHECK_THROWS_AS(loop_holonomy(h), BrokenRing);
    }
}

TEST_CASE("disorder potential lands on the diagonal") {
    RVector v(5);
    v << 0.3, -0.1, 0.7, 0.0, -0.4;
    const auto h = build_peierls_hamiltonian(build_ring(5, -1, 0.11), 1.0, v);
    for (int s = 0; s < 5; ++s) CHECK(h.mat(s, s) == cx{v(s), 0.0});
    CHECK(is_hermitian(h.mat, 1e-15));
}
