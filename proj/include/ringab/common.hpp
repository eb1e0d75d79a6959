// Shared scalar types, ring geometry helpers, and error taxonomy.
#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ringab {

using cx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cx imag_unit{0.0, 1.0};

// Default absolute tolerances. Bandedness is a hard zero in exact arithmetic;
// numerics need a threshold (configurable at call sites).
inline constexpr double kBandTol = 1e-12;
inline constexpr double kFluxIntTol = 1e-9;

/// Raised when a full gauge function would be multiple-valued on the ring,
/// i.e. when charge*flux is not an integer. This failure mode is load-bearing:
/// tests assert that it fires exactly off the quantized-flux points.
class NotSingleValued : public std::runtime_error {
public:
    explicit NotSingleValued(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a density matrix carries coherence beyond the stated band,
/// i.e. the state has (numerical) ODLRO and the restricted construction
/// does not apply to it.
class NotBanded : public std::runtime_error {
public:
    NotBanded(const std::string& what, int separation, double magnitude)
        : std::runtime_error(what), separation(separation), magnitude(magnitude) {}
    int separation;
    double magnitude;
};

/// Raised when a requested bandwidth reaches half the ring circumference,
/// where the shortest-arc convention stops being single-valued.
class BandTooWide : public std::invalid_argument {
public:
    explicit BandTooWide(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised by loop_holonomy when a hopping bond is numerically zero.
class BrokenRing : public std::runtime_error {
public:
    explicit BrokenRing(const std::string& what) : std::runtime_error(what) {}
};

/// Raised by generator-mode steppers when positivity drifts past the
/// rejection threshold (integrator step too large).
class StepRejected : public std::runtime_error {
public:
    explicit StepRejected(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration parsing failure carrying every violation found, not just
/// the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations(std::move(violations)) {}
    std::vector<std::string> violations;

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid configuration:";
        for (const auto& e : v) s += "\n  - " + e;
        return s;
    }
};

/// Signed shortest-arc displacement from site `from` to site `to` on an
/// n-site ring, in (-n/2, n/2]; the even-n antipode is assigned +n/2.
inline int shortest_arc(int from, int to, int n_sites) {
    int d = (to - from) % n_sites;
    if (d < 0) d += n_sites;
    if (2 * d > n_sites) d -= n_sites;
    return d;
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const CMatrix& m, double tol = kBandTol) {
    return max_abs(m - m.adjoint()) <= tol;
}

} // namespace ringab
