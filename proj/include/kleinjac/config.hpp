#pragma once

#include <cstdint>

namespace kleinjac {

// Numerical thresholds used across the pipeline. All values are defaults and
// may be overridden per run (the CLI exposes the quadrature and lattice ones).
struct Tolerances {
    // Relative tolerance for adaptive Gauss-Legendre refinement of path
    // integrals.
    double quad_rel = 1e-11;
    // Lattice-distance threshold deciding principality and sigma1-fixedness.
    double lattice = 1e-6;
    // Branch-point clearance for paths, as a fraction of the branch scale.
    double clearance_factor = 1e-6;
    // Point-equality tolerance for divisor support keys, scaled by the
    // branch scale.
    double point_eq = 1e-9;
    // Cached y values must satisfy |y^2 - p(x)| below this.
    double point_y = 1e-10;
    // Residual bound for the sigma-invariance of the adapted basis.
    double sigma_invariance = 1e-8;
    // Imaginary parts below this count as zero in harmonic-form coefficients.
    double harmonic_reality = 1e-9;
    // Defect bounds reported by the period validation.
    double tau_symmetry = 1e-8;
    double gamma_block = 1e-9;
    // Condition-number guard on the normalization solve.
    double condition_guard = 1e12;
    // Condition-number guard on the real 2g x 2g lattice system.
    double lattice_condition = 1e10;
    // Lattice generators must be conjugation-stable to this residual.
    double lattice_sigma_stable = 1e-8;
    // Maximum bisection depth of the adaptive quadrature.
    int quad_max_depth = 30;
    // Retry budget for jittered cycle routing.
    int routing_retries = 8;
};

struct Config {
    Tolerances tol;
    std::uint64_t seed = 0;
};

} // namespace kleinjac
