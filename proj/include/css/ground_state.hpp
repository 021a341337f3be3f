#pragma once

// Radial ground state of  -U'' - U'/r + v0 U = U^{p-1},  U'(0) = 0,  U(inf) = 0,
// its decay diagnostics, and the spectrum of the linearized 2D operator.

#include <vector>

#include "css/grid.hpp"

namespace css {

struct RadialProfile {
    double p = 0.0;
    double v0 = 0.0;
    double u0 = 0.0;
    double tol = 0.0;
    double r_max = 0.0;
    double dr = 0.0;
    std::vector<double> r;   // uniform nodes 0, dr, ..., r_max
    std::vector<double> u;
    std::vector<double> du;

    /// Builds a profile from samples on uniform nodes starting at 0.
    static RadialProfile from_samples(std::vector<double> r, std::vector<double> u, std::vector<double> du,
                                      double p, double v0);

    /// Cubic Hermite interpolation of U; 0 beyond r_max.
    double value(double radius) const;
    /// Cubic Hermite interpolation of U' (derivative of the interpolant); 0 beyond r_max.
    double derivative(double radius) const;

    /// 2 pi \int_0^{r_max} r U(r)^q dr (composite Simpson).
    double integral_pow(double q) const;
    /// 2 pi \int_0^{r_max} r U'(r)^2 dr.
    double integral_grad_sq() const;
    /// Max |-U'' - U'/r + v0 U - U^{p-1}| over interior nodes (U'' by 4th-order differences of U').
    double equation_residual() const;
};

struct GroundStateOptions {
    double r_max = 32.0;
    double dr = 1e-3;
    /// The shooting integration always runs at least this far so U(0) does not depend on r_max.
    double shooting_horizon = 40.0;
};

/// Shooting + bisection on U(0). Throws Error(Parameter) for p <= 2, v0 <= 0 or a bad tol,
/// Error(Solver, "no ground state bracket") if no bracket is found.
RadialProfile solve_ground_state(double p, double v0, double tol, const GroundStateOptions& options = {});

struct AsymptoticsReport {
    double c_hat = 0.0;     // median of r^{1/2} e^{r} U(r) over the tail window
    double c_spread = 0.0;  // (max - min) / median over the window
    double slope = 0.0;     // median of U'/U over the window
    bool pass = false;      // c_spread <= 5% and |slope + 1| <= 2e-2
};

/// Tail window [r_max - 4, r_max - 1], radii measured in units of 1/sqrt(v0).
/// Throws Error(Parameter, "tail window unavailable") if r_max < 12.
AsymptoticsReport check_decay_asymptotics(const RadialProfile& profile);

struct SpectrumReport {
    std::vector<double> eigenvalues;      // 4 smallest in magnitude, sorted by |lambda|
    std::vector<Field2D> eigenvectors;    // matching, unit L2 norm
    int near_kernel_dim = 0;              // count with |lambda| <= threshold
    double near_kernel_threshold = 0.0;   // 10 spacing^2
    double alignment = 0.0;               // smallest principal-angle cosine vs span{d1 U, d2 U}
    double lowest_eigenvalue = 0.0;
    int iterations = 0;
};

/// Lowest eigenpairs of -Delta + v0 - (p-1) U^{p-2} on the grid (U centered at the grid center)
/// by preconditioned block iteration. Throws Error(Parameter) if spacing > 0.1 and
/// Error(Solver, "spectrum failed") on non-convergence.
SpectrumReport nondegeneracy_spectrum(const RadialProfile& profile, const Grid2D& grid);

/// U(|x - c|) sampled on the grid.
Field2D sample_profile(const RadialProfile& profile, const Grid2D& grid, Point c, double scale = 1.0);

}  // namespace css
