#pragma once

// Lyapunov-Schmidt step: the multi-peak ansatz, the constraint space E
// orthogonal to the translation modes, and the correction phi in E solving
// P I'(U* + phi) = 0.
//
// Everything is expressed through Riesz representatives in <.,.>_eps: an L2
// gradient g is represented by M^{-1} g with M = -eps^2 Lap_h + 1, so the
// projected Hessian A = P M^{-1} L P is self-adjoint in <.,.>_eps.

#include <vector>

#include "css/energy.hpp"
#include "css/krylov.hpp"

namespace css {

/// sum_i U(|x - y^i| / eps). Throws Error(Infeasible, "outside D_k") for inadmissible peaks and
/// Error(Infeasible, "insufficient margin") if a peak lies within 6 eps of the box edge.
Field2D build_ansatz(const RadialProfile& profile, const PeakConfiguration& peaks, const Grid2D& grid);

/// The 2k fields dU_{eps,y^i}/dy^i_l = -(1/eps) (d_l U)((x - y^i)/eps), ordered (i, l).
std::vector<Field2D> tangent_basis(const RadialProfile& profile, const PeakConfiguration& peaks, const Grid2D& grid);

/// <.,.>_eps-orthogonal projection onto the complement of span(basis).
class Projector {
public:
    /// Throws Error(Numeric, "peaks nearly coincident") if the Gram matrix condition exceeds 1e6.
    Projector(std::vector<Field2D> basis, double epsilon);

    Field2D apply(const Field2D& v) const;
    /// max_b |<v, b>_eps| / (||v||_eps ||b||_eps).
    double membership_defect(const Field2D& v) const;
    double gram_condition() const { return condition_; }
    const std::vector<Field2D>& basis() const { return basis_; }
    double epsilon() const { return epsilon_; }

private:
    std::vector<Field2D> basis_;
    std::vector<Field2D> metric_basis_;  // M b
    std::vector<double> gram_inverse_;   // row-major 2k x 2k
    double epsilon_;
    double condition_ = 1.0;
};

Field2D project_E(const Field2D& v, const std::vector<Field2D>& basis, double epsilon);

struct LinearSolveReport {
    Field2D w;
    int iterations = 0;
    double relative_residual = 0.0;
    double min_abs_ritz = 0.0;  // coercivity surrogate
};

/// Solves P M^{-1} L w = rhs for w in E, rhs in E (Riesz form), by MINRES in <.,.>_eps.
/// Throws Error(Solver, "L_eps solve stagnated") when the iteration cap is reached.
LinearSolveReport solve_L_on_E(const EnergyModel::Linearization& lin, const Projector& proj, const Field2D& rhs,
                               const MinresOptions& options = {}, const Field2D* guess = nullptr);

struct ReductionOptions {
    int max_iterations = 50;
    double step_tol = 1e-9;
    double linear_tol = 1e-8;
    int linear_cap = 2000;
};

struct ReductionResult {
    Field2D phi;
    double phi_norm_eps = 0.0;
    int iterations = 0;
    std::vector<double> contraction_ratios;  // ||w_{n+1} - w_n|| / ||w_n - w_{n-1}||
    double residual_norm = 0.0;              // ||P M^{-1} I'(U* + phi)||_eps
    double initial_residual_norm = 0.0;      // ||P M^{-1} I'(U*)||_eps, the Riesz norm of the projected l_eps
    double membership_defect = 0.0;
    double min_abs_ritz = 0.0;               // smallest over all linear solves
    int linear_iterations = 0;
};

/// Chord iteration  w_{n+1} = -A^{-1} (lbar + P M^{-1} R'(w_n)),  A = P M^{-1} L(U*) P.
/// Throws Error(Solver, "contraction failed") after 3 consecutive ratios >= 1.
ReductionResult solve_correction(const EnergyModel& model, const RadialProfile& profile,
                                 const PeakConfiguration& peaks, const ReductionOptions& options = {},
                                 const Field2D* warm_start = nullptr);

/// Computational box centred at x0 with half-width box_scale * eps.
Grid2D reduction_grid(const PeakConfiguration& peaks, std::size_t n, double box_scale = 12.0);

}  // namespace css
