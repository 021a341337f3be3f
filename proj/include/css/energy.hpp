#pragma once

// The reduced functional
//
//   I(u) = 1/2 \int (eps^2 |grad u|^2 + V u^2) + 1/2 \int (A1^2 + A2^2) u^2 - 1/p \int |u|^p
//
// with A slaved to u, its first and second variations, and the expansion of
// I at the multi-peak ansatz.
//
// The kinetic term is the quadratic form -eps^2/2 \int u Lap_h u of the
// sixth-order discrete Laplacian, so the L2 gradient and Hessian below are the
// exact derivatives of the discrete functional.

#include <optional>

#include "css/gauge.hpp"
#include "css/ground_state.hpp"
#include "css/peaks.hpp"
#include "css/potential.hpp"

namespace css {

struct ProblemSpec {
    double p = 4.0;
    Potential potential;
    double epsilon = 0.1;
    bool gauge = true;  // false drops the Chern-Simons terms (local problem only)
};

void validate(const ProblemSpec& spec);

struct EnergyBreakdown {
    double kinetic = 0.0;         // 1/2 \int eps^2 |grad u|^2
    double potential_term = 0.0;  // 1/2 \int V u^2
    double gauge_term = 0.0;      // 1/2 \int (A1^2 + A2^2) u^2
    double nonlinear = 0.0;       // -1/p \int |u|^p
    double total = 0.0;
    double j_functional = 0.0;    // J(u, A(u)) in the A0-free form, from the shared gauge fields
    double j_with_a0 = 0.0;       // J with the A0 terms kept: + 1/2 \int A0 u^2 + \int A0 F12
};

/// eps^2 \int grad v1 . grad v2 + \int v1 v2, realized as \int v1 (-eps^2 Lap_h + 1) v2.
double inner_product_eps(const Field2D& v1, const Field2D& v2, double epsilon);
double norm_eps(const Field2D& v, double epsilon);
/// (-eps^2 Lap_h + 1) v; inner_product_eps(a, b) = dot(a, apply_metric(b)).
Field2D apply_metric(const Field2D& v, double epsilon);
/// Inverse of apply_metric: the <.,.>_eps Riesz representative of the L2 functional g.
Field2D riesz_representative(const Field2D& g, double epsilon);

class EnergyModel {
public:
    EnergyModel(ProblemSpec spec, Grid2D grid);

    const ProblemSpec& spec() const { return spec_; }
    const Grid2D& grid() const { return grid_; }
    const Field2D& potential_field() const { return v_; }

    EnergyBreakdown evaluate(const Field2D& u) const;
    /// L2 gradient g: dI(u)[psi] = \int g psi.
    Field2D first_variation(const Field2D& u) const;

    /// Hessian of I at a fixed base point; apply() is linear and symmetric.
    class Linearization {
    public:
        Field2D apply(const Field2D& w) const;
        const Field2D& base() const { return u_; }

    private:
        friend class EnergyModel;
        Linearization(const EnergyModel& model, Field2D u);
        const EnergyModel* model_;
        Field2D u_;
        Field2D rho_;
        Field2D local_;  // V + |a|^2 + a0 - (p-1)|u|^{p-2}
        std::optional<GaugeFields> gauge_;
    };
    Linearization linearize(const Field2D& u) const;
    Field2D second_variation_apply(const Field2D& u, const Field2D& w) const { return linearize(u).apply(w); }

private:
    ProblemSpec spec_;
    Grid2D grid_;
    Field2D v_;
};

/// Convenience wrappers building a model on u's grid.
EnergyBreakdown evaluate_I(const ProblemSpec& spec, const Field2D& u);
Field2D first_variation(const ProblemSpec& spec, const Field2D& u);
Field2D second_variation_apply(const ProblemSpec& spec, const Field2D& u, const Field2D& w);

/// (1/2 - 1/p) k eps^2 \int U^p - 1/2 sum_i (V(x0) - V(y^i)) eps^2 \int U^2
///   - c_fit eps^2 sum_{i != j} exp(-|y^i - y^j| / eps)
/// with the radial integrals taken by 1D quadrature. Ordered pairs in the sum.
/// Throws Error(Infeasible) for inadmissible peaks.
double expansion_prediction(const ProblemSpec& spec, const RadialProfile& profile, const PeakConfiguration& peaks,
                            double c_fit);

struct DecompositionReport {
    double linear = 0.0;     // l(phi) = \int I'(U*) phi
    double quadratic = 0.0;  // 1/2 \int (L phi) phi
    double remainder = 0.0;  // I(U* + phi) - I(U*) - l(phi) - Q(phi)
    double phi_norm = 0.0;   // ||phi||_eps
};

DecompositionReport decomposition_residual(const EnergyModel& model, const Field2D& ansatz, const Field2D& phi);

}  // namespace css
