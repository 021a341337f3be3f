#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "css/grid.hpp"

namespace css {

/// External potential V with a local maximum at x0, Hölder data (L, theta) and
/// the radius delta of the ball on which x0 is a strict maximum.
struct Potential {
    std::string family;
    std::function<double(Point)> evaluator;
    Point x0;
    double delta = 2.0;
    double holder_L = 0.0;
    double holder_theta = 1.0;
    double v_inf = 0.0;

    double operator()(Point x) const { return evaluator(x); }
    double at_max() const { return evaluator(x0); }

    static Potential constant(double value);
    /// a + b / (1 + |x - x0|^2); Lipschitz with L = b 3 sqrt(3) / 8.
    static Potential radial_bump(double a, double b, Point x0 = {}, double delta = 2.0);
    /// a + b / (1 + q1 (x1 - x01)^2 + q2 (x2 - x02)^2).
    static Potential anisotropic_bump(double a, double b, double q1, double q2, Point x0 = {}, double delta = 2.0);
};

struct AssumptionReport {
    bool lower_bound_ok = false;  // V >= v_inf > 0 on sampled points
    bool strict_max_ok = false;   // V < V(x0) on a ring sample of B_delta(x0) \ {x0}
    bool holder_ok = false;       // |V(x) - V(y)| <= L |x - y|^theta on random pairs
    double min_value = 0.0;
    double worst_holder_ratio = 0.0;
};

/// Samples the grid points, a ring of radii in (0, delta) and random pairs.
AssumptionReport check_assumptions(const Potential& v, const Grid2D& grid, std::uint64_t seed = 7);

}  // namespace css
