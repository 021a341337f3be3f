#include "css/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace css {

namespace {
const double kBumpSlope = 3.0 * std::sqrt(3.0) / 8.0;  // max of 2r / (1 + r^2)^2
}

Potential Potential::constant(double value) {
    if (!(value > 0.0)) throw Error(ErrorKind::Parameter, "constant potential must be positive");
    Potential v;
    v.family = "constant";
    v.evaluator = [value](Point) { return value; };
    v.holder_L = 0.0;
    v.v_inf = value;
    return v;
}

Potential Potential::radial_bump(double a, double b, Point x0, double delta) {
    if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorKind::Parameter, "radial bump needs a > 0 and b > 0");
    Potential v;
    v.family = "radial-bump";
    v.evaluator = [a, b, x0](Point x) {
        const Point d = x - x0;
        return a + b / (1.0 + d.x1 * d.x1 + d.x2 * d.x2);
    };
    v.x0 = x0;
    v.delta = delta;
    v.holder_L = b * kBumpSlope;
    v.v_inf = a;
    return v;
}

Potential Potential::anisotropic_bump(double a, double b, double q1, double q2, Point x0, double delta) {
    if (!(a > 0.0) || !(b > 0.0) || !(q1 > 0.0) || !(q2 > 0.0))
        throw Error(ErrorKind::Parameter, "anisotropic bump needs positive a, b, q1, q2");
    Potential v;
    v.family = "anisotropic-bump";
    v.evaluator = [a, b, q1, q2, x0](Point x) {
        const Point d = x - x0;
        return a + b / (1.0 + q1 * d.x1 * d.x1 + q2 * d.x2 * d.x2);
    };
    v.x0 = x0;
    v.delta = delta;
    v.holder_L = b * kBumpSlope * std::sqrt(std::max(q1, q2));
    v.v_inf = a;
    return v;
}

AssumptionReport check_assumptions(const Potential& v, const Grid2D& grid, std::uint64_t seed) {
    AssumptionReport rep;
    rep.min_value = v(grid.point(0, 0));
    for (std::size_t j = 0; j < grid.n(); ++j)
        for (std::size_t i = 0; i < grid.n(); ++i) rep.min_value = std::min(rep.min_value, v(grid.point(i, j)));
    rep.lower_bound_ok = v.v_inf > 0.0 && rep.min_value >= v.v_inf;

    const double vmax = v.at_max();
    rep.strict_max_ok = true;
    for (int ring = 1; ring <= 8; ++ring) {
        const double r = v.delta * ring / 9.0;
        for (int a = 0; a < 16; ++a) {
            const double t = 2.0 * std::numbers::pi * a / 16.0;
            if (!(v(v.x0 + Point{r * std::cos(t), r * std::sin(t)}) < vmax)) rep.strict_max_ok = false;
        }
    }

    std::mt19937_64 rng(seed);
    const double span = std::max(grid.half_width(), v.delta);
    std::uniform_real_distribution<double> coord(-span, span);
    rep.holder_ok = true;
    for (int k = 0; k < 2000; ++k) {
        const Point x = v.x0 + Point{coord(rng), coord(rng)};
        const Point y = x + 0.1 * Point{coord(rng), coord(rng)};
        const double dv = std::abs(v(x) - v(y));
        const double bound = v.holder_L * std::pow(distance(x, y), v.holder_theta);
        if (bound > 0.0) rep.worst_holder_ratio = std::max(rep.worst_holder_ratio, dv / bound);
        if (dv > bound * (1.0 + 1e-12) + 1e-15) rep.holder_ok = false;
    }
    return rep;
}

}  // namespace css
