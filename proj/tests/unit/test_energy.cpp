#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "css/energy.hpp"
#include "css/landscape.hpp"
#include "css/reduction.hpp"

using namespace css;

namespace {

struct Setup {
    RadialProfile profile = solve_ground_state(4.0, 1.0, 1e-10);
    ProblemSpec spec{4.0, Potential::radial_bump(0.8, 0.2), 0.2, true};
    PeakConfiguration peaks{0.2, {{0.0, 0.0}}, {0.0, 0.0}, 2.0};
    Grid2D grid = reduction_grid(peaks, 128);
    EnergyModel model{spec, grid};
    Field2D ansatz = build_ansatz(profile, peaks, grid);
};

const Setup& setup() {
    static const Setup s;
    return s;
}

Field2D random_bumps(const Grid2D& grid, double width, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> pos(-2.0 * width, 2.0 * width);
    std::normal_distribution<double> amp;
    Field2D f(grid);
    for (int b = 0; b < 4; ++b) {
        const Point c = grid.center() + Point{pos(rng), pos(rng)};
        const double a = amp(rng);
        f += Field2D::sample(grid, [&](Point x) {
            const Point d = x - c;
            return a * std::exp(-(d.x1 * d.x1 + d.x2 * d.x2) / (width * width));
        });
    }
    return f;
}

double fitted_order(const std::vector<double>& t, const std::vector<double>& r) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double x = std::log(t[i]), y = std::log(std::abs(r[i]));
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

TEST_SUITE("energy") {
    TEST_CASE("epsilon inner product") {
        const Setup& s = setup();
        std::mt19937_64 rng(11);
        const Field2D a = random_bumps(s.grid, 0.2, rng), b = random_bumps(s.grid, 0.2, rng);
        CHECK(inner_product_eps(a, Field2D(s.grid), 0.2) == 0.0);
        const double ab = inner_product_eps(a, b, 0.2), ba = inner_product_eps(b, a, 0.2);
        CHECK(std::abs(ab - ba) <= 1e-12 * std::abs(ab));
        CHECK(norm_eps(a, 0.2) > std::sqrt(dot(a, a)));
        CHECK((riesz_representative(apply_metric(a, 0.2), 0.2) - a).max_abs() <= 1e-12 * a.max_abs());
        CHECK_THROWS_AS(inner_product_eps(a, Field2D(Grid2D(1.0, 128)), 0.2), Error);
    }

    TEST_CASE("epsilon norm of a Gaussian at eps = 1") {
        const Grid2D grid(6.0, 256);
        const Field2D v = Field2D::sample(grid, [](Point x) { return std::exp(-(x.x1 * x.x1 + x.x2 * x.x2)); });
        // |grad v|^2 + v^2 = (4 r^2 + 1) exp(-2 r^2), integrated over the plane.
        auto radial = [](double r) { return 2.0 * std::numbers::pi * r * (4.0 * r * r + 1.0) * std::exp(-2.0 * r * r); };
        const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(radial, 0.0, 10.0, 10, 1e-14);
        CHECK(oracle == doctest::Approx(1.5 * std::numbers::pi).epsilon(1e-12));
        CHECK(std::abs(inner_product_eps(v, v, 1.0) - oracle) <= 1e-6);
    }

    TEST_CASE("zero field has zero energy and gradient") {
        const Setup& s = setup();
        const EnergyBreakdown e = s.model.evaluate(Field2D(s.grid));
        CHECK(e.kinetic == 0.0);
        CHECK(e.potential_term == 0.0);
        CHECK(e.gauge_term == 0.0);
        CHECK(e.nonlinear == 0.0);
        CHECK(e.total == 0.0);
        CHECK(s.model.first_variation(Field2D(s.grid)).max_abs() == 0.0);
        CHECK(s.model.second_variation_apply(s.ansatz, Field2D(s.grid)).max_abs() == 0.0);
    }

    TEST_CASE("I and J agree on shared gauge fields") {
        const Setup& s = setup();
        const EnergyBreakdown e = s.model.evaluate(s.ansatz);
        CHECK(std::abs(e.total - e.j_functional) <= 1e-10 * std::abs(e.total));
        CHECK(e.total == doctest::Approx(e.kinetic + e.potential_term + e.gauge_term + e.nonlinear));
        CHECK(e.gauge_term > 0.0);
        CHECK(e.nonlinear < 0.0);
    }

    TEST_CASE("gauge term scales like eps^4") {
        const Setup& s = setup();
        std::vector<double> eps{0.4, 0.2, 0.1}, gauge;
        for (double e : eps) {
            const PeakConfiguration pc{e, {{0.0, 0.0}}, {0.0, 0.0}, 2.0};
            const Grid2D grid = reduction_grid(pc, 128);
            ProblemSpec spec = s.spec;
            spec.epsilon = e;
            gauge.push_back(EnergyModel(spec, grid).evaluate(build_ansatz(s.profile, pc, grid)).gauge_term);
        }
        const double slope = fitted_order(eps, gauge);
        CHECK(slope >= 3.6);
        CHECK(slope <= 4.4);
    }

    TEST_CASE("first variation matches central differences") {
        const Setup& s = setup();
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 3; ++trial) {
            const Field2D u = s.ansatz + 0.3 * random_bumps(s.grid, 0.2, rng);
            const Field2D psi = random_bumps(s.grid, 0.2, rng);
            const double h = 1e-4;
            const double fd = (s.model.evaluate(u + h * psi).total - s.model.evaluate(u - h * psi).total) / (2 * h);
            const double an = dot(s.model.first_variation(u), psi);
            CHECK(std::abs(fd - an) <= 1e-5 * std::abs(an));
        }
    }

    TEST_CASE("second variation matches differences of the first and is symmetric") {
        const Setup& s = setup();
        std::mt19937_64 rng(5);
        const Field2D u = s.ansatz + 0.2 * random_bumps(s.grid, 0.2, rng);
        const Field2D w1 = random_bumps(s.grid, 0.2, rng), w2 = random_bumps(s.grid, 0.2, rng);
        const auto lin = s.model.linearize(u);
        const Field2D lw1 = lin.apply(w1), lw2 = lin.apply(w2);
        const double h = 1e-4;
        const Field2D fd = (0.5 / h) * (s.model.first_variation(u + h * w1) - s.model.first_variation(u - h * w1));
        CHECK((fd - lw1).max_abs() <= 1e-4 * lw1.max_abs());
        const double a = dot(lw1, w2), b = dot(lw2, w1);
        CHECK(std::abs(a - b) <= 1e-8 * std::abs(a));
        CHECK((lin.apply(2.0 * w1 + w2) - (2.0 * lw1 + lw2)).max_abs() <= 1e-10 * lw1.max_abs());
    }

    TEST_CASE("local ansatz is a critical point up to grid error") {
        const Setup& s = setup();
        const ProblemSpec local{4.0, Potential::constant(1.0), 0.1, false};
        const PeakConfiguration pc{0.1, {{0.0, 0.0}}, {0.0, 0.0}, 2.0};
        const Grid2D grid = reduction_grid(pc, 256);
        const Field2D u = build_ansatz(s.profile, pc, grid);
        const Field2D g = EnergyModel(local, grid).first_variation(u);
        CHECK(g.max_abs() <= 5e-3 * std::pow(u.max(), 3.0));
    }

    TEST_CASE("first variation at the ansatz shrinks with eps") {
        const Setup& s = setup();
        std::vector<double> eps{0.4, 0.2, 0.1}, dual;
        for (double e : eps) {
            const PeakConfiguration pc{e, {{0.0, 0.0}}, {0.0, 0.0}, 2.0};
            const Grid2D grid = reduction_grid(pc, 256);
            ProblemSpec spec = s.spec;
            spec.epsilon = e;
            const Field2D g = EnergyModel(spec, grid).first_variation(build_ansatz(s.profile, pc, grid));
            dual.push_back(std::sqrt(dot(g, riesz_representative(g, e))));
        }
        MESSAGE("dual norms " << dual[0] << " " << dual[1] << " " << dual[2]);
        CHECK(fitted_order(eps, dual) >= 1.0);
    }

    TEST_CASE("gauge-free model drops the gauge term") {
        const Setup& s = setup();
        ProblemSpec local = s.spec;
        local.gauge = false;
        const EnergyModel m(local, s.grid);
        const EnergyBreakdown e = m.evaluate(s.ansatz);
        CHECK(e.gauge_term == 0.0);
        CHECK(e.total == doctest::Approx(s.model.evaluate(s.ansatz).total - s.model.evaluate(s.ansatz).gauge_term));
    }

    TEST_CASE("expansion prediction arithmetic") {
        const Setup& s = setup();
        const double eps = 0.2;
        const double lead = 0.25 * eps * eps * s.profile.integral_pow(4.0);
        CHECK(expansion_prediction(s.spec, s.profile, s.peaks, 12.6) == doctest::Approx(lead).epsilon(1e-14));
        PeakConfiguration off = s.peaks;
        off.peaks[0] = {0.3, 0.0};
        const double dv = s.spec.potential.at_max() - s.spec.potential({0.3, 0.0});
        const double expect = -0.5 * dv * eps * eps * s.profile.integral_pow(2.0);
        CHECK(expansion_prediction(s.spec, s.profile, off, 12.6) - lead == doctest::Approx(expect).epsilon(1e-12));
        PeakConfiguration pair = s.peaks;
        pair.peaks = {{-0.4, 0.0}, {0.4, 0.0}};
        const double vpair = s.spec.potential.at_max() - s.spec.potential({0.4, 0.0});
        const double expect_pair = 2 * lead - vpair * eps * eps * s.profile.integral_pow(2.0) -
                                   12.6 * eps * eps * 2.0 * std::exp(-0.8 / eps);
        CHECK(expansion_prediction(s.spec, s.profile, pair, 12.6) == doctest::Approx(expect_pair).epsilon(1e-12));
        PeakConfiguration far = s.peaks;
        far.peaks[0] = {1.5, 0.0};
        CHECK_THROWS_AS(expansion_prediction(s.spec, s.profile, far, 12.6), Error);
    }

    TEST_CASE("decomposition of the energy around the ansatz") {
        const Setup& s = setup();
        const DecompositionReport zero = decomposition_residual(s.model, s.ansatz, Field2D(s.grid));
        CHECK(zero.linear == 0.0);
        CHECK(zero.quadratic == 0.0);
        CHECK(zero.remainder == 0.0);
        CHECK(zero.phi_norm == 0.0);

        std::mt19937_64 rng(9);
        const Field2D psi = random_bumps(s.grid, 0.2, rng);
        std::vector<double> ts{1e-1, 1e-2, 1e-3}, rs;
        for (double t : ts) rs.push_back(decomposition_residual(s.model, s.ansatz, t * psi).remainder);
        // The remainder is cubic; the quartic term shifts the three-point fit by about 0.01.
        CHECK(fitted_order(ts, rs) >= 2.95);
    }

    // The pair interaction of two planar ground states carries a (d/eps)^{-1/2} prefactor, so the
    // discrepancy against the pure exponential model decays no faster than exp(-d/eps).
    TEST_CASE("two-peak discrepancy decays faster than the interaction term" * doctest::may_fail()) {
        const ProblemSpec flat{4.0, Potential::constant(1.0), 1e-3, false};
        const InteractionFit fit = fit_interaction_constant(flat, setup().profile, {6, 7, 8, 9, 10}, 256);
        std::vector<double> s, d;
        for (std::size_t i = 0; i < fit.s.size(); ++i) {
            s.push_back(fit.s[i]);
            d.push_back(std::abs(fit.excess[i] - fit.c_fit * 1e-6 * 2.0 * std::exp(-fit.s[i])));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double y = std::log(d[i]);
            sx += s[i], sy += y, sxx += s[i] * s[i], sxy += s[i] * y;
        }
        const double m = static_cast<double>(s.size());
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        MESSAGE("discrepancy slope " << slope << ", interaction slope " << fit.slope);
        CHECK(slope < -1.0);
    }

    TEST_CASE("problem validation") {
        ProblemSpec bad{1.5, Potential::constant(1.0), 0.1, true};
        CHECK_THROWS_AS(validate(bad), Error);
        bad.p = 4.0;
        bad.epsilon = 1.5;
        CHECK_THROWS_AS(validate(bad), Error);
    }
}
