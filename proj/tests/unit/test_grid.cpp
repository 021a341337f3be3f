#include <doctest.h>

#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "css/grid.hpp"

using namespace css;

namespace {

Field2D gaussian(const Grid2D& g, double s = 1.0) {
    return Field2D::sample(g, [s](Point x) { return std::exp(-(x.x1 * x.x1 + x.x2 * x.x2) / (s * s)); });
}

// Solution of Lap w = exp(-r^2) with w ~ (1/2) log r at infinity.
double log_potential_of_gaussian(double r) {
    const double t = r * r;
    return 0.25 * (std::log(t) + boost::math::expint(1, t));
}

}  // namespace

TEST_SUITE("grid") {
    TEST_CASE("grid construction rejects bad sizes") {
        CHECK_THROWS_AS(Grid2D(1.0, 12), Error);
        CHECK_THROWS_AS(Grid2D(1.0, 8), Error);
        CHECK_THROWS_AS(Grid2D(0.0, 64), Error);
        const Grid2D g(2.0, 64, {1.0, -1.0});
        CHECK(g.spacing() == doctest::Approx(4.0 / 64));
        CHECK(g.x1(0) == doctest::Approx(-1.0));
        CHECK(g.x2(32) == doctest::Approx(-1.0));
        CHECK(g.margin({1.0, -1.0}) == doctest::Approx(2.0 - g.spacing()));
    }

    TEST_CASE("integrate zero and constant fields") {
        const Grid2D g(1.0, 32);
        CHECK(integrate(Field2D(g)) == 0.0);
        for (std::size_t n : {16u, 64u, 256u}) {
            const Grid2D h(1.0, n);
            CHECK(std::abs(integrate(Field2D::sample(h, [](Point) { return 1.0; })) - 4.0) <= 1e-12);
        }
    }

    TEST_CASE("integrate a Gaussian") {
        const Grid2D g(8.0, 256);
        CHECK(std::abs(integrate(gaussian(g)) - std::numbers::pi) <= 1e-6);
    }

    TEST_CASE("integrate rejects non-finite values") {
        Field2D f(Grid2D(1.0, 16));
        f[5] = std::numeric_limits<double>::quiet_NaN();
        try {
            integrate(f);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Numeric);
            CHECK(std::string(e.what()) == "non-finite field");
        }
    }

    TEST_CASE("gradient of constant and linear fields") {
        const Grid2D g(1.0, 32);
        const auto [c1, c2] = gradient(Field2D::sample(g, [](Point) { return 3.5; }));
        CHECK(c1.max_abs() == 0.0);
        CHECK(c2.max_abs() == 0.0);
        const auto [l1, l2] = gradient(Field2D::sample(g, [](Point x) { return x.x1; }));
        for (std::size_t j = 1; j + 1 < g.n(); ++j)
            for (std::size_t i = 1; i + 1 < g.n(); ++i) {
                CHECK(std::abs(l1.at(i, j) - 1.0) <= 1e-10);
                CHECK(std::abs(l2.at(i, j)) <= 1e-10);
            }
    }

    TEST_CASE("gradient converges at second order") {
        std::vector<double> err;
        for (std::size_t n : {128u, 256u}) {
            const Grid2D g(std::numbers::pi, n);
            const auto [d1, d2] = gradient(Field2D::sample(g, [](Point x) { return std::sin(x.x1) * std::cos(x.x2); }));
            double e = 0.0;
            for (std::size_t j = 1; j + 1 < n; ++j)
                for (std::size_t i = 1; i + 1 < n; ++i) {
                    const Point x = g.point(i, j);
                    e = std::max(e, std::abs(d1.at(i, j) - std::cos(x.x1) * std::cos(x.x2)));
                    e = std::max(e, std::abs(d2.at(i, j) + std::sin(x.x1) * std::sin(x.x2)));
                }
            err.push_back(e);
        }
        CHECK(std::log2(err[0] / err[1]) >= 1.9);
    }

    TEST_CASE("sixth-order gradient converges at sixth order") {
        std::vector<double> err;
        for (std::size_t n : {32u, 64u}) {
            const Grid2D g(6.0, n);
            const auto [d1, d2] = gradient_sixth_order(gaussian(g));
            double e = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t i = 0; i < n; ++i) {
                    const Point x = g.point(i, j);
                    if (std::abs(x.x1) > 3.0 || std::abs(x.x2) > 3.0) continue;
                    const double exact = -2.0 * x.x1 * std::exp(-(x.x1 * x.x1 + x.x2 * x.x2));
                    e = std::max(e, std::abs(d1.at(i, j) - exact));
                }
            err.push_back(e);
        }
        CHECK(std::log2(err[0] / err[1]) >= 5.5);
    }

    TEST_CASE("laplacian is sixth-order accurate") {
        std::vector<double> err;
        for (std::size_t n : {32u, 64u}) {
            const Grid2D g(6.0, n);
            const Field2D lap = laplacian(gaussian(g));
            double e = 0.0;
            for (std::size_t k = 0; k < g.size(); ++k) {
                const Point x = g.point(k % n, k / n);
                const double r2 = x.x1 * x.x1 + x.x2 * x.x2;
                e = std::max(e, std::abs(lap[k] - (4.0 * r2 - 4.0) * std::exp(-r2)));
            }
            err.push_back(e);
        }
        CHECK(std::log2(err[0] / err[1]) >= 5.5);
        CHECK(laplacian_symbol(0.0) == doctest::Approx(0.0));
        CHECK(laplacian_symbol(1e-3) == doctest::Approx(1e-6).epsilon(1e-6));
    }

    TEST_CASE("laplacian is symmetric") {
        const Grid2D g(5.0, 32);
        const Field2D a = Field2D::sample(g, [](Point x) { return std::exp(-x.x1 * x.x1 - 2 * x.x2 * x.x2) * (1 + x.x1); });
        const Field2D b = Field2D::sample(g, [](Point x) { return std::exp(-(x.x1 - 1) * (x.x1 - 1) - x.x2 * x.x2); });
        const double ab = dot(a, laplacian(b)), ba = dot(b, laplacian(a));
        CHECK(std::abs(ab - ba) <= 1e-12 * std::abs(ab));
    }

    TEST_CASE("convolution of zero is zero") {
        const Grid2D g(4.0, 32);
        for (KernelId k : {KernelId::K1, KernelId::K2, KernelId::Log})
            CHECK(convolve_free_space(k, Field2D(g)).max_abs() == 0.0);
    }

    TEST_CASE("K1 convolution of an x1-even field is x1-odd") {
        const Grid2D g(6.0, 64);
        const Field2D f = Field2D::sample(g, [](Point x) { return std::exp(-x.x1 * x.x1 - 0.5 * (x.x2 - 0.3) * (x.x2 - 0.3)); });
        const Field2D c = convolve_free_space(KernelId::K1, f);
        // Grid points i and n - i are mirror images about x1 = 0.
        double worst = 0.0;
        for (std::size_t j = 0; j < g.n(); ++j)
            for (std::size_t i = 1; i < g.n(); ++i) worst = std::max(worst, std::abs(c.at(i, j) + c.at(g.n() - i, j)));
        CHECK(worst <= 1e-10);
    }

    TEST_CASE("kernel arrays") {
        const double h = 0.1;
        CHECK(kernel_value(KernelId::K1, 0, 0, h) == 0.0);
        CHECK(kernel_value(KernelId::K2, 0, 0, h) == 0.0);
        CHECK(kernel_value(KernelId::K1, 3, 2, h) == doctest::Approx(-kernel_value(KernelId::K1, -3, 2, h)));
        CHECK(kernel_value(KernelId::K1, 3, 2, h) == doctest::Approx(-0.3 / (2 * std::numbers::pi * 0.13)));
        CHECK(std::isfinite(kernel_value(KernelId::Log, 0, 0, h)));
    }

    TEST_CASE("log and K_i convolutions match the Gaussian potential") {
        const Grid2D g(8.0, 128);
        const Field2D f = gaussian(g);
        const Field2D w = convolve_free_space(KernelId::Log, f);
        const Field2D k1 = convolve_free_space(KernelId::K1, f);
        const Field2D k2 = convolve_free_space(KernelId::K2, f);
        double worst_log = 0.0, worst_k1 = 0.0, worst_k2 = 0.0;
        for (std::size_t j = 0; j < g.n(); ++j)
            for (std::size_t i = 0; i < g.n(); ++i) {
                const Point x = g.point(i, j);
                const double r = norm(x);
                if (r < 0.5 || r > 3.0) continue;
                worst_log = std::max(worst_log, std::abs(w.at(i, j) - log_potential_of_gaussian(r)));
                // K1 = -d1 Log, so K1 * f = -d1 w.
                const double exact_k1 = -x.x1 / r * (1.0 - std::exp(-r * r)) / (2.0 * r);
                worst_k1 = std::max(worst_k1, std::abs(k1.at(i, j) - exact_k1));
                // Shell mass m(r) = pi (1 - exp(-r^2)) gives K2 * f = -x2 m(r) / (2 pi r^2).
                const double mass = std::numbers::pi * (1.0 - std::exp(-r * r));
                const double exact_k2 = -x.x2 * mass / (2.0 * std::numbers::pi * r * r);
                worst_k2 = std::max(worst_k2, std::abs(k2.at(i, j) - exact_k2) / std::max(std::abs(exact_k2), 1e-3));
            }
        CHECK(worst_log <= 1e-3);
        CHECK(worst_k1 <= 1e-4);
        CHECK(worst_k2 <= 1e-3);
    }

    TEST_CASE("truncated fields raise a warning") {
        std::vector<std::string> seen;
        set_warning_handler([&](const std::string& m) { seen.push_back(m); });
        const Grid2D g(2.0, 32);
        convolve_free_space(KernelId::K1, Field2D::sample(g, [](Point) { return 1.0; }));
        set_warning_handler(nullptr);
        REQUIRE(seen.size() == 1);
        CHECK(seen[0] == "domain truncation suspect");
    }

    TEST_CASE("helmholtz solve inverts the shifted laplacian") {
        const Grid2D g(5.0, 64);
        const Field2D f = gaussian(g, 0.8);
        const Field2D x = solve_helmholtz(f, 0.3, 1.0);
        const Field2D back = 0.3 * (-1.0 * laplacian(x)) + x;
        CHECK((back - f).max_abs() <= 1e-12);
    }

    TEST_CASE("field arithmetic and grid mismatch") {
        const Field2D a(Grid2D(1.0, 16)), b(Grid2D(2.0, 16));
        CHECK_THROWS_AS(require_same_grid(a, b), Error);
        Field2D c = Field2D::sample(Grid2D(1.0, 16), [](Point x) { return x.x1; });
        c.axpy(2.0, c);
        CHECK(c.max() == doctest::Approx(3.0 * (1.0 - 2.0 / 16)));
        CHECK(c.min() == doctest::Approx(-3.0));
    }
}
