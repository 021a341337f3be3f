#include <doctest.h>

#include <cmath>

#include "css/ground_state.hpp"

using namespace css;

namespace {

// U(0) for p = 4, v0 = 1 from an independent shooting run at halved step with
// Richardson extrapolation.
constexpr double kReferenceU0 = 2.2062008646690323;

const RadialProfile& reference_profile() {
    static const RadialProfile prof = solve_ground_state(4.0, 1.0, 1e-10);
    return prof;
}

}  // namespace

TEST_SUITE("ground_state") {
    TEST_CASE("central value matches the refinement oracle") {
        const RadialProfile& prof = reference_profile();
        CHECK(std::abs(prof.u0 - kReferenceU0) / kReferenceU0 <= 1e-6);
        CHECK(prof.u.front() == doctest::Approx(prof.u0));
        CHECK(prof.du.front() == doctest::Approx(0.0));
    }

    TEST_CASE("profile is positive, decreasing and solves the radial equation") {
        const RadialProfile& prof = reference_profile();
        CHECK(prof.equation_residual() <= 1e-6);
        for (std::size_t i = 1; i < prof.u.size(); ++i) {
            CHECK_MESSAGE(prof.u[i] > 0.0, "r = " << prof.r[i]);
            if (prof.u[i] >= prof.u[i - 1]) FAIL("not decreasing at r = " << prof.r[i]);
        }
        CHECK(prof.value(prof.r_max + 1.0) == 0.0);
        CHECK(prof.value(0.5) == doctest::Approx(prof.u[500]).epsilon(1e-12));
    }

    TEST_CASE("decay asymptotics") {
        const AsymptoticsReport rep = check_decay_asymptotics(reference_profile());
        CHECK(rep.slope >= -1.02);
        CHECK(rep.slope <= -0.98);
        CHECK(rep.c_spread <= 0.05);
        CHECK(rep.c_hat > 0.0);
        CHECK(rep.pass);
    }

    TEST_CASE("scaling law in v0") {
        const double v0 = 2.0, p = 4.0;
        const RadialProfile& base = reference_profile();
        const RadialProfile scaled = solve_ground_state(p, v0, 1e-10);
        const double amp = std::pow(v0, 1.0 / (p - 2.0));
        double worst = 0.0;
        for (double r = 0.0; r <= 8.0; r += 0.05) {
            const double expect = amp * base.value(std::sqrt(v0) * r);
            worst = std::max(worst, std::abs(scaled.value(r) - expect) / expect);
        }
        CHECK(worst <= 1e-5);
    }

    TEST_CASE("radial integrals") {
        const RadialProfile& prof = reference_profile();
        // Nehari: \int |U'|^2 + v0 \int U^2 = \int U^p. Pohozaev in 2D: v0 \int U^2 = (2/p) \int U^p.
        const double g = prof.integral_grad_sq(), m = prof.integral_pow(2.0), up = prof.integral_pow(4.0);
        CHECK(g + m == doctest::Approx(up).epsilon(1e-6));
        CHECK(m == doctest::Approx(0.5 * up).epsilon(1e-6));
    }

    TEST_CASE("weak-form identity for p = 3") {
        const RadialProfile prof = solve_ground_state(3.0, 1.0, 1e-10);
        const double lhs = prof.integral_grad_sq() + prof.v0 * prof.integral_pow(2.0);
        CHECK(std::abs(lhs - prof.integral_pow(3.0)) <= 1e-4 * lhs);
    }

    TEST_CASE("decay report on a synthetic exponential") {
        std::vector<double> r, u, du;
        for (int i = 0; i <= 20000; ++i) {
            r.push_back(i * 1e-3);
            u.push_back(std::exp(-r.back()));
            du.push_back(-u.back());
        }
        const RadialProfile prof = RadialProfile::from_samples(r, u, du, 4.0, 1.0);
        const AsymptoticsReport rep = check_decay_asymptotics(prof);
        CHECK(rep.slope == doctest::Approx(-1.0).epsilon(1e-9));
        // r^{1/2} grows by sqrt(19/16) across the window [16, 19].
        CHECK(rep.c_spread == doctest::Approx((std::sqrt(19.0) - 4.0) / rep.c_hat).epsilon(1e-3));
    }

    TEST_CASE("parameter guards") {
        CHECK_THROWS_AS(solve_ground_state(2.0, 1.0, 1e-10), Error);
        CHECK_THROWS_AS(solve_ground_state(1.5, 1.0, 1e-10), Error);
        CHECK_THROWS_AS(solve_ground_state(4.0, 0.0, 1e-10), Error);
        CHECK_THROWS_AS(solve_ground_state(4.0, 1.0, 1e-3), Error);
        GroundStateOptions short_box;
        short_box.r_max = 10.0;
        const RadialProfile prof = solve_ground_state(4.0, 1.0, 1e-10, short_box);
        try {
            check_decay_asymptotics(prof);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()) == "tail window unavailable");
        }
    }

    TEST_CASE("spectrum guard on coarse grids") {
        CHECK_THROWS_AS(nondegeneracy_spectrum(reference_profile(), Grid2D(8.0, 128)), Error);
    }

    TEST_CASE("near kernel of the linearized operator") {
        const SpectrumReport rep = nondegeneracy_spectrum(reference_profile(), Grid2D(6.4, 128));
        CHECK(rep.near_kernel_dim == 2);
        CHECK(rep.alignment >= 0.99);
        CHECK(rep.lowest_eigenvalue < 0.0);
        REQUIRE(rep.eigenvalues.size() == 4);
        CHECK(std::abs(rep.eigenvalues[2]) > rep.near_kernel_threshold);
    }
}
