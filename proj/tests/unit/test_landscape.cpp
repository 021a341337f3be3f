#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "css/landscape.hpp"

using namespace css;

namespace {

const RadialProfile& profile() {
    static const RadialProfile prof = solve_ground_state(4.0, 1.0, 1e-10);
    return prof;
}

ProblemSpec bump(double eps) { return {4.0, Potential::radial_bump(0.8, 0.2), eps, true}; }

}  // namespace

TEST_SUITE("landscape") {
    TEST_CASE("peak configuration admissibility") {
        PeakConfiguration pc{0.1, {{0.0, 0.0}, {0.2, 0.0}}, {0.0, 0.0}, 2.0};
        CHECK(pc.min_separation_ratio() == doctest::Approx(std::sqrt(std::log(10.0))));
        CHECK(pc.separation_over_eps() == doctest::Approx(2.0));
        CHECK(pc.admissible());
        pc.peaks[1] = {0.1, 0.0};
        std::string why;
        CHECK_FALSE(pc.admissible(&why));
        CHECK_FALSE(why.empty());
        pc.peaks[1] = {1.1, 0.0};
        CHECK_FALSE(pc.admissible());
        CHECK(std::isinf(PeakConfiguration{0.1, {{0.0, 0.0}}, {}, 2.0}.separation_over_eps()));
    }

    TEST_CASE("initial configuration is a scaled unit-side polygon") {
        const ProblemSpec spec = bump(0.1);
        const double scale = 2.0 * 0.1 * std::log(10.0);
        CHECK(initial_configuration(spec, 1, 2.0).peaks[0] == Point{0.0, 0.0});
        for (std::size_t k : {2u, 3u, 5u}) {
            const PeakConfiguration pc = initial_configuration(spec, k, 2.0);
            REQUIRE(pc.k() == k);
            CHECK(distance(pc.peaks[0], pc.peaks[1]) == doctest::Approx(scale));
            CHECK(pc.separation_over_eps() * 0.1 == doctest::Approx(scale));
        }
        CHECK_THROWS_AS(initial_configuration(spec, 0, 2.0), Error);
    }

    TEST_CASE("interior test") {
        PeakConfiguration pc{0.1, {{0.0, 0.0}, {0.3, 0.0}}, {0.0, 0.0}, 2.0};
        CHECK(interior(pc));
        pc.peaks[1] = {0.96, 0.0};
        CHECK_FALSE(interior(pc));
        pc.peaks[1] = {1.04 * 0.1 * pc.min_separation_ratio(), 0.0};
        CHECK_FALSE(interior(pc));
    }

    TEST_CASE("single peak converges to the potential maximum") {
        SearchConfig search;
        search.n = 128;
        search.start = {{0.04, -0.03}};
        const LandscapeRun run = maximize_F(bump(0.1), profile(), 1, search);
        const double spacing = 2.0 * search.box_scale * 0.1 / 128;
        MESSAGE("distance to x0 " << run.argmax.max_distance_to_x0());
        CHECK(run.argmax.max_distance_to_x0() <= 2.0 * spacing);
        // The potential is radial, so symmetry puts the maximizer exactly at x0.
        CHECK(run.argmax.max_distance_to_x0() <= search.tolerance * 0.1);
        CHECK(run.interior_flag);
        CHECK(run.evaluations <= search.budget);
        REQUIRE(run.reduction.has_value());
        const Grid2D grid = reduction_grid(run.argmax, 128);
        CHECK(positivity_check(build_ansatz(profile(), run.argmax, grid) + run.reduction->phi,
                               build_ansatz(profile(), run.argmax, grid)));
    }

    TEST_CASE("single-peak distances do not grow along the sweep") {
        SearchConfig search;
        search.n = 128;
        search.start = {{0.01, -0.01}};
        const SweepReport rep = concentration_sweep(bump(0.4), {0.4, 0.2, 0.1, 0.05}, profile(), 1, search);
        REQUIRE(rep.entries.size() == 4);
        // Distances are compared up to the simplex tolerance at the finer eps.
        for (std::size_t i = 1; i < rep.entries.size(); ++i) {
            CAPTURE(rep.entries[i - 1].max_distance);
            CAPTURE(rep.entries[i].max_distance);
            CHECK(rep.entries[i].max_distance <= rep.entries[i - 1].max_distance + search.tolerance * rep.entries[i].epsilon);
        }
    }

    TEST_CASE("symmetric pair scan has an interior maximum") {
        const double eps = 0.1;
        const ProblemSpec spec = bump(eps);
        const std::vector<double> half{0.15, 0.2, 0.3, 0.4, 0.5};
        std::vector<double> f;
        for (double s : half) {
            const PeakConfiguration pair{eps, {{-s, 0.0}, {s, 0.0}}, {0.0, 0.0}, 2.0};
            const Grid2D grid = reduction_grid(pair, 128);
            try {
                f.push_back(reduced_energy(EnergyModel(spec, grid), profile(), pair).first);
            } catch (const Error&) {
                f.push_back(-std::numeric_limits<double>::infinity());
            }
        }
        const std::size_t best = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());
        MESSAGE("best half separation " << half[best]);
        CHECK(best > 0);
        CHECK(best + 1 < half.size());
        const PeakConfiguration top{eps, {{-half[best], 0.0}, {half[best], 0.0}}, {0.0, 0.0}, 2.0};
        CHECK(interior(top));
    }

    TEST_CASE("empty admissible set and bad budgets") {
        ProblemSpec spec = bump(0.4);
        spec.potential.delta = 0.3;
        try {
            maximize_F(spec, profile(), 2);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Infeasible);
            CHECK(std::string(e.what()).find("D_k empty at this eps") == 0);
        }
        SearchConfig small;
        small.budget = 20;
        CHECK_THROWS_AS(maximize_F(bump(0.1), profile(), 1, small), Error);
        SearchConfig wrong;
        wrong.start = {{0.0, 0.0}, {0.3, 0.0}};
        CHECK_THROWS_AS(maximize_F(bump(0.1), profile(), 1, wrong), Error);
    }

    TEST_CASE("sweep without a strict maximum reports no concentration signal") {
        ProblemSpec flat{4.0, Potential::constant(1.0), 0.4, true};
        SearchConfig search;
        search.n = 64;
        search.budget = 50;
        const SweepReport rep = concentration_sweep(flat, {0.4, 0.3}, profile(), 1, search);
        CHECK_FALSE(rep.concentration_signal);
        CHECK(rep.note.find("no concentration signal") == 0);
        CHECK(rep.entries.size() == 2);
        CHECK_THROWS_AS(concentration_sweep(flat, {0.2, 0.3}, profile(), 1, search), Error);
    }

    TEST_CASE("positivity check") {
        const PeakConfiguration pc{0.2, {{0.0, 0.0}}, {0.0, 0.0}, 2.0};
        const Grid2D grid = reduction_grid(pc, 64);
        const Field2D u = build_ansatz(profile(), pc, grid);
        CHECK(positivity_check(u, u));
        CHECK(positivity_check(u));
        Field2D dented = u;
        dented.at(32, 32) = -1e-3;
        CHECK_FALSE(positivity_check(dented, u));
        CHECK_FALSE(positivity_check(dented));
    }
}
