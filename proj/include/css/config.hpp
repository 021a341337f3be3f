#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "css/io.hpp"

namespace css {

struct PotentialSpec {
    std::string family = "radial-bump";  // constant | radial-bump | anisotropic-bump
    double value = 1.0;                  // constant
    double a = 0.8;
    double b = 0.2;
    double q1 = 1.0;
    double q2 = 2.0;
    Point x0;
    double delta = 2.0;
};

struct RunConfig {
    double p = 4.0;
    std::vector<double> epsilons{0.4, 0.2, 0.1, 0.05};
    std::size_t k = 1;
    PotentialSpec potential;

    std::size_t n = 256;            // verification grid
    std::size_t landscape_n = 128;  // grid for the F(y) search
    double box_scale = 12.0;        // box half-width in units of eps

    double ground_state_tol = 1e-10;
    double ground_state_r_max = 32.0;
    double step_tol = 1e-9;
    double linear_tol = 1e-8;

    int budget = 120;
    double M = 2.0;
    double initial_step = 0.5;
    double search_tol = 1e-2;
    double search_step_tol = 1e-6;    // reduction tolerances inside the search
    double search_linear_tol = 1e-6;

    std::string cache_dir = "cache";
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int threads = 1;

    Potential make_potential() const;
    ProblemSpec problem(double epsilon) const;
    ReductionOptions reduction() const;  // tight tolerances for final corrections
    SearchConfig search() const;
    /// Throws Error(Parameter) for out-of-range fields.
    void validate() const;
};

RunConfig config_from_json(const Json& j);
Json config_to_json(const RunConfig& c);
RunConfig load_config(const fs::path& path);

/// FNV-1a (64 bit) of the canonical JSON form, as 16 hex digits.
std::string config_hash(const RunConfig& c);

}  // namespace css
