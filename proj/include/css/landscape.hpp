#pragma once

// The reduced energy F(y) = I(U* + phi_y) over peak configurations, its
// maximization over D_k and the concentration sweep in eps.

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "css/reduction.hpp"

namespace css {

struct SearchConfig {
    int budget = 120;               // maximum F evaluations (>= 50)
    double M = 2.0;                 // initial spread: y^i = x0 + M eps |ln eps| e_i
    double initial_step = 0.5;      // simplex edge, in units of eps
    double tolerance = 1e-2;        // simplex diameter stop, in units of eps
    std::size_t n = 128;            // grid points per axis
    double box_scale = 12.0;        // box half-width in units of eps
    ReductionOptions reduction{50, 1e-6, 1e-6, 2000};
    std::vector<Point> start;       // optional starting peaks (k of them) replacing the k-gon
};

struct Candidate {
    std::vector<Point> peaks;
    double F = -std::numeric_limits<double>::infinity();  // -inf: inadmissible or failed contraction
    double phi_norm = 0.0;
};

struct LandscapeRun {
    ProblemSpec spec;
    std::size_t k = 0;
    std::vector<Candidate> candidates;
    PeakConfiguration argmax;
    double F_max = -std::numeric_limits<double>::infinity();
    double phi_norm = 0.0;
    bool interior_flag = false;
    int evaluations = 0;
    std::optional<ReductionResult> reduction;  // at argmax
};

/// Initial configuration x0 + M eps |ln eps| e_i, with e_i the vertices of a regular k-gon
/// of unit side centred at the origin (e_1 = 0 for k = 1).
PeakConfiguration initial_configuration(const ProblemSpec& spec, std::size_t k, double M);

/// F(y) and the reduction diagnostics; model must be built on reduction_grid(peaks, ...).
std::pair<double, ReductionResult> reduced_energy(const EnergyModel& model, const RadialProfile& profile,
                                                  const PeakConfiguration& peaks,
                                                  const ReductionOptions& options = {},
                                                  const Field2D* warm_start = nullptr);

/// Strict interior test: separation/eps >= 1.05 |ln eps|^{1/2}, all peaks within 0.95 delta/2 of x0.
bool interior(const PeakConfiguration& peaks);

/// Nelder-Mead ascent over the 2k peak coordinates, inadmissible or failed candidates scoring -inf.
/// Throws Error(Infeasible, "D_k empty at this eps") if the initial configuration is inadmissible
/// and Error(Solver, "no candidate converged") if every candidate failed.
LandscapeRun maximize_F(const ProblemSpec& spec, const RadialProfile& profile, std::size_t k,
                        const SearchConfig& search = {});

struct SweepEntry {
    double epsilon = 0.0;
    PeakConfiguration argmax;
    double max_distance = 0.0;    // max_i |y^i - x0|
    double separation = 0.0;      // min_{i != j} |y^i - y^j| / eps
    double F = 0.0;
    double phi_norm = 0.0;
    bool interior = false;
    bool positive = false;        // positivity_check of U* + phi at the argmax
};

struct SweepReport {
    std::vector<SweepEntry> entries;
    int monotonicity_violations = 0;
    bool monotone = false;             // at most one violation for >= 4 values, none otherwise
    bool concentration_signal = true;  // false when V has no strict local maximum at x0
    std::string note;
    double fitted_slope = 0.0;         // d log(max_distance) / d log(eps)
};

/// maximize_F for each eps (must be strictly decreasing).
SweepReport concentration_sweep(const ProblemSpec& base, const std::vector<double>& epsilons,
                                const RadialProfile& profile, std::size_t k, const SearchConfig& search = {});

struct InteractionFit {
    double epsilon = 0.0;
    std::vector<double> s;       // d / eps
    std::vector<double> excess;  // 2 (1/2 - 1/p) eps^2 \int U^p - I(U*) - potential term
    double c_fit = 0.0;          // least squares against eps^2 sum_{i != j} e^{-s}
    double slope = 0.0;          // d log(excess) / ds
};

/// Two-peak ansatz energies at x0 -+ (s eps / 2) e_1 on reduction_grid(., n, box_scale), s in `separations`.
/// The potential term is the one of expansion_prediction.
InteractionFit fit_interaction_constant(const ProblemSpec& spec, const RadialProfile& profile,
                                        const std::vector<double>& separations = {6, 7, 8, 9, 10},
                                        std::size_t n = 256, double box_scale = 12.0);

/// u > -1e-10 max(u) everywhere and u > 0 wherever the ansatz exceeds 1e-6 max(ansatz).
bool positivity_check(const Field2D& u, const Field2D& ansatz);
/// Same with the support taken from u itself.
bool positivity_check(const Field2D& u);

}  // namespace css
