#include "css/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace css {

PeakConfiguration initial_configuration(const ProblemSpec& spec, std::size_t k, double M) {
    if (k == 0) throw Error(ErrorKind::Parameter, "k must be positive");
    PeakConfiguration pc;
    pc.epsilon = spec.epsilon;
    pc.x0 = spec.potential.x0;
    pc.delta = spec.potential.delta;
    const double scale = M * spec.epsilon * std::abs(std::log(spec.epsilon));
    // Regular k-gon of unit side: circumradius 1 / (2 sin(pi / k)).
    const double radius = k == 1 ? 0.0 : 0.5 / std::sin(std::numbers::pi / static_cast<double>(k));
    for (std::size_t i = 0; i < k; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(k);
        pc.peaks.push_back(pc.x0 + scale * Point{radius * std::cos(t), radius * std::sin(t)});
    }
    return pc;
}

std::pair<double, ReductionResult> reduced_energy(const EnergyModel& model, const RadialProfile& profile,
                                                  const PeakConfiguration& peaks, const ReductionOptions& options,
                                                  const Field2D* warm_start) {
    ReductionResult red = solve_correction(model, profile, peaks, options, warm_start);
    const Field2D u = build_ansatz(profile, peaks, model.grid()) + red.phi;
    return {model.evaluate(u).total, std::move(red)};
}

bool interior(const PeakConfiguration& peaks) {
    if (!peaks.admissible()) return false;
    if (peaks.k() > 1 && peaks.separation_over_eps() < 1.05 * peaks.min_separation_ratio()) return false;
    return peaks.max_distance_to_x0() <= 0.95 * 0.5 * peaks.delta;
}

namespace {

using Vec = std::vector<double>;

PeakConfiguration to_peaks(const PeakConfiguration& base, const Vec& x) {
    PeakConfiguration pc = base;
    for (std::size_t i = 0; i < pc.peaks.size(); ++i)
        pc.peaks[i] = base.x0 + base.epsilon * Point{x[2 * i], x[2 * i + 1]};
    return pc;
}

}  // namespace

LandscapeRun maximize_F(const ProblemSpec& spec, const RadialProfile& profile, std::size_t k,
                        const SearchConfig& search) {
    validate(spec);
    if (search.budget < 50) throw Error(ErrorKind::Parameter, "search budget must be at least 50 evaluations");
    PeakConfiguration start = initial_configuration(spec, k, search.M);
    if (!search.start.empty()) {
        if (search.start.size() != k) throw Error(ErrorKind::Parameter, "start must hold k peaks");
        start.peaks = search.start;
    }
    const Grid2D grid = reduction_grid(start, search.n, search.box_scale);
    {
        std::string why;
        if (!start.admissible(&why)) throw Error(ErrorKind::Infeasible, "D_k empty at this eps: " + why);
        for (const Point& y : start.peaks)
            if (grid.margin(y) < 6.0 * spec.epsilon) throw Error(ErrorKind::Infeasible, "insufficient margin");
    }
    const EnergyModel model(spec, grid);

    LandscapeRun run;
    run.spec = spec;
    run.k = k;
    std::optional<Field2D> warm;

    // Coordinates are (y - x0) / eps.
    auto score = [&](const Vec& x) {
        const PeakConfiguration pc = to_peaks(start, x);
        Candidate c{pc.peaks};
        ++run.evaluations;
        bool placeable = pc.admissible();
        for (const Point& y : pc.peaks) placeable = placeable && grid.margin(y) >= 6.0 * spec.epsilon;
        if (placeable) {
            try {
                auto [f, red] = reduced_energy(model, profile, pc, search.reduction, warm ? &*warm : nullptr);
                c.F = f;
                c.phi_norm = red.phi_norm_eps;
                if (c.F > run.F_max) {
                    run.F_max = c.F;
                    run.argmax = pc;
                    run.phi_norm = c.phi_norm;
                    warm = red.phi;
                    run.reduction = std::move(red);
                }
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::Solver) throw;
            }
        }
        run.candidates.push_back(c);
        return c.F;
    };

    const std::size_t dim = 2 * k;
    Vec x0(dim);
    for (std::size_t i = 0; i < k; ++i) {
        x0[2 * i] = (start.peaks[i].x1 - start.x0.x1) / spec.epsilon;
        x0[2 * i + 1] = (start.peaks[i].x2 - start.x0.x2) / spec.epsilon;
    }
    std::vector<Vec> simplex{x0};
    for (std::size_t d = 0; d < dim; ++d) {
        Vec v = x0;
        v[d] += search.initial_step;
        simplex.push_back(v);
    }
    std::vector<double> f;
    for (const Vec& v : simplex) f.push_back(score(v));

    // Maximization: vertices sorted by decreasing F.
    auto order = [&] {
        std::vector<std::size_t> idx(simplex.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return f[a] > f[b]; });
        std::vector<Vec> s;
        std::vector<double> g;
        for (std::size_t i : idx) {
            s.push_back(simplex[i]);
            g.push_back(f[i]);
        }
        simplex = std::move(s);
        f = std::move(g);
    };
    auto diameter = [&] {
        double d = 0.0;
        for (std::size_t i = 1; i < simplex.size(); ++i)
            for (std::size_t j = 0; j < dim; ++j) d = std::max(d, std::abs(simplex[i][j] - simplex[0][j]));
        return d;
    };
    auto combine = [&](const Vec& a, const Vec& b, double t) {  // a + t (b - a)
        Vec out(dim);
        for (std::size_t j = 0; j < dim; ++j) out[j] = a[j] + t * (b[j] - a[j]);
        return out;
    };

    while (run.evaluations < search.budget) {
        order();
        if (diameter() <= search.tolerance) break;
        Vec centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j] / static_cast<double>(dim);
        const Vec& worst = simplex[dim];

        const Vec xr = combine(centroid, worst, -1.0);
        const double fr = score(xr);
        if (fr > f[0]) {
            const Vec xe = combine(centroid, worst, -2.0);
            const double fe = score(xe);
            if (fe > fr) {
                simplex[dim] = xe;
                f[dim] = fe;
            } else {
                simplex[dim] = xr;
                f[dim] = fr;
            }
            continue;
        }
        if (fr > f[dim - 1]) {
            simplex[dim] = xr;
            f[dim] = fr;
            continue;
        }
        const bool outside = fr > f[dim];
        const Vec xc = outside ? combine(centroid, worst, -0.5) : combine(centroid, worst, 0.5);
        const double fc = score(xc);
        if (fc > std::max(fr, f[dim])) {
            simplex[dim] = xc;
            f[dim] = fc;
            continue;
        }
        for (std::size_t i = 1; i <= dim && run.evaluations < search.budget; ++i) {
            simplex[i] = combine(simplex[0], simplex[i], 0.5);
            f[i] = score(simplex[i]);
        }
    }
    if (!run.reduction) throw Error(ErrorKind::Solver, "no candidate converged");
    run.interior_flag = interior(run.argmax);
    return run;
}

SweepReport concentration_sweep(const ProblemSpec& base, const std::vector<double>& epsilons,
                                const RadialProfile& profile, std::size_t k, const SearchConfig& search) {
    if (epsilons.empty()) throw Error(ErrorKind::Parameter, "empty epsilon list");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        if (!(epsilons[i] < epsilons[i - 1])) throw Error(ErrorKind::Parameter, "epsilon list must be decreasing");

    SweepReport rep;
    const Potential& v = base.potential;
    const AssumptionReport check = check_assumptions(v, Grid2D(std::max(v.delta, 1.0), 64, v.x0));
    if (!check.strict_max_ok) {
        rep.concentration_signal = false;
        rep.note = "no concentration signal: potential has no strict local maximum at x0";
    }

    for (double eps : epsilons) {
        ProblemSpec spec = base;
        spec.epsilon = eps;
        const LandscapeRun run = maximize_F(spec, profile, k, search);
        SweepEntry e;
        e.epsilon = eps;
        e.argmax = run.argmax;
        e.max_distance = run.argmax.max_distance_to_x0();
        e.separation = run.argmax.separation_over_eps();
        e.F = run.F_max;
        e.phi_norm = run.phi_norm;
        e.interior = run.interior_flag;
        const Field2D ansatz = build_ansatz(profile, run.argmax, reduction_grid(run.argmax, search.n, search.box_scale));
        e.positive = positivity_check(ansatz + run.reduction->phi, ansatz);
        rep.entries.push_back(e);
    }
    for (std::size_t i = 1; i < rep.entries.size(); ++i)
        if (rep.entries[i].max_distance > rep.entries[i - 1].max_distance) ++rep.monotonicity_violations;
    const int allowed = rep.entries.size() >= 4 ? 1 : 0;
    rep.monotone = rep.concentration_signal && rep.monotonicity_violations <= allowed;

    // Least-squares slope of log distance against log eps over entries with positive distance.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (const SweepEntry& e : rep.entries) {
        if (!(e.max_distance > 0.0)) continue;
        const double x = std::log(e.epsilon), y = std::log(e.max_distance);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m >= 2 && m * sxx - sx * sx > 0.0) rep.fitted_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return rep;
}

InteractionFit fit_interaction_constant(const ProblemSpec& spec, const RadialProfile& profile,
                                        const std::vector<double>& separations, std::size_t n, double box_scale) {
    validate(spec);
    InteractionFit fit;
    fit.epsilon = spec.epsilon;
    const double eps2 = spec.epsilon * spec.epsilon;
    const double leading = 2.0 * (0.5 - 1.0 / spec.p) * eps2 * profile.integral_pow(spec.p);
    double num = 0.0, den = 0.0;
    for (double s : separations) {
        PeakConfiguration pc;
        pc.epsilon = spec.epsilon;
        pc.x0 = spec.potential.x0;
        pc.delta = spec.potential.delta;
        const Point half{0.5 * s * spec.epsilon, 0.0};
        pc.peaks = {pc.x0 - half, pc.x0 + half};
        const Grid2D grid = reduction_grid(pc, n, box_scale);
        const double energy = EnergyModel(spec, grid).evaluate(build_ansatz(profile, pc, grid)).total;
        // expansion_prediction with c_fit = 0 is the leading term minus the potential term.
        const double potential_term = leading - expansion_prediction(spec, profile, pc, 0.0);
        const double q = leading - energy - potential_term;
        const double x = 2.0 * eps2 * std::exp(-s);
        fit.s.push_back(s);
        fit.excess.push_back(q);
        num += q * x;
        den += x * x;
    }
    fit.c_fit = den > 0.0 ? num / den : 0.0;

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (std::size_t i = 0; i < fit.s.size(); ++i) {
        if (!(fit.excess[i] > 0.0)) continue;
        const double y = std::log(fit.excess[i]);
        sx += fit.s[i];
        sy += y;
        sxx += fit.s[i] * fit.s[i];
        sxy += fit.s[i] * y;
        ++m;
    }
    if (m >= 2 && m * sxx - sx * sx > 0.0) fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return fit;
}

bool positivity_check(const Field2D& u, const Field2D& ansatz) {
    require_same_grid(u, ansatz);
    const double umax = u.max();
    const double amax = ansatz.max();
    if (!(umax > 0.0)) return false;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (u[k] <= -1e-10 * umax) return false;
        if (ansatz[k] > 1e-6 * amax && !(u[k] > 0.0)) return false;
    }
    return true;
}

bool positivity_check(const Field2D& u) { return positivity_check(u, u); }

}  // namespace css
