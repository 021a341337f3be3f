#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

namespace css::cli {

namespace {

struct Check {
    std::string name;
    double epsilon = 0.0;  // 0 when not tied to one eps
    double value = 0.0;
    std::string budget;
    bool pass = false;
};

class CheckList {
public:
    void add(const std::string& name, double eps, double value, const std::string& budget, bool pass) {
        checks_.push_back({name, eps, value, budget, pass});
        std::cout << (pass ? "PASS " : "FAIL ") << name;
        if (eps > 0.0) std::cout << " eps=" << eps;
        std::cout << " value=" << std::setprecision(6) << value << " budget " << budget << '\n';
    }
    void fail(const std::string& name, double eps, const std::string& why) {
        checks_.push_back({name, eps, std::nan(""), why, false});
        std::cout << "FAIL " << name;
        if (eps > 0.0) std::cout << " eps=" << eps;
        std::cout << " (" << why << ")\n";
    }
    bool all_pass() const {
        return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
    }
    Json to_json() const {
        Json a = Json::array();
        for (const Check& c : checks_)
            a.push_back(Json{{"name", c.name},
                             {"epsilon", c.epsilon},
                             {"value", std::isfinite(c.value) ? Json(c.value) : Json(nullptr)},
                             {"budget", c.budget},
                             {"pass", c.pass}});
        return a;
    }

private:
    std::vector<Check> checks_;
};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const auto m = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = m * sxx - sx * sx;
    return den != 0.0 ? (m * sxy - sx * sy) / den : std::nan("");
}

RadialProfile obtain_profile(const RunConfig& cfg, std::optional<double>* c_fit = nullptr) {
    const double v0 = cfg.make_potential().at_max();
    if (auto hit = load_profile(cfg.cache_dir, cfg.p, v0, cfg.ground_state_tol)) {
        std::cerr << "profile cache: hit\n";
        if (c_fit) *c_fit = hit->c_fit;
        return hit->profile;
    }
    std::cerr << "profile cache: miss\n";
    GroundStateOptions opts;
    opts.r_max = cfg.ground_state_r_max;
    RadialProfile prof = solve_ground_state(cfg.p, v0, cfg.ground_state_tol, opts);
    store_profile(cfg.cache_dir, prof);
    if (c_fit) c_fit->reset();
    return prof;
}

double obtain_c_fit(const RunConfig& cfg, const RadialProfile& profile, std::optional<double> cached) {
    if (cached) return *cached;
    // Interaction constant from a constant potential V = V(x0) at small eps, where the gauge
    // and curvature corrections are negligible against the pair interaction.
    ProblemSpec spec{cfg.p, Potential::constant(profile.v0), 1e-3, false};
    spec.potential.x0 = cfg.potential.x0;
    spec.potential.delta = cfg.potential.delta;
    // The constant belongs to the cached profile, so it is fitted on a fixed grid.
    const InteractionFit fit = fit_interaction_constant(spec, profile, {6, 7, 8, 9, 10}, 256, cfg.box_scale);
    store_profile(cfg.cache_dir, profile, fit.c_fit);
    return fit.c_fit;
}

// Sum of random Gaussian bumps of width eps around the first peak.
Field2D random_direction(const Grid2D& grid, double eps, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> pos(-2.0 * eps, 2.0 * eps);
    std::normal_distribution<double> amp;
    Field2D f(grid);
    for (int b = 0; b < 4; ++b) {
        const Point c = grid.center() + Point{pos(rng), pos(rng)};
        const double a = amp(rng);
        f += Field2D::sample(grid, [&](Point x) {
            const Point d = x - c;
            return a * std::exp(-(d.x1 * d.x1 + d.x2 * d.x2) / (eps * eps));
        });
    }
    return f;
}

fs::path out_path(const RunConfig& cfg, const std::string& name) { return fs::path(cfg.out_dir) / name; }

std::string csv_header(const RunConfig& cfg) { return "# config_hash=" + config_hash(cfg) + "\n"; }

}  // namespace

int report_failure(const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (const auto* err = dynamic_cast<const Error*>(&e)) {
        if (err->kind() == ErrorKind::Infeasible) return kInfeasible;
    }
    return kSolverFailure;
}

int cmd_ground_state(const RunConfig& cfg) {
    const RadialProfile prof = obtain_profile(cfg);
    const AsymptoticsReport rep = check_decay_asymptotics(prof);
    const double residual = prof.equation_residual();
    std::cout << std::setprecision(12) << "p = " << prof.p << ", v0 = " << prof.v0 << "\nU(0) = " << prof.u0
              << "\nequation residual = " << residual << "\nc_hat = " << rep.c_hat << "\nc_spread = " << rep.c_spread
              << "\nslope U'/U = " << rep.slope << "\nasymptotics " << (rep.pass ? "pass" : "fail") << '\n';
    Json j{{"config_hash", config_hash(cfg)}, {"u0", prof.u0}, {"equation_residual", residual}, {"asymptotics", to_json(rep)}};
    write_text(out_path(cfg, "ground_state.json"), dump_json(j));
    return rep.pass && residual <= 1e-6 ? kPass : kBudgetExceeded;
}

int cmd_gauge_check(const RunConfig& cfg) {
    const RadialProfile prof = obtain_profile(cfg);
    const std::string hash = config_hash(cfg);
    CheckList checks;
    Json per_eps = Json::array();
    for (double eps : cfg.epsilons) {
        const ProblemSpec spec = cfg.problem(eps);
        const PeakConfiguration pc = initial_configuration(spec, cfg.k, cfg.M);
        double res_n[4] = {}, res_2n[4] = {};
        Json entry{{"epsilon", eps}};
        for (int level = 0; level < 2; ++level) {
            const Grid2D grid = reduction_grid(pc, cfg.n << level, cfg.box_scale);
            const Field2D u = build_ansatz(prof, pc, grid);
            const GaugeFields g = compute_gauge(u);
            const ResidualReport r = gauge_residuals(u, g);
            double* out = level == 0 ? res_n : res_2n;
            out[0] = r.curl / r.density_scale;
            out[1] = r.coulomb / r.density_scale;
            out[2] = r.a0_x1 / r.source_scale;
            out[3] = r.a0_x2 / r.source_scale;
            if (level == 0) {
                const auto [lhs, rhs] = chern_simons_identity(u, g);
                const double agree = std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
                checks.add("chern-simons identity", eps, agree, "<= 1e-2", agree <= 1e-2);
                std::ostringstream stem;
                stem << "gauge_eps" << eps;
                write_gauge(cfg.out_dir, stem.str(), g, r, hash);
                entry["residuals"] = to_json(r);
                entry["identity"] = {lhs, rhs};
            }
        }
        const char* names[4] = {"curl residual", "coulomb residual", "a0 x1 residual", "a0 x2 residual"};
        for (int i = 0; i < 4; ++i) {
            checks.add(names[i], eps, res_n[i], "<= 5e-3", res_n[i] <= 5e-3);
            const double order = std::log2(res_n[i] / res_2n[i]);
            checks.add(std::string(names[i]) + " refinement order", eps, order, ">= 1.8", order >= 1.8);
        }
        per_eps.push_back(entry);
    }
    write_text(out_path(cfg, "gauge_check.json"),
               dump_json(Json{{"config_hash", hash}, {"entries", per_eps}, {"checks", checks.to_json()}}));
    return checks.all_pass() ? kPass : kBudgetExceeded;
}

int cmd_verify(const RunConfig& cfg) {
    std::optional<double> cached_fit;
    const RadialProfile prof = obtain_profile(cfg, &cached_fit);
    const std::string hash = config_hash(cfg);
    CheckList checks;
    std::mt19937_64 rng(cfg.seed);

    const double residual = prof.equation_residual();
    checks.add("ground-state equation residual", 0.0, residual, "<= 1e-6", residual <= 1e-6);
    const AsymptoticsReport asym = check_decay_asymptotics(prof);
    checks.add("decay slope U'/U", 0.0, asym.slope, "in [-1.02, -0.98]", std::abs(asym.slope + 1.0) <= 0.02);
    checks.add("decay constant spread", 0.0, asym.c_spread, "<= 0.05", asym.c_spread <= 0.05);

    const Potential v = cfg.make_potential();
    const AssumptionReport assume = check_assumptions(v, Grid2D(std::max(1.0, v.delta), 64, v.x0), cfg.seed);
    checks.add("potential lower bound", 0.0, assume.min_value, ">= v_inf > 0", assume.lower_bound_ok);
    checks.add("potential Hoelder bound", 0.0, assume.worst_holder_ratio, "<= 1", assume.holder_ok);
    const bool strict_max = assume.strict_max_ok;
    if (!strict_max)
        std::cout << "warning: potential has no strict local maximum at x0; expansion checks skipped\n";

    double c_fit = 0.0;
    if (strict_max) c_fit = obtain_c_fit(cfg, prof, cached_fit);

    std::ostringstream csv;
    csv << csv_header(cfg) << "eps,k,d_over_eps,I_total,prediction,discrepancy\n";
    std::vector<double> log_eps, log_gauge, log_expansion, ritz;

    for (double eps : cfg.epsilons) {
        const ProblemSpec spec = cfg.problem(eps);
        const PeakConfiguration pc = initial_configuration(spec, 1, cfg.M);
        const Grid2D grid = reduction_grid(pc, cfg.n, cfg.box_scale);
        const EnergyModel model(spec, grid);
        const Field2D u = build_ansatz(prof, pc, grid);

        const GaugeFields g = compute_gauge(u);
        const ResidualReport r = gauge_residuals(u, g);
        checks.add("curl residual", eps, r.curl / r.density_scale, "<= 5e-3", r.curl <= 5e-3 * r.density_scale);
        checks.add("coulomb residual", eps, r.coulomb / r.density_scale, "<= 5e-3", r.coulomb <= 5e-3 * r.density_scale);
        const double a0res = std::max(r.a0_x1, r.a0_x2) / r.source_scale;
        checks.add("a0 residual", eps, a0res, "<= 5e-3", a0res <= 5e-3);
        const auto [lhs, rhs] = chern_simons_identity(u, g);
        const double agree = std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
        checks.add("chern-simons identity", eps, agree, "<= 1e-2", agree <= 1e-2);

        const EnergyBreakdown e = model.evaluate(u);
        const double ij = std::abs(e.total - e.j_functional) / std::abs(e.total);
        checks.add("I versus J", eps, ij, "<= 1e-10", ij <= 1e-10);
        log_eps.push_back(std::log(eps));
        log_gauge.push_back(std::log(e.gauge_term));

        const Field2D psi = random_direction(grid, eps, rng);
        const double h = 1e-4;
        const double fd = (model.evaluate(u + h * psi).total - model.evaluate(u - h * psi).total) / (2.0 * h);
        const double an = dot(model.first_variation(u), psi);
        const double grad_err = std::abs(fd - an) / std::abs(an);
        checks.add("first variation vs finite difference", eps, grad_err, "<= 1e-5", grad_err <= 1e-5);
        const Field2D lfd = (0.5 / h) * (model.first_variation(u + h * psi) - model.first_variation(u - h * psi));
        const Field2D lan = model.second_variation_apply(u, psi);
        const double hess_err = (lfd - lan).max_abs() / lan.max_abs();
        checks.add("second variation vs finite difference", eps, hess_err, "<= 1e-4", hess_err <= 1e-4);

        try {
            const ReductionResult red = solve_correction(model, prof, pc, cfg.reduction());
            double worst = 0.0;
            for (double q : red.contraction_ratios) worst = std::max(worst, q);
            checks.add("contraction ratio", eps, worst, "< 0.9", worst < 0.9);
            const double drop = red.residual_norm / red.initial_residual_norm;
            checks.add("projected gradient reduction", eps, drop, "<= 1e-6", drop <= 1e-6);
            checks.add("E membership", eps, red.membership_defect, "<= 1e-8", red.membership_defect <= 1e-8);
            ritz.push_back(red.min_abs_ritz);
            const DecompositionReport dec = decomposition_residual(model, u, red.phi);
            std::cout << "      decomposition eps=" << eps << " linear=" << dec.linear << " quadratic=" << dec.quadratic
                      << " remainder=" << dec.remainder << " phi_norm=" << dec.phi_norm << '\n';
        } catch (const Error& err) {
            if (err.kind() != ErrorKind::Solver && err.kind() != ErrorKind::Numeric) throw;
            checks.fail("reduction", eps, err.what());
        }

        if (!strict_max) continue;
        const double pred = expansion_prediction(spec, prof, pc, c_fit);
        csv << fmt(eps) << ",1,," << fmt(e.total) << ',' << fmt(pred) << ',' << fmt(e.total - pred) << '\n';
        log_expansion.push_back(std::log(std::abs(e.total - pred) / (eps * eps)));

        PeakConfiguration two = pc;
        const Point half{4.0 * eps, 0.0};
        two.peaks = {pc.x0 - half, pc.x0 + half};
        if (two.admissible() && grid.margin(two.peaks[0]) >= 6.0 * eps) {
            const double i2 = model.evaluate(build_ansatz(prof, two, grid)).total;
            const double p2 = expansion_prediction(spec, prof, two, c_fit);
            csv << fmt(eps) << ",2,8," << fmt(i2) << ',' << fmt(p2) << ',' << fmt(i2 - p2) << '\n';
        }
    }

    if (log_eps.size() >= 2) {
        const double gauge_slope = slope_fit(log_eps, log_gauge);
        checks.add("gauge energy slope", 0.0, gauge_slope, "in [3.6, 4.4]", gauge_slope >= 3.6 && gauge_slope <= 4.4);
        if (log_expansion.size() == log_eps.size()) {
            const double order = slope_fit(log_eps, log_expansion);
            checks.add("expansion extra order", 0.0, order, ">= 0.8", order >= 0.8);
        }
    }
    if (ritz.size() >= 2) {
        std::vector<double> sorted = ritz;
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[sorted.size() / 2];
        double spread = 0.0;
        for (double t : ritz) spread = std::max(spread, std::abs(t / median - 1.0));
        checks.add("smallest Ritz value stability", 0.0, spread, "<= 0.2", spread <= 0.2);
    }

    write_text(out_path(cfg, "verify.csv"), csv.str());
    write_text(out_path(cfg, "verify.json"),
               dump_json(Json{{"config_hash", hash}, {"c_fit", c_fit}, {"checks", checks.to_json()}}));
    const bool ok = checks.all_pass();
    std::cout << (ok ? "all budgets met\n" : "budget exceeded\n");
    return ok ? kPass : kBudgetExceeded;
}

int cmd_solve(const RunConfig& cfg) {
    const RadialProfile prof = obtain_profile(cfg);
    const std::string hash = config_hash(cfg);
    const double eps = cfg.epsilons.front();
    if (cfg.epsilons.size() > 1) std::cout << "solving at the first epsilon of the list, eps = " << eps << '\n';
    const ProblemSpec spec = cfg.problem(eps);
    const LandscapeRun run = maximize_F(spec, prof, cfg.k, cfg.search());

    const Grid2D grid = reduction_grid(run.argmax, cfg.landscape_n, cfg.box_scale);
    const Field2D ansatz = build_ansatz(prof, run.argmax, grid);
    const EnergyModel model(spec, grid);
    const ReductionResult red = solve_correction(model, prof, run.argmax, cfg.reduction(), &run.reduction->phi);
    const Field2D u = ansatz + red.phi;
    const bool positive = positivity_check(u, ansatz);
    const GaugeFields g = compute_gauge(u);
    const ResidualReport r = gauge_residuals(u, g);

    std::cout << std::setprecision(10) << "evaluations " << run.evaluations << "\nF_max " << run.F_max << "\nargmax";
    for (const Point& y : run.argmax.peaks) std::cout << " (" << y.x1 << ", " << y.x2 << ")";
    std::cout << "\nmax distance to x0 " << run.argmax.max_distance_to_x0() << "\ninterior "
              << (run.interior_flag ? "yes" : "no") << "\npositive " << (positive ? "yes" : "no") << '\n';

    write_field_binary(out_path(cfg, "u.bin"), u, hash);
    write_field_csv(out_path(cfg, "u.csv"), u, hash);
    write_gauge(cfg.out_dir, "gauge", g, r, hash);
    Json j = to_json(run);
    j["config_hash"] = hash;
    j["final_reduction"] = to_json(red);
    j["positive"] = positive;
    j["residuals"] = to_json(r);
    write_text(out_path(cfg, "solve.json"), dump_json(j));
    return run.interior_flag && positive ? kPass : kBudgetExceeded;
}

int cmd_sweep(const RunConfig& cfg) {
    const RadialProfile prof = obtain_profile(cfg);
    const std::string hash = config_hash(cfg);
    const SweepReport rep = concentration_sweep(cfg.problem(cfg.epsilons.front()), cfg.epsilons, prof, cfg.k, cfg.search());

    std::ostringstream csv;
    csv << csv_header(cfg) << "eps,k,peak,y1,y2,distance,separation,F,phi_norm\n";
    for (const SweepEntry& e : rep.entries) {
        std::cout << std::setprecision(8) << "eps " << e.epsilon << " max distance " << e.max_distance << " separation/eps "
                  << e.separation << " F " << e.F << (e.interior ? " interior" : " boundary")
                  << (e.positive ? " positive" : " not positive") << '\n';
        for (std::size_t i = 0; i < e.argmax.peaks.size(); ++i) {
            const Point y = e.argmax.peaks[i];
            csv << fmt(e.epsilon) << ',' << e.argmax.k() << ',' << i + 1 << ',' << fmt(y.x1) << ',' << fmt(y.x2) << ','
                << fmt(distance(y, e.argmax.x0)) << ',' << (std::isfinite(e.separation) ? fmt(e.separation) : "")
                << ',' << fmt(e.F) << ',' << fmt(e.phi_norm) << '\n';
        }
    }
    write_text(out_path(cfg, "sweep.csv"), csv.str());
    Json j = to_json(rep);
    j["config_hash"] = hash;
    write_text(out_path(cfg, "sweep.json"), dump_json(j));

    if (!rep.concentration_signal) {
        std::cout << rep.note << '\n';
        return kBudgetExceeded;
    }
    const bool interior_all = std::all_of(rep.entries.begin(), rep.entries.end(),
                                          [](const SweepEntry& e) { return e.interior && e.positive; });
    std::cout << "monotonicity violations " << rep.monotonicity_violations << "\nfitted slope " << rep.fitted_slope << '\n';
    return rep.monotone && interior_all ? kPass : kBudgetExceeded;
}

}  // namespace css::cli
