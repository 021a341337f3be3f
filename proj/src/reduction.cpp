#include "css/reduction.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace css {

namespace {

void require_placeable(const PeakConfiguration& peaks, const Grid2D& grid) {
    std::string why;
    if (!peaks.admissible(&why)) throw Error(ErrorKind::Infeasible, "outside D_k: " + why);
    for (const Point& y : peaks.peaks)
        if (grid.margin(y) < 6.0 * peaks.epsilon) throw Error(ErrorKind::Infeasible, "insufficient margin");
}

}  // namespace

Grid2D reduction_grid(const PeakConfiguration& peaks, std::size_t n, double box_scale) {
    if (!(box_scale > 0.0)) throw Error(ErrorKind::Parameter, "box_scale must be positive");
    return Grid2D(box_scale * peaks.epsilon, n, peaks.x0);
}

Field2D build_ansatz(const RadialProfile& profile, const PeakConfiguration& peaks, const Grid2D& grid) {
    require_placeable(peaks, grid);
    Field2D u(grid);
    for (const Point& y : peaks.peaks) u += sample_profile(profile, grid, y, peaks.epsilon);
    return u;
}

std::vector<Field2D> tangent_basis(const RadialProfile& profile, const PeakConfiguration& peaks, const Grid2D& grid) {
    require_placeable(peaks, grid);
    const double eps = peaks.epsilon;
    std::vector<Field2D> basis;
    for (const Point& y : peaks.peaks) {
        Field2D d1(grid), d2(grid);
        for (std::size_t j = 0; j < grid.n(); ++j)
            for (std::size_t i = 0; i < grid.n(); ++i) {
                const Point d = grid.point(i, j) - y;
                const double r = norm(d);
                if (r == 0.0) continue;
                const double s = -profile.derivative(r / eps) / (eps * r);
                d1.at(i, j) = s * d.x1;
                d2.at(i, j) = s * d.x2;
            }
        basis.push_back(std::move(d1));
        basis.push_back(std::move(d2));
    }
    return basis;
}

Projector::Projector(std::vector<Field2D> basis, double epsilon) : basis_(std::move(basis)), epsilon_(epsilon) {
    const std::size_t m = basis_.size();
    if (m == 0) return;
    Eigen::MatrixXd gram(m, m);
    for (const Field2D& b : basis_) metric_basis_.push_back(apply_metric(b, epsilon));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t c = a; c < m; ++c) {
            const double value = 0.5 * (dot(basis_[a], metric_basis_[c]) + dot(basis_[c], metric_basis_[a]));
            gram(a, c) = gram(c, a) = value;
        }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    condition_ = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (!(condition_ <= 1e6)) throw Error(ErrorKind::Numeric, "peaks nearly coincident");
    const Eigen::MatrixXd inv = gram.inverse();
    gram_inverse_.assign(inv.data(), inv.data() + m * m);  // symmetric, so storage order is irrelevant
}

Field2D Projector::apply(const Field2D& v) const {
    const std::size_t m = basis_.size();
    Field2D out = v;
    // Two passes remove the rounding left by the first.
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<double> rhs(m);
        for (std::size_t a = 0; a < m; ++a) rhs[a] = dot(out, metric_basis_[a]);
        for (std::size_t a = 0; a < m; ++a) {
            double c = 0.0;
            for (std::size_t b = 0; b < m; ++b) c += gram_inverse_[a * m + b] * rhs[b];
            out.axpy(-c, basis_[a]);
        }
    }
    return out;
}

double Projector::membership_defect(const Field2D& v) const {
    const double vn = norm_eps(v, epsilon_);
    if (vn == 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t a = 0; a < basis_.size(); ++a) {
        const double bn = std::sqrt(dot(basis_[a], metric_basis_[a]));
        worst = std::max(worst, std::abs(dot(v, metric_basis_[a])) / (vn * bn));
    }
    return worst;
}

Field2D project_E(const Field2D& v, const std::vector<Field2D>& basis, double epsilon) {
    return Projector(basis, epsilon).apply(v);
}

LinearSolveReport solve_L_on_E(const EnergyModel::Linearization& lin, const Projector& proj, const Field2D& rhs,
                               const MinresOptions& options, const Field2D* guess) {
    const double eps = proj.epsilon();
    const LinearOperator op = [&](const Field2D& w) { return proj.apply(riesz_representative(lin.apply(w), eps)); };
    const InnerProduct inner = [eps](const Field2D& a, const Field2D& b) { return inner_product_eps(a, b, eps); };
    MinresResult mr = minres(op, inner, rhs, options, guess);
    if (!mr.converged) throw Error(ErrorKind::Solver, "L_eps solve stagnated");
    return {proj.apply(mr.x), mr.iterations, mr.relative_residual, mr.min_abs_ritz};
}

ReductionResult solve_correction(const EnergyModel& model, const RadialProfile& profile,
                                 const PeakConfiguration& peaks, const ReductionOptions& options,
                                 const Field2D* warm_start) {
    const Grid2D& grid = model.grid();
    const double eps = model.spec().epsilon;
    const Field2D ansatz = build_ansatz(profile, peaks, grid);
    const Projector proj(tangent_basis(profile, peaks, grid), eps);
    const auto lin = model.linearize(ansatz);
    auto projected_gradient = [&](const Field2D& u) {
        return proj.apply(riesz_representative(model.first_variation(u), eps));
    };

    ReductionResult res{warm_start ? proj.apply(*warm_start) : Field2D(grid), 0.0, 0, {}, 0.0, 0.0, 0.0, 0.0, 0};
    const Field2D lbar = projected_gradient(ansatz);
    res.initial_residual_norm = norm_eps(lbar, eps);
    res.min_abs_ritz = std::numeric_limits<double>::infinity();
    MinresOptions mo{options.linear_tol, options.linear_cap};

    Field2D r = res.phi.max_abs() > 0.0 ? projected_gradient(ansatz + res.phi) : lbar;
    double prev_step = 0.0;
    int bad = 0;
    for (int it = 0; it < options.max_iterations; ++it) {
        if (norm_eps(r, eps) == 0.0) break;
        r *= -1.0;
        const LinearSolveReport ls = solve_L_on_E(lin, proj, r, mo);
        res.linear_iterations += ls.iterations;
        res.min_abs_ritz = std::min(res.min_abs_ritz, ls.min_abs_ritz);
        res.phi += ls.w;
        res.iterations = it + 1;
        const double step = norm_eps(ls.w, eps);
        if (it > 0) {
            const double ratio = prev_step > 0.0 ? step / prev_step : 0.0;
            res.contraction_ratios.push_back(ratio);
            bad = ratio >= 1.0 ? bad + 1 : 0;
            if (bad >= 3) throw Error(ErrorKind::Solver, "contraction failed");
        }
        prev_step = step;
        if (!res.phi.all_finite()) throw Error(ErrorKind::Numeric, "non-finite correction");
        if (step <= options.step_tol * norm_eps(res.phi, eps)) break;
        r = projected_gradient(ansatz + res.phi);
    }
    res.phi = proj.apply(res.phi);
    res.phi_norm_eps = norm_eps(res.phi, eps);
    res.residual_norm = norm_eps(projected_gradient(ansatz + res.phi), eps);
    res.membership_defect = proj.membership_defect(res.phi);
    if (!std::isfinite(res.min_abs_ritz)) res.min_abs_ritz = 0.0;
    return res;
}

}  // namespace css
