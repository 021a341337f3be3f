#include "css/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace css {

namespace {

std::vector<double> tridiagonal_eigenvalues(const std::vector<double>& diag, const std::vector<double>& off) {
    const auto m = static_cast<Eigen::Index>(diag.size());
    if (m == 0) return {};
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), m);
    Eigen::VectorXd e(std::max<Eigen::Index>(m - 1, 0));
    for (Eigen::Index i = 0; i + 1 < m; ++i) e[i] = off[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

}  // namespace

MinresResult minres(const LinearOperator& apply, const InnerProduct& inner, const Field2D& b,
                    const MinresOptions& options, const Field2D* x0) {
    const Grid2D& grid = b.grid();
    MinresResult res{x0 ? *x0 : Field2D(grid), 0, 0.0, {}, 0.0, false};
    const double b_norm = std::sqrt(std::max(0.0, inner(b, b)));
    if (b_norm == 0.0) {
        res.x = Field2D(grid);
        res.converged = true;
        return res;
    }

    std::vector<double> diag, off;
    int total = 0;
    // Restarted only if the recurrence estimate and the true residual disagree.
    for (int cycle = 0; cycle < 4 && total < options.max_iterations; ++cycle) {
        Field2D r1 = b;
        if (res.x.max_abs() > 0.0) r1 -= apply(res.x);
        double beta = std::sqrt(std::max(0.0, inner(r1, r1)));
        if (beta <= options.rel_tol * b_norm) break;
        diag.clear();
        off.clear();

        Field2D r2 = r1, y = r1;
        Field2D w(grid), w1(grid), w2(grid);
        double oldb = 0.0, dbar = 0.0, epsln = 0.0, phibar = beta, cs = -1.0, sn = 0.0;
        const double target = options.rel_tol * b_norm;

        for (int itn = 1; total < options.max_iterations; ++itn) {
            ++total;
            const double s = 1.0 / beta;
            Field2D v = s * y;
            y = apply(v);
            if (itn >= 2) y.axpy(-beta / oldb, r1);
            const double alfa = inner(v, y);
            y.axpy(-alfa / beta, r2);
            r1 = std::move(r2);
            r2 = y;
            oldb = beta;
            beta = std::sqrt(std::max(0.0, inner(r2, r2)));
            diag.push_back(alfa);
            off.push_back(beta);

            const double oldeps = epsln;
            const double delta = cs * dbar + sn * alfa;
            const double gbar = sn * dbar - cs * alfa;
            epsln = sn * beta;
            dbar = -cs * beta;
            const double gamma = std::max(std::hypot(gbar, beta), std::numeric_limits<double>::min());
            cs = gbar / gamma;
            sn = beta / gamma;
            const double phi = cs * phibar;
            phibar = sn * phibar;

            w1 = std::move(w2);
            w2 = std::move(w);
            w = v;
            w.axpy(-oldeps, w1);
            w.axpy(-delta, w2);
            w *= 1.0 / gamma;
            res.x.axpy(phi, w);

            if (!std::isfinite(phibar)) throw Error(ErrorKind::Numeric, "non-finite Krylov residual");
            if (phibar <= target || beta <= 1e-14 * b_norm) break;
        }

        Field2D r = b - apply(res.x);
        res.relative_residual = std::sqrt(std::max(0.0, inner(r, r))) / b_norm;
        if (res.relative_residual <= options.rel_tol) break;
    }
    if (diag.empty()) {
        Field2D r = b - apply(res.x);
        res.relative_residual = std::sqrt(std::max(0.0, inner(r, r))) / b_norm;
    }
    res.iterations = total;
    if (!off.empty()) off.pop_back();
    res.ritz_values = tridiagonal_eigenvalues(diag, off);
    res.min_abs_ritz = std::numeric_limits<double>::infinity();
    for (double t : res.ritz_values) res.min_abs_ritz = std::min(res.min_abs_ritz, std::abs(t));
    res.converged = res.relative_residual <= options.rel_tol;
    return res;
}

}  // namespace css
