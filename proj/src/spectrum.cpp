#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "css/ground_state.hpp"

namespace css {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Field2D to_field(const Grid2D& g, const VectorXd& v) {
    return Field2D(g, std::vector<double>(v.data(), v.data() + v.size()));
}

VectorXd to_vector(const Field2D& f) { return Eigen::Map<const VectorXd>(f.values().data(), f.size()); }

// Orthonormal basis of the column span, dropping numerically dependent directions.
MatrixXd orthonormalize(const MatrixXd& s) {
    Eigen::ColPivHouseholderQR<MatrixXd> qr(s);
    qr.setThreshold(1e-10);
    const Eigen::Index rank = qr.rank();
    MatrixXd q = qr.householderQ() * MatrixXd::Identity(s.rows(), rank);
    // A second pass restores orthogonality lost to cancellation.
    Eigen::HouseholderQR<MatrixXd> again(q);
    return again.householderQ() * MatrixXd::Identity(s.rows(), rank);
}

}  // namespace

SpectrumReport nondegeneracy_spectrum(const RadialProfile& profile, const Grid2D& grid) {
    if (grid.spacing() > 0.1) throw Error(ErrorKind::Parameter, "grid does not resolve the profile (spacing > 0.1)");

    const Field2D u = sample_profile(profile, grid, grid.center());
    Field2D potential(grid);
    for (std::size_t k = 0; k < u.size(); ++k)
        potential[k] = profile.v0 - (profile.p - 1.0) * std::pow(std::abs(u[k]), profile.p - 2.0);

    auto apply = [&](const MatrixXd& x) {
        MatrixXd out(x.rows(), x.cols());
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            const Field2D f = to_field(grid, x.col(c));
            Field2D a = laplacian(f);
            a *= -1.0;
            for (std::size_t k = 0; k < a.size(); ++k) a[k] += potential[k] * f[k];
            out.col(c) = to_vector(a);
        }
        return out;
    };
    auto precondition = [&](const MatrixXd& r) {
        MatrixXd out(r.rows(), r.cols());
        for (Eigen::Index c = 0; c < r.cols(); ++c)
            out.col(c) = to_vector(solve_helmholtz(to_field(grid, r.col(c)), 1.0, profile.v0));
        return out;
    };

    const int block = 6;
    const int wanted = 4;
    const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> gauss;
    MatrixXd x(n, block);
    // Seed the block with smooth localized shapes plus noise.
    for (Eigen::Index k = 0; k < n; ++k)
        for (int c = 0; c < block; ++c) x(k, c) = u[static_cast<std::size_t>(k)] * gauss(rng);
    x = orthonormalize(x);

    // Residuals are judged against the operator norm; roundoff floors them near 1e-13 of it.
    const double h = grid.spacing();
    const double tolerance = 1e-10 * (2.0 * laplacian_symbol(std::numbers::pi) / (h * h) + potential.max_abs());
    MatrixXd p_dir;
    VectorXd theta;
    int it = 0;
    bool converged = false;
    for (; it < 1000; ++it) {
        const MatrixXd ax = apply(x);
        const MatrixXd g = x.transpose() * ax;
        Eigen::SelfAdjointEigenSolver<MatrixXd> small(0.5 * (g + g.transpose()));
        x = x * small.eigenvectors();
        const MatrixXd ax_rot = ax * small.eigenvectors();
        theta = small.eigenvalues();
        const MatrixXd r = ax_rot - x * theta.asDiagonal();
        double worst = 0.0;
        for (int c = 0; c < wanted + 1; ++c) worst = std::max(worst, r.col(c).norm() / std::max(1.0, std::abs(theta(c))));
        if (worst < tolerance) {
            converged = true;
            break;
        }
        const MatrixXd w = precondition(r);
        MatrixXd s(n, block + w.cols() + p_dir.cols());
        s << x, w, p_dir;
        const MatrixXd q = orthonormalize(s);
        const MatrixXd aq = apply(q);
        const MatrixXd gq = q.transpose() * aq;
        Eigen::SelfAdjointEigenSolver<MatrixXd> rr(0.5 * (gq + gq.transpose()));
        const MatrixXd x_new = q * rr.eigenvectors().leftCols(block);
        p_dir = x_new - x * (x.transpose() * x_new);
        x = x_new;
    }
    if (!converged) throw Error(ErrorKind::Solver, "spectrum failed");

    SpectrumReport rep;
    rep.iterations = it;
    rep.lowest_eigenvalue = theta(0);
    rep.near_kernel_threshold = 10.0 * grid.spacing() * grid.spacing();
    std::vector<int> order(block);
    for (int c = 0; c < block; ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(theta(a)) < std::abs(theta(b)); });
    const double cell = grid.spacing();
    std::vector<int> kernel_cols;
    for (int m = 0; m < wanted; ++m) {
        const int c = order[m];
        rep.eigenvalues.push_back(theta(c));
        VectorXd v = x.col(c) / (x.col(c).norm() * cell);
        rep.eigenvectors.push_back(to_field(grid, v));
        if (std::abs(theta(c)) <= rep.near_kernel_threshold) kernel_cols.push_back(c);
    }
    rep.near_kernel_dim = static_cast<int>(kernel_cols.size());

    // Principal angles between the near kernel and the translation modes.
    MatrixXd modes(n, 2);
    const Point c0 = grid.center();
    for (std::size_t j = 0; j < grid.n(); ++j) {
        for (std::size_t i = 0; i < grid.n(); ++i) {
            const Point d = grid.point(i, j) - c0;
            const double r = norm(d);
            const double dudr = r > 0.0 ? profile.derivative(r) / r : 0.0;
            modes(static_cast<Eigen::Index>(grid.index(i, j)), 0) = dudr * d.x1;
            modes(static_cast<Eigen::Index>(grid.index(i, j)), 1) = dudr * d.x2;
        }
    }
    if (!kernel_cols.empty()) {
        MatrixXd kern(n, static_cast<Eigen::Index>(kernel_cols.size()));
        for (std::size_t m = 0; m < kernel_cols.size(); ++m) kern.col(static_cast<Eigen::Index>(m)) = x.col(kernel_cols[m]);
        const MatrixXd qa = orthonormalize(kern);
        const MatrixXd qb = orthonormalize(modes);
        Eigen::JacobiSVD<MatrixXd> svd(qa.transpose() * qb);
        rep.alignment = svd.singularValues().minCoeff();
    }
    return rep;
}

}  // namespace css
