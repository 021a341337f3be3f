#pragma once

// MINRES for operators that are self-adjoint in a caller-supplied inner product.

#include <functional>
#include <vector>

#include "css/grid.hpp"

namespace css {

struct MinresOptions {
    double rel_tol = 1e-8;  // on ||b - A x|| / ||b||
    int max_iterations = 2000;
};

struct MinresResult {
    Field2D x;
    int iterations = 0;
    double relative_residual = 0.0;  // recomputed from the returned x
    std::vector<double> ritz_values;  // eigenvalues of the final Lanczos tridiagonal
    double min_abs_ritz = 0.0;
    bool converged = false;
};

using LinearOperator = std::function<Field2D(const Field2D&)>;
using InnerProduct = std::function<double(const Field2D&, const Field2D&)>;

/// Solves A x = b from the initial guess x0 (zero if absent).
MinresResult minres(const LinearOperator& apply, const InnerProduct& inner, const Field2D& b,
                    const MinresOptions& options = {}, const Field2D* x0 = nullptr);

}  // namespace css
