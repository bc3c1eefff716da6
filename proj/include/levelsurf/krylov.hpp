#pragma once

#include <functional>
#include <vector>

#include "levelsurf/fields.hpp"

namespace levelsurf {

/// y = A x for a symmetric positive definite A acting on grid fields.
using LinearOperator = std::function<void(const ScalarField2D& x, ScalarField2D& y)>;

struct PcgReport {
    int iterations = 0;
    /// ||b - A x_k||_2, starting with the initial residual.
    std::vector<double> residual_history;
    /// sqrt(r_k^T D^{-1} r_k) for the diagonal preconditioner D.
    std::vector<double> preconditioned_residual_history;
    bool converged = false;
};

struct PcgResult {
    ScalarField2D x;
    PcgReport report;
};

/// Jacobi-preconditioned conjugate gradients. Stops when
/// ||rhs - A x||_2 <= tol * ||rhs||_2 or after max_iter iterations.
/// Throws InvalidArgument for a non-positive preconditioner entry and
/// SolverBreakdown when the iteration hits a NaN or non-positive curvature.
PcgResult pcg(const LinearOperator& apply, const ScalarField2D& rhs, const ScalarField2D& precond_diagonal,
              double tol, int max_iter);

/// Same as above, starting from x0 instead of zero.
PcgResult pcg(const LinearOperator& apply, const ScalarField2D& rhs, const ScalarField2D& precond_diagonal,
              double tol, int max_iter, ScalarField2D x0);

struct IOperator {
    LinearOperator apply;
    ScalarField2D diagonal;
};

/// x -> -Laplacian(x) + (2 theta_hat / c_P) x with its exact diagonal.
/// Throws SingularOperator when theta_hat vanishes everywhere.
IOperator build_i_operator(const ScalarField2D& theta_hat, double c_P);

} // namespace levelsurf
