#include "levelsurf/krylov.hpp"

#include <cmath>
#include <string>

namespace levelsurf {

PcgResult pcg(const LinearOperator& apply, const ScalarField2D& rhs, const ScalarField2D& precond_diagonal,
              double tol, int max_iter) {
    return pcg(apply, rhs, precond_diagonal, tol, max_iter, ScalarField2D(rhs.grid()));
}

PcgResult pcg(const LinearOperator& apply, const ScalarField2D& rhs, const ScalarField2D& precond_diagonal,
              double tol, int max_iter, ScalarField2D x0) {
    const Grid2D& grid = rhs.grid();
    require_same_grid(grid, precond_diagonal.grid(), "pcg preconditioner");
    require_same_grid(grid, x0.grid(), "pcg initial guess");
    for (std::size_t k = 0; k < precond_diagonal.size(); ++k) {
        if (!(precond_diagonal[k] > 0.0)) {
            throw InvalidArgument("pcg: preconditioner entry " + std::to_string(k) + " is not positive");
        }
    }

    PcgResult result{std::move(x0), {}};
    PcgReport& rep = result.report;
    ScalarField2D& x = result.x;

    const double bnorm = norm2(rhs);
    if (bnorm == 0.0) {
        x.fill(0.0);
        rep.residual_history.push_back(0.0);
        rep.preconditioned_residual_history.push_back(0.0);
        rep.converged = true;
        return result;
    }

    ScalarField2D r(grid);
    apply(x, r);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = rhs[k] - r[k];

    ScalarField2D z(grid);
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = r[k] / precond_diagonal[k];
    ScalarField2D p = z;
    ScalarField2D ap(grid);

    double rz = dot(r, z);
    double rnorm = norm2(r);
    rep.residual_history.push_back(rnorm);
    rep.preconditioned_residual_history.push_back(std::sqrt(std::max(rz, 0.0)));
    const double target = tol * bnorm;

    while (rnorm > target && rep.iterations < max_iter) {
        apply(p, ap);
        const double pap = dot(p, ap);
        if (!std::isfinite(pap) || pap <= 0.0) {
            throw SolverBreakdown("pcg: non-positive curvature p^T A p = " + std::to_string(pap) +
                                  " at iteration " + std::to_string(rep.iterations));
        }
        const double alpha = rz / pap;
        x.axpy(alpha, p);
        r.axpy(-alpha, ap);
        for (std::size_t k = 0; k < z.size(); ++k) z[k] = r[k] / precond_diagonal[k];
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = z[k] + beta * p[k];

        ++rep.iterations;
        rnorm = norm2(r);
        if (!std::isfinite(rnorm)) {
            throw SolverBreakdown("pcg: residual became NaN at iteration " + std::to_string(rep.iterations));
        }
        rep.residual_history.push_back(rnorm);
        rep.preconditioned_residual_history.push_back(std::sqrt(std::max(rz, 0.0)));
    }
    rep.converged = rnorm <= target;
    return result;
}

IOperator build_i_operator(const ScalarField2D& theta_hat, double c_P) {
    if (!(c_P > 0.0)) throw InvalidArgument("build_i_operator: c_P must be positive");
    const Grid2D grid = theta_hat.grid();
    ScalarField2D shift(grid);
    bool any_positive = false;
    for (std::size_t k = 0; k < shift.size(); ++k) {
        if (theta_hat[k] < 0.0) throw InvalidArgument("build_i_operator: theta_hat must be non-negative");
        any_positive = any_positive || theta_hat[k] > 0.0;
        shift[k] = 2.0 * theta_hat[k] / c_P;
    }
    if (!any_positive) {
        throw SingularOperator("I-subproblem operator is singular: theta_hat vanishes on the whole grid");
    }

    const int nx = grid.nx();
    const int ny = grid.ny();
    ScalarField2D diag(grid);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int neighbours = (i > 0) + (i + 1 < nx) + (j > 0) + (j + 1 < ny);
            diag(i, j) = neighbours + shift(i, j);
        }
    }

    LinearOperator apply = [shift = std::move(shift), nx, ny](const ScalarField2D& x, ScalarField2D& y) {
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const double c = x(i, j);
                double s = shift(i, j) * c;
                if (i > 0) s += c - x(i - 1, j);
                if (i + 1 < nx) s += c - x(i + 1, j);
                if (j > 0) s += c - x(i, j - 1);
                if (j + 1 < ny) s += c - x(i, j + 1);
                y(i, j) = s;
            }
        }
    };
    return {std::move(apply), std::move(diag)};
}

} // namespace levelsurf
