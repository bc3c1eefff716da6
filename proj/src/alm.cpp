#include "levelsurf/alm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "levelsurf/operators.hpp"

namespace levelsurf {

TensorField2D q_subproblem(const VectorField2D& E, const TensorField2D& Lambda_Q, const ScalarField2D& g,
                           double c_Q) {
    if (!(c_Q > 0.0)) throw InvalidArgument("q_subproblem: c_Q must be positive");
    require_same_grid(E.grid(), Lambda_Q.grid(), "q_subproblem");
    require_same_grid(E.grid(), g.grid(), "q_subproblem weight");
    TensorField2D W = jacobian(E);
    W.axpy(-1.0 / c_Q, Lambda_Q);
    for (std::size_t k = 0; k < W.xx.size(); ++k) {
        const double nrm =
            std::sqrt(W.xx[k] * W.xx[k] + W.xy[k] * W.xy[k] + W.yx[k] * W.yx[k] + W.yy[k] * W.yy[k]);
        const double s = nrm > 0.0 ? std::max(0.0, 1.0 - g[k] / (c_Q * nrm)) : 0.0;
        W.xx[k] *= s;
        W.xy[k] *= s;
        W.yx[k] *= s;
        W.yy[k] *= s;
    }
    return W;
}

VectorField2D p_subproblem(const VectorField2D& grad_I, const VectorField2D& E, const VectorField2D& Lambda_P,
                           const VectorField2D& Lambda_E, const ConstraintSet& c, const ScalarField2D& h, double c_P,
                           double c_E, MatchingMode mode) {
    if (!(c_P > 0.0) || !(c_E > 0.0)) throw InvalidArgument("p_subproblem: c_P and c_E must be positive");
    const Grid2D& grid = grad_I.grid();
    require_same_grid(grid, c.grid(), "p_subproblem");
    const double cs = c_P + c_E;
    VectorField2D P(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double bx = c_P * grad_I.x[k] + c_E * E.x[k] - Lambda_P.x[k] + Lambda_E.x[k];
        double by = c_P * grad_I.y[k] + c_E * E.y[k] - Lambda_P.y[k] + Lambda_E.y[k];
        const double a = c.alpha_hat[k];
        if (mode == MatchingMode::tangent && c.gamma_mask[k] && a != 0.0) {
            if (h[k] > 0.0) {
                throw UnsupportedConfiguration("tangent matching requires h = 0 on Gamma (cell " + std::to_string(k) +
                                               ")");
            }
            // (cs Id + 2a v v^T)^{-1} = (Id - 2a / (cs + 2a) v v^T) / cs for unit v
            const double denom = cs + 2.0 * a;
            if (!(denom > 0.0)) {
                throw UnsupportedConfiguration("tangent matching: alpha < -(c_P + c_E) / 2 makes the P-step indefinite");
            }
            const double vx = c.normals.x[k];
            const double vy = c.normals.y[k];
            const double vb = vx * bx + vy * by;
            const double f = 2.0 * a / denom;
            P.x[k] = (bx - f * vb * vx) / cs;
            P.y[k] = (by - f * vb * vy) / cs;
            continue;
        }
        if (mode == MatchingMode::normal) {
            bx += a * c.normals.x[k];
            by += a * c.normals.y[k];
        }
        const double xx = bx / cs;
        const double xy = by / cs;
        const double nrm = std::hypot(xx, xy);
        const double s = nrm > 0.0 ? std::max(0.0, 1.0 - h[k] / (cs * nrm)) : 0.0;
        P.x[k] = s * xx;
        P.y[k] = s * xy;
    }
    return P;
}

VectorField2D e_subproblem(const VectorField2D& P, const TensorField2D& Q, const TensorField2D& Lambda_Q,
                           const VectorField2D& Lambda_E, double c_Q, double c_E, const SpectralPlan& plan) {
    if (!(c_Q > 0.0) || !(c_E > 0.0)) throw InvalidArgument("e_subproblem: c_Q and c_E must be positive");
    const double lambda = c_E / c_Q;
    // The adjoint divergence of Q + Lambda_Q / c_Q carries the Neumann flux
    // data on boundary cells.
    TensorField2D flux = Q;
    flux.axpy(1.0 / c_Q, Lambda_Q);
    VectorField2D rhs = tensor_divergence(flux);
    rhs.axpy(1.0 / c_Q, Lambda_E);
    rhs.axpy(-lambda, P);
    return VectorField2D(solve_modified_helmholtz(rhs.x, lambda, plan), solve_modified_helmholtz(rhs.y, lambda, plan));
}

PcgResult i_subproblem(const VectorField2D& P, const VectorField2D& Lambda_P, const ConstraintSet& c, double c_P,
                       const ISubproblemSettings& settings, const std::optional<ScalarField2D>& warm_start) {
    if (c.sigma_mask.count() == 0) {
        throw SingularOperator("I-subproblem is singular: no height data (Sigma is empty)");
    }
    const IOperator op = build_i_operator(c.theta_hat, c_P);
    VectorField2D flux = P;
    flux.axpy(1.0 / c_P, Lambda_P);
    ScalarField2D rhs = divergence(flux);
    rhs *= -1.0;
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] += 2.0 * c.theta_hat[k] / c_P * c.heights[k];
    const Grid2D& grid = c.grid();
    const int max_iter = settings.max_iter > 0 ? settings.max_iter : 10 * (grid.nx() + grid.ny());
    if (!warm_start) return pcg(op.apply, rhs, op.diagonal, settings.tol, max_iter);

    // Solve for the correction from the warm start to tol relative to its own
    // initial residual. The O(theta) fidelity rows dominate ||rhs||, so a
    // tolerance relative to ||rhs|| would leave the free cells unsolved. The
    // floor keeps PCG from chasing round-off once the iterate has settled.
    require_same_grid(grid, warm_start->grid(), "i_subproblem warm start");
    ScalarField2D residual(grid);
    op.apply(*warm_start, residual);
    for (std::size_t k = 0; k < residual.size(); ++k) residual[k] = rhs[k] - residual[k];
    const double r0 = norm2(residual);
    const double floor = 4.0 * std::numeric_limits<double>::epsilon() * norm2(rhs);
    const double tol = r0 > 0.0 ? std::min(1.0, std::max(settings.tol, floor / r0)) : 1.0;
    PcgResult corr = pcg(op.apply, residual, op.diagonal, tol, max_iter);
    corr.x += *warm_start;
    return corr;
}

void multiplier_update(AlmState& s, const SolverConfig& config) {
    s.Lambda_Q.axpy(config.c_Q, s.Q - jacobian(s.E));
    s.Lambda_P.axpy(config.c_P, s.P - gradient(s.I));
    s.Lambda_E.axpy(config.c_E, s.E - s.P);
}

SolveResult solve(const ConstraintSet& constraints, const RegularizerWeights& weights, const SolverConfig& config,
                  const std::optional<ScalarField2D>& initial_I, const IterationCallback& on_iteration) {
    config.validate();
    const Grid2D grid = constraints.grid();
    require_same_grid(grid, weights.g.grid(), "solve weight g");
    require_same_grid(grid, weights.h.grid(), "solve weight h");
    if (constraints.sigma_mask.count() == 0) {
        throw SingularOperator("cannot reconstruct without height data (Sigma is empty)");
    }
    if (auto issues = validate(constraints); !issues.empty()) {
        std::string msg = "invalid constraints: " + issues.front();
        if (issues.size() > 1) msg += " (+" + std::to_string(issues.size() - 1) + " more)";
        throw InvalidArgument(msg);
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(weights.g[k] >= 0.0) || !(weights.h[k] >= 0.0)) {
            throw InvalidArgument("regularizer weights must be non-negative");
        }
    }

    const SpectralPlan plan(grid);
    AlmState st(grid);
    if (initial_I) {
        require_same_grid(grid, initial_I->grid(), "solve initial_I");
        st.I = *initial_I;
        st.P = gradient(st.I);
        st.E = st.P;
        st.Q = jacobian(st.E);
    }
    const ISubproblemSettings pcg_settings{config.pcg_tol, config.pcg_max_for(grid)};

    SolveResult result{st.I, {}};
    Diagnostics& diag = result.diagnostics;
    int quiet = 0;
    for (int k = 1; k <= config.outer_max; ++k) {
        const ScalarField2D previous = st.I;
        IterationRecord rec;
        rec.iteration = k;
        for (int l = 0; l < config.inner_L; ++l) {
            st.Q = q_subproblem(st.E, st.Lambda_Q, weights.g, config.c_Q);
            st.P = p_subproblem(gradient(st.I), st.E, st.Lambda_P, st.Lambda_E, constraints, weights.h, config.c_P,
                                config.c_E, config.matching_mode);
            st.E = e_subproblem(st.P, st.Q, st.Lambda_Q, st.Lambda_E, config.c_Q, config.c_E, plan);
            PcgResult ir = i_subproblem(st.P, st.Lambda_P, constraints, config.c_P, pcg_settings, st.I);
            st.I = std::move(ir.x);
            rec.pcg_iterations += ir.report.iterations;
            rec.pcg_converged = rec.pcg_converged && ir.report.converged;
        }
        multiplier_update(st, config);
        if (!all_finite(st.I)) throw SolverBreakdown("reconstruction diverged at outer iteration " + std::to_string(k));

        rec.r_P = norm2(st.P - gradient(st.I));
        rec.r_E = norm2(st.E - st.P);
        rec.r_Q = norm2(st.Q - jacobian(st.E));
        rec.energy = energy(st.I, constraints, weights, config.matching_mode);
        rec.rel_change = norm2(st.I - previous) / std::max(norm2(st.I), 1e-12);
        if (!rec.pcg_converged) ++diag.pcg_failures;
        diag.records.push_back(rec);
        if (on_iteration) on_iteration(rec);
        // The second I-step repeats the first (P + Lambda_P / c_P cancels), so
        // a single small change is not evidence of convergence.
        quiet = rec.rel_change < config.tol_rel_change ? quiet + 1 : 0;
        if (quiet >= config.stop_patience) {
            diag.converged = true;
            break;
        }
    }
    result.I = std::move(st.I);
    return result;
}

} // namespace levelsurf
