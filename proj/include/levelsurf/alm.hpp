#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "levelsurf/fields.hpp"
#include "levelsurf/krylov.hpp"
#include "levelsurf/model.hpp"
#include "levelsurf/spectral.hpp"

namespace levelsurf {

/// Primal splitting variables (Q = grad E, E = P, P = grad I) and their multipliers.
struct AlmState {
    explicit AlmState(Grid2D grid)
        : Q(grid), Lambda_Q(grid), P(grid), E(grid), Lambda_P(grid), Lambda_E(grid), I(grid) {}

    TensorField2D Q;
    TensorField2D Lambda_Q;
    VectorField2D P;
    VectorField2D E;
    VectorField2D Lambda_P;
    VectorField2D Lambda_E;
    ScalarField2D I;
};

struct IterationRecord {
    int iteration = 0;
    double energy = 0.0;
    double r_P = 0.0; ///< ||P - grad I||
    double r_E = 0.0; ///< ||E - P||
    double r_Q = 0.0; ///< ||Q - grad E||
    double rel_change = 0.0;
    int pcg_iterations = 0;
    bool pcg_converged = true;
};

struct Diagnostics {
    std::vector<IterationRecord> records;
    bool converged = false;
    int pcg_failures = 0;
};

using IterationCallback = std::function<void(const IterationRecord&)>;

struct SolveResult {
    ScalarField2D I;
    Diagnostics diagnostics;
};

/// Augmented-Lagrangian reconstruction. Each outer iteration runs inner_L
/// sweeps of the Q, P, E, I subproblems followed by one multiplier update.
/// When initial_I is given the primal variables start at I, P = E = grad I,
/// Q = grad E; otherwise everything starts at zero.
SolveResult solve(const ConstraintSet& constraints, const RegularizerWeights& weights, const SolverConfig& config,
                  const std::optional<ScalarField2D>& initial_I = std::nullopt,
                  const IterationCallback& on_iteration = {});

/// Cellwise Frobenius shrinkage of W = grad E - Lambda_Q / c_Q by g / c_Q.
TensorField2D q_subproblem(const VectorField2D& E, const TensorField2D& Lambda_Q, const ScalarField2D& g, double c_Q);

/// Cellwise P update. Normal mode shrinks
///   X = (c_P grad I + c_E E - Lambda_P + Lambda_E + alpha_hat v) / (c_P + c_E)
/// by h / (c_P + c_E). Tangent mode solves the 2x2 system
///   ((c_P + c_E) Id + 2 alpha_hat v v^T) P = c_P grad I + c_E E - Lambda_P + Lambda_E
/// on Gamma (h must vanish there) and shrinks elsewhere.
VectorField2D p_subproblem(const VectorField2D& grad_I, const VectorField2D& E, const VectorField2D& Lambda_P,
                           const VectorField2D& Lambda_E, const ConstraintSet& constraints, const ScalarField2D& h,
                           double c_P, double c_E, MatchingMode mode);

/// Two modified Helmholtz solves with lambda = c_E / c_Q, one per component of E.
VectorField2D e_subproblem(const VectorField2D& P, const TensorField2D& Q, const TensorField2D& Lambda_Q,
                           const VectorField2D& Lambda_E, double c_Q, double c_E, const SpectralPlan& plan);

struct ISubproblemSettings {
    double tol = 1e-8;
    int max_iter = 0; ///< 0 selects 10 * (nx + ny)
};

/// Solves -Laplacian(I) + (2 theta_hat / c_P) I = -div(P + Lambda_P / c_P) + (2 theta_hat / c_P) I_Sigma
/// with Jacobi-preconditioned CG, optionally warm-started.
PcgResult i_subproblem(const VectorField2D& P, const VectorField2D& Lambda_P, const ConstraintSet& constraints,
                       double c_P, const ISubproblemSettings& settings,
                       const std::optional<ScalarField2D>& warm_start = std::nullopt);

/// Lambda_Q += c_Q (Q - grad E); Lambda_P += c_P (P - grad I); Lambda_E += c_E (E - P).
void multiplier_update(AlmState& state, const SolverConfig& config);

} // namespace levelsurf
