#include "levelsurf/signs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levelsurf/operators.hpp"

namespace levelsurf {

namespace {

std::vector<CellSign> gamma_cells(const ConstraintSet& c) {
    std::vector<CellSign> cells;
    const Grid2D& grid = c.grid();
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) {
            if (c.gamma_mask(i, j)) cells.push_back({i, j, 0.0, 0.0, 0, false});
        }
    }
    return cells;
}

// |rho| at or below this counts as zero: on flat stretches rho is round-off
// whose sign carries no information.
double tie_band(const VectorField2D& grad) {
    double m = 0.0;
    for (std::size_t k = 0; k < grad.x.size(); ++k) m = std::max(m, std::hypot(grad.x[k], grad.y[k]));
    return 1e-6 * m;
}

// v . grad I from the central difference; inside the tie band the stencil is
// widened up to four cells so that cells on a thick rasterized line (where both
// neighbours carry the same height) still see the slope beyond it.
double rho_at(const ScalarField2D& I, const VectorField2D& grad, double tie, int i, int j, double vx, double vy) {
    const Grid2D& g = I.grid();
    const std::size_t k = g.index(i, j);
    double rho = vx * grad.x[k] + vy * grad.y[k];
    for (int s = 2; s <= 4 && std::abs(rho) <= tie; ++s) {
        const int xl = std::max(i - s, 0);
        const int xh = std::min(i + s, g.nx() - 1);
        const int yl = std::max(j - s, 0);
        const int yh = std::min(j + s, g.ny() - 1);
        const double gx = (I(xh, j) - I(xl, j)) / (xh - xl);
        const double gy = (I(i, yh) - I(i, yl)) / (yh - yl);
        rho = vx * gx + vy * gy;
    }
    return rho;
}

} // namespace

SignResult determine_signs_global(const ConstraintSet& constraints, const RegularizerWeights& weights,
                                  const SolverConfig& config) {
    ConstraintSet iso = constraints;
    iso.alpha_hat.fill(0.0);
    SolveResult solved = solve(iso, weights, config);
    const VectorField2D grad = central_gradient(solved.I);
    const double tie = tie_band(grad);

    SignResult r{constraints, gamma_cells(constraints), std::move(solved.I), 1, true, {}};
    ConstraintSet& out = r.constraints;
    for (CellSign& cell : r.cells) {
        const std::size_t k = out.grid().index(cell.i, cell.j);
        cell.rho = rho_at(r.surface, grad, tie, cell.i, cell.j, out.normals.x[k], out.normals.y[k]);
        cell.eps = std::abs(cell.rho);
        cell.admitted_round = 1;
        if (cell.rho < -tie) {
            out.normals.x[k] = -out.normals.x[k];
            out.normals.y[k] = -out.normals.y[k];
            cell.flipped = true;
        }
    }
    return r;
}

SignResult determine_signs_adaptive(const ConstraintSet& constraints, const RegularizerWeights& weights,
                                    const SolverConfig& config, double eps_threshold, int max_rounds) {
    if (!(eps_threshold > 0.0)) throw InvalidArgument("determine_signs_adaptive: eps_threshold must be positive");
    if (max_rounds < 1) throw InvalidArgument("determine_signs_adaptive: max_rounds must be at least 1");

    ConstraintSet work = constraints;
    work.alpha_hat.fill(0.0);
    SignResult r{work, gamma_cells(constraints), ScalarField2D(constraints.grid()), 0, false, {}};
    std::size_t admitted = 0;
    std::optional<ScalarField2D> warm;

    for (int round = 1; round <= max_rounds && admitted < r.cells.size(); ++round) {
        SolveResult solved = solve(work, weights, config, warm);
        const VectorField2D grad = central_gradient(solved.I);
        const double tie = tie_band(grad);
        std::size_t new_cells = 0;
        for (CellSign& cell : r.cells) {
            if (cell.admitted_round > 0) continue;
            const std::size_t k = work.grid().index(cell.i, cell.j);
            cell.rho = rho_at(solved.I, grad, tie, cell.i, cell.j, work.normals.x[k], work.normals.y[k]);
            cell.eps = std::abs(cell.rho);
            if (!(cell.eps > eps_threshold)) continue;
            cell.admitted_round = round;
            if (cell.rho < -tie) {
                work.normals.x[k] = -work.normals.x[k];
                work.normals.y[k] = -work.normals.y[k];
                cell.flipped = true;
            }
            work.alpha_hat[k] = constraints.alpha_hat[k];
            ++new_cells;
        }
        admitted += new_cells;
        r.rounds = round;
        r.surface = solved.I;
        warm = std::move(solved.I);
        if (new_cells == 0) break;
    }

    r.constraints = std::move(work);
    r.complete = admitted == r.cells.size();
    if (!r.complete) {
        std::ostringstream msg;
        msg << "Gamma_eps incomplete after " << r.rounds << " round(s): " << admitted << " of " << r.cells.size()
            << " cells exceeded eps_threshold = " << eps_threshold;
        r.warnings.push_back(msg.str());
    }
    return r;
}

} // namespace levelsurf
