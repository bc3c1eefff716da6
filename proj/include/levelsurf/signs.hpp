#pragma once

#include <string>
#include <vector>

#include "levelsurf/alm.hpp"
#include "levelsurf/model.hpp"

namespace levelsurf {

struct CellSign {
    int i = 0;
    int j = 0;
    /// v . grad I at the time of the decision (before any flip).
    double rho = 0.0;
    /// |rho|
    double eps = 0.0;
    /// Round in which the cell joined Gamma_eps; 0 when it never did.
    int admitted_round = 0;
    bool flipped = false;
};

struct SignResult {
    /// Input set with decided normals. Cells never admitted keep their
    /// normal and have alpha_hat set to 0.
    ConstraintSet constraints;
    /// One entry per Gamma cell in storage order.
    std::vector<CellSign> cells;
    /// Surface from the last solve of the procedure.
    ScalarField2D surface;
    int rounds = 0;
    /// True when every Gamma cell was admitted.
    bool complete = false;
    std::vector<std::string> warnings;
};

/// Solves with alpha_hat = 0, then flips v wherever rho = v . grad I < 0
/// (rho = 0 keeps the sign). grad I is the central-difference gradient;
/// |rho| <= 1e-6 max |grad I| counts as zero; such cells are re-tested with
/// central differences over 2, 3 and 4 cells before keeping their sign.
SignResult determine_signs_global(const ConstraintSet& constraints, const RegularizerWeights& weights,
                                  const SolverConfig& config);

/// Grows Gamma_eps from the empty set. Each round solves with alpha_hat active
/// on Gamma_eps only (warm-started from the previous surface), then admits the
/// remaining Gamma cells with |v . grad I| > eps_threshold, flipping v where
/// rho < 0. Admitted cells keep their sign. Stops when Gamma_eps = Gamma, when
/// a round admits nothing, or after max_rounds.
SignResult determine_signs_adaptive(const ConstraintSet& constraints, const RegularizerWeights& weights,
                                    const SolverConfig& config, double eps_threshold, int max_rounds = 50);

} // namespace levelsurf
