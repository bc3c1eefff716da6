#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "levelsurf/fields.hpp"

namespace levelsurf {

/// Boolean per-cell membership over a grid.
class Mask2D {
public:
    explicit Mask2D(Grid2D grid, bool fill = false) : grid_(grid), bits_(grid.size(), fill ? 1 : 0) {}

    [[nodiscard]] const Grid2D& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
    [[nodiscard]] bool operator()(int i, int j) const noexcept { return bits_[grid_.index(i, j)] != 0; }
    [[nodiscard]] bool operator[](std::size_t k) const noexcept { return bits_[k] != 0; }
    void set(int i, int j, bool v = true) noexcept { bits_[grid_.index(i, j)] = v ? 1 : 0; }
    void set(std::size_t k, bool v = true) noexcept { bits_[k] = v ? 1 : 0; }
    [[nodiscard]] std::size_t count() const noexcept;

    friend bool operator==(const Mask2D&, const Mask2D&) = default;

private:
    Grid2D grid_;
    std::vector<std::uint8_t> bits_;
};

/// Rasterized height data (Sigma) and direction data (Gamma).
///
/// theta_hat holds theta on Sigma and 0 elsewhere; alpha_hat holds alpha on
/// Gamma and 0 elsewhere; normals are unit vectors on Gamma, zero elsewhere.
struct ConstraintSet {
    explicit ConstraintSet(Grid2D grid)
        : sigma_mask(grid), heights(grid), theta_hat(grid), gamma_mask(grid), normals(grid), alpha_hat(grid) {}

    [[nodiscard]] const Grid2D& grid() const noexcept { return heights.grid(); }

    /// Adds a height sample; overwrites an existing one at the same cell.
    void set_height(int i, int j, double height, double theta);
    /// Adds a direction sample; (vx, vy) is normalized.
    void set_normal(int i, int j, double vx, double vy, double alpha);

    Mask2D sigma_mask;
    ScalarField2D heights;
    ScalarField2D theta_hat;
    Mask2D gamma_mask;
    VectorField2D normals;
    ScalarField2D alpha_hat;
};

struct RegularizerWeights {
    static RegularizerWeights constant(Grid2D grid, double g, double h) {
        return {ScalarField2D(grid, g), ScalarField2D(grid, h)};
    }

    ScalarField2D g; ///< second-order weight
    ScalarField2D h; ///< first-order weight
};

enum class MatchingMode { normal, tangent, none };

MatchingMode parse_matching_mode(const std::string& s);
std::string to_string(MatchingMode m);

struct SolverConfig {
    double c_Q = 1.0;
    double c_P = 1.0;
    double c_E = 1.0;
    int outer_max = 2000;
    int inner_L = 1;
    /// Stop once ||I^k - I^{k-1}|| / max(||I^k||, eps) stays below this for
    /// stop_patience consecutive outer iterations.
    double tol_rel_change = 1e-7;
    int stop_patience = 3;
    double pcg_tol = 1e-8;
    /// 0 selects 10 * (nx + ny).
    int pcg_max = 0;
    MatchingMode matching_mode = MatchingMode::normal;

    /// Throws InvalidArgument on a non-positive penalty, inner_L < 1 or stop_patience < 1.
    void validate() const;
    [[nodiscard]] int pcg_max_for(const Grid2D& grid) const {
        return pcg_max > 0 ? pcg_max : 10 * (grid.nx() + grid.ny());
    }
};

/// Discrete objective
///   sum g |grad grad I|_F + h |grad I| - alpha_hat grad I . v + theta_hat (I - I_Sigma)^2
/// In tangent mode the matching term is + alpha_hat (grad I . v)^2; in mode
/// `none` it is dropped.
double energy(const ScalarField2D& I, const ConstraintSet& constraints, const RegularizerWeights& weights,
              MatchingMode mode = MatchingMode::normal);

/// Every invariant violation of the constraint set; empty when valid.
std::vector<std::string> validate(const ConstraintSet& constraints);
std::vector<std::string> validate(const RegularizerWeights& weights);

} // namespace levelsurf
