#include "levelsurf/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levelsurf/operators.hpp"

namespace levelsurf {

std::size_t Mask2D::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

void ConstraintSet::set_height(int i, int j, double height, double theta) {
    if (!grid().contains(i, j)) throw InvalidArgument("set_height: cell outside grid");
    sigma_mask.set(i, j);
    heights(i, j) = height;
    theta_hat(i, j) = theta;
}

void ConstraintSet::set_normal(int i, int j, double vx, double vy, double alpha) {
    if (!grid().contains(i, j)) throw InvalidArgument("set_normal: cell outside grid");
    const double len = std::hypot(vx, vy);
    if (!(len > 0.0)) throw InvalidArgument("set_normal: zero direction vector");
    gamma_mask.set(i, j);
    normals.x(i, j) = vx / len;
    normals.y(i, j) = vy / len;
    alpha_hat(i, j) = alpha;
}

MatchingMode parse_matching_mode(const std::string& s) {
    if (s == "normal") return MatchingMode::normal;
    if (s == "tangent") return MatchingMode::tangent;
    if (s == "none") return MatchingMode::none;
    throw InvalidArgument("unknown matching mode '" + s + "' (expected normal, tangent or none)");
}

std::string to_string(MatchingMode m) {
    switch (m) {
    case MatchingMode::normal: return "normal";
    case MatchingMode::tangent: return "tangent";
    case MatchingMode::none: return "none";
    }
    return "normal";
}

void SolverConfig::validate() const {
    if (!(c_Q > 0.0) || !(c_P > 0.0) || !(c_E > 0.0)) {
        throw InvalidArgument("penalty parameters c_Q, c_P, c_E must be positive");
    }
    if (inner_L < 1) throw InvalidArgument("inner_L must be at least 1");
    if (outer_max < 1) throw InvalidArgument("outer_max must be at least 1");
    if (stop_patience < 1) throw InvalidArgument("stop_patience must be at least 1");
    if (!(pcg_tol > 0.0)) throw InvalidArgument("pcg_tol must be positive");
}

double energy(const ScalarField2D& I, const ConstraintSet& c, const RegularizerWeights& w, MatchingMode mode) {
    const Grid2D& grid = I.grid();
    require_same_grid(grid, c.grid(), "energy constraints");
    require_same_grid(grid, w.g.grid(), "energy weight g");
    require_same_grid(grid, w.h.grid(), "energy weight h");

    const VectorField2D gI = gradient(I);
    const TensorField2D hess = jacobian(gI);
    double total = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double frob = std::sqrt(hess.xx[k] * hess.xx[k] + hess.xy[k] * hess.xy[k] +
                                      hess.yx[k] * hess.yx[k] + hess.yy[k] * hess.yy[k]);
        total += w.g[k] * frob + w.h[k] * std::hypot(gI.x[k], gI.y[k]);
        const double along = gI.x[k] * c.normals.x[k] + gI.y[k] * c.normals.y[k];
        if (mode == MatchingMode::normal) {
            total -= c.alpha_hat[k] * along;
        } else if (mode == MatchingMode::tangent) {
            total += c.alpha_hat[k] * along * along;
        }
        const double d = I[k] - c.heights[k];
        total += c.theta_hat[k] * d * d;
    }
    return total;
}

std::vector<std::string> validate(const ConstraintSet& c) {
    std::vector<std::string> out;
    const Grid2D& grid = c.grid();
    auto where = [&](std::size_t k) {
        std::ostringstream s;
        s << "(" << (k % static_cast<std::size_t>(grid.nx())) << ", " << (k / static_cast<std::size_t>(grid.nx()))
          << ")";
        return s.str();
    };
    if (c.sigma_mask.count() == 0) out.emplace_back("Sigma (height data) is empty");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const bool in_sigma = c.sigma_mask[k];
        const bool in_gamma = c.gamma_mask[k];
        const double th = c.theta_hat[k];
        if (!std::isfinite(th) || !std::isfinite(c.heights[k]) || !std::isfinite(c.alpha_hat[k]) ||
            !std::isfinite(c.normals.x[k]) || !std::isfinite(c.normals.y[k])) {
            out.push_back("non-finite constraint value at " + where(k));
            continue;
        }
        if (in_sigma && !(th > 0.0)) out.push_back("theta_hat not positive on Sigma at " + where(k));
        if (!in_sigma && th != 0.0) out.push_back("theta_hat nonzero off Sigma at " + where(k));
        if (!in_gamma && c.alpha_hat[k] != 0.0) out.push_back("alpha_hat nonzero off Gamma at " + where(k));
        const double len = std::hypot(c.normals.x[k], c.normals.y[k]);
        if (in_gamma && std::abs(len - 1.0) > 1e-9) {
            std::ostringstream s;
            s << "normal at " << where(k) << " has length " << len;
            out.push_back(s.str());
        }
        if (!in_gamma && len != 0.0) out.push_back("normal set off Gamma at " + where(k));
    }
    return out;
}

std::vector<std::string> validate(const RegularizerWeights& w) {
    std::vector<std::string> out;
    require_same_grid(w.g.grid(), w.h.grid(), "validate weights");
    bool any_positive = false;
    std::size_t neg_g = 0;
    std::size_t neg_h = 0;
    for (std::size_t k = 0; k < w.g.size(); ++k) {
        if (!(w.g[k] >= 0.0)) ++neg_g;
        if (!(w.h[k] >= 0.0)) ++neg_h;
        any_positive = any_positive || w.g[k] + w.h[k] > 0.0;
    }
    if (neg_g) out.push_back("g negative or NaN on " + std::to_string(neg_g) + " cells");
    if (neg_h) out.push_back("h negative or NaN on " + std::to_string(neg_h) + " cells");
    if (!any_positive) out.emplace_back("g + h vanishes everywhere");
    return out;
}

} // namespace levelsurf
