#pragma once

#include <functional>
#include <random>

#include <Eigen/Dense>

#include "levelsurf/fields.hpp"

namespace levelsurf::test {

inline ScalarField2D random_field(const Grid2D& grid, std::mt19937& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    ScalarField2D f(grid);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = u(rng);
    return f;
}

inline VectorField2D random_vector_field(const Grid2D& grid, std::mt19937& rng) {
    return VectorField2D(random_field(grid, rng), random_field(grid, rng));
}

inline TensorField2D random_tensor_field(const Grid2D& grid, std::mt19937& rng) {
    TensorField2D t(grid);
    t.xx = random_field(grid, rng);
    t.xy = random_field(grid, rng);
    t.yx = random_field(grid, rng);
    t.yy = random_field(grid, rng);
    return t;
}

/// Dense matrix of a linear map on scalar fields, assembled column by column
/// from unit vectors.
inline Eigen::MatrixXd assemble(const Grid2D& grid, const std::function<ScalarField2D(const ScalarField2D&)>& op) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd A(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        ScalarField2D e(grid);
        e[static_cast<std::size_t>(c)] = 1.0;
        const ScalarField2D col = op(e);
        for (Eigen::Index r = 0; r < n; ++r) A(r, c) = col[static_cast<std::size_t>(r)];
    }
    return A;
}

/// Neumann 5-point Laplacian written out cell by cell, independent of the
/// library's gradient/divergence pair.
inline Eigen::MatrixXd neumann_laplacian(const Grid2D& grid) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) {
            const auto k = static_cast<Eigen::Index>(grid.index(i, j));
            const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
            for (const auto& q : nb) {
                if (!grid.contains(q[0], q[1])) continue;
                const auto m = static_cast<Eigen::Index>(grid.index(q[0], q[1]));
                L(k, m) += 1.0;
                L(k, k) -= 1.0;
            }
        }
    }
    return L;
}

inline Eigen::VectorXd to_vec(const ScalarField2D& f) {
    return Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
}

inline ScalarField2D from_vec(const Grid2D& grid, const Eigen::VectorXd& v) {
    return ScalarField2D(grid, std::vector<double>(v.data(), v.data() + v.size()));
}

} // namespace levelsurf::test
