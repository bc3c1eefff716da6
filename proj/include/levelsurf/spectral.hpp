#pragma once

#include <memory>
#include <span>
#include <vector>

#include "levelsurf/fields.hpp"

namespace levelsurf {

/// Precomputed transforms for one grid shape.
///
/// Coefficients use the orthonormal DCT-II: for an N-point signal
///   c_k = s_k * sum_j u_j cos(pi k (j + 1/2) / N),  s_0 = sqrt(1/N), s_k = sqrt(2/N).
/// The 1D Neumann Laplacian [-1 1; 1 -2 1; ...; 1 -1] is diagonal in this basis
/// with eigenvalues -sigma_k^2, sigma_k = 2 sin(pi k / (2N)).
///
/// A plan is immutable after construction and may be shared between threads.
class SpectralPlan {
public:
    explicit SpectralPlan(Grid2D grid);
    ~SpectralPlan();
    SpectralPlan(SpectralPlan&&) noexcept;
    SpectralPlan& operator=(SpectralPlan&&) noexcept;
    SpectralPlan(const SpectralPlan&) = delete;
    SpectralPlan& operator=(const SpectralPlan&) = delete;

    [[nodiscard]] const Grid2D& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> sigma_x() const noexcept { return sigma_x_; }
    [[nodiscard]] std::span<const double> sigma_y() const noexcept { return sigma_y_; }

    /// Spectral symbol of (Laplacian - lambda): M(kx, ky) = -sigma_x^2 - sigma_y^2 - lambda.
    [[nodiscard]] ScalarField2D symbol(double lambda) const;

    struct Impl;

private:
    friend ScalarField2D dct2_forward(const ScalarField2D&, const SpectralPlan&);
    friend ScalarField2D dct2_inverse(const ScalarField2D&, const SpectralPlan&);

    Grid2D grid_;
    std::vector<double> sigma_x_;
    std::vector<double> sigma_y_;
    std::unique_ptr<Impl> impl_;
};

ScalarField2D dct2_forward(const ScalarField2D& f, const SpectralPlan& plan);
ScalarField2D dct2_inverse(const ScalarField2D& coeffs, const SpectralPlan& plan);

/// Solves Laplacian(u) - lambda u = F with homogeneous Neumann conditions by
/// entrywise division in DCT space. Throws InvalidArgument for lambda <= 0.
ScalarField2D solve_modified_helmholtz(const ScalarField2D& F, double lambda, const SpectralPlan& plan);

} // namespace levelsurf
