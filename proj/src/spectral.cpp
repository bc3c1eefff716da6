#include "levelsurf/spectral.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

namespace levelsurf {

namespace {

// The FFTW planner is not reentrant; execution of an existing plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<double> singular_values(int n) {
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        s[static_cast<std::size_t>(k)] = 2.0 * std::sin(std::numbers::pi * k / (2.0 * n));
    }
    return s;
}

// FFTW's REDFT10 computes 2 * sum_j u_j cos(...) per axis.
std::vector<double> forward_scale(int n) {
    std::vector<double> w(static_cast<std::size_t>(n));
    w[0] = 0.5 * std::sqrt(1.0 / n);
    for (int k = 1; k < n; ++k) w[static_cast<std::size_t>(k)] = 0.5 * std::sqrt(2.0 / n);
    return w;
}

// FFTW's REDFT01 computes X_0 + 2 sum_{k>=1} X_k cos(...) per axis.
std::vector<double> inverse_scale(int n) {
    std::vector<double> w(static_cast<std::size_t>(n));
    w[0] = std::sqrt(1.0 / n);
    for (int k = 1; k < n; ++k) w[static_cast<std::size_t>(k)] = 0.5 * std::sqrt(2.0 / n);
    return w;
}

} // namespace

struct SpectralPlan::Impl {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    std::vector<double> fwd_x, fwd_y, inv_x, inv_y;

    ~Impl() {
        std::lock_guard lock(planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (inverse) fftw_destroy_plan(inverse);
    }
};

SpectralPlan::SpectralPlan(Grid2D grid)
    : grid_(grid), sigma_x_(singular_values(grid.nx())), sigma_y_(singular_values(grid.ny())),
      impl_(std::make_unique<Impl>()) {
    const int nx = grid.nx();
    const int ny = grid.ny();
    impl_->fwd_x = forward_scale(nx);
    impl_->fwd_y = forward_scale(ny);
    impl_->inv_x = inverse_scale(nx);
    impl_->inv_y = inverse_scale(ny);

    std::vector<double> a(grid.size()), b(grid.size());
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    impl_->forward = fftw_plan_r2r_2d(ny, nx, a.data(), b.data(), FFTW_REDFT10, FFTW_REDFT10, flags);
    impl_->inverse = fftw_plan_r2r_2d(ny, nx, a.data(), b.data(), FFTW_REDFT01, FFTW_REDFT01, flags);
    if (!impl_->forward || !impl_->inverse) {
        throw Error("FFTW failed to create DCT plans for " + std::to_string(nx) + "x" + std::to_string(ny));
    }
}

SpectralPlan::~SpectralPlan() = default;
SpectralPlan::SpectralPlan(SpectralPlan&&) noexcept = default;
SpectralPlan& SpectralPlan::operator=(SpectralPlan&&) noexcept = default;

ScalarField2D SpectralPlan::symbol(double lambda) const {
    ScalarField2D m(grid_);
    for (int ky = 0; ky < grid_.ny(); ++ky) {
        const double sy = sigma_y_[static_cast<std::size_t>(ky)];
        for (int kx = 0; kx < grid_.nx(); ++kx) {
            const double sx = sigma_x_[static_cast<std::size_t>(kx)];
            m(kx, ky) = -sx * sx - sy * sy - lambda;
        }
    }
    return m;
}

ScalarField2D dct2_forward(const ScalarField2D& f, const SpectralPlan& plan) {
    require_same_grid(f.grid(), plan.grid(), "dct2_forward");
    const auto& impl = *plan.impl_;
    std::vector<double> in(f.values().begin(), f.values().end());
    ScalarField2D out(plan.grid());
    fftw_execute_r2r(impl.forward, in.data(), out.data());
    const int nx = plan.grid().nx();
    for (int ky = 0; ky < plan.grid().ny(); ++ky) {
        const double wy = impl.fwd_y[static_cast<std::size_t>(ky)];
        for (int kx = 0; kx < nx; ++kx) out(kx, ky) *= wy * impl.fwd_x[static_cast<std::size_t>(kx)];
    }
    return out;
}

ScalarField2D dct2_inverse(const ScalarField2D& coeffs, const SpectralPlan& plan) {
    require_same_grid(coeffs.grid(), plan.grid(), "dct2_inverse");
    const auto& impl = *plan.impl_;
    const int nx = plan.grid().nx();
    std::vector<double> in(coeffs.size());
    for (int ky = 0; ky < plan.grid().ny(); ++ky) {
        const double wy = impl.inv_y[static_cast<std::size_t>(ky)];
        for (int kx = 0; kx < nx; ++kx) {
            const std::size_t k = plan.grid().index(kx, ky);
            in[k] = coeffs[k] * wy * impl.inv_x[static_cast<std::size_t>(kx)];
        }
    }
    ScalarField2D out(plan.grid());
    fftw_execute_r2r(impl.inverse, in.data(), out.data());
    return out;
}

ScalarField2D solve_modified_helmholtz(const ScalarField2D& F, double lambda, const SpectralPlan& plan) {
    if (!(lambda > 0.0)) {
        throw InvalidArgument("modified Helmholtz solve needs lambda > 0, got " + std::to_string(lambda));
    }
    ScalarField2D coeffs = dct2_forward(F, plan);
    const auto sx = plan.sigma_x();
    const auto sy = plan.sigma_y();
    for (int ky = 0; ky < plan.grid().ny(); ++ky) {
        const double ey = sy[static_cast<std::size_t>(ky)] * sy[static_cast<std::size_t>(ky)];
        for (int kx = 0; kx < plan.grid().nx(); ++kx) {
            const double ex = sx[static_cast<std::size_t>(kx)] * sx[static_cast<std::size_t>(kx)];
            coeffs(kx, ky) /= -ex - ey - lambda;
        }
    }
    return dct2_inverse(coeffs, plan);
}

} // namespace levelsurf
