#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "levelsurf/operators.hpp"
#include "levelsurf/spectral.hpp"

using namespace levelsurf;
using namespace levelsurf::test;

TEST_SUITE_BEGIN("spectral");

TEST_CASE("DCT of a constant has only the DC coefficient") {
    const Grid2D g(8, 8);
    const SpectralPlan plan(g);
    const ScalarField2D c = dct2_forward(ScalarField2D(g, 1.5), plan);
    CHECK(c(0, 0) == doctest::Approx(1.5 * 8));
    double rest = 0.0;
    for (std::size_t k = 1; k < c.size(); ++k) rest = std::max(rest, std::abs(c[k]));
    CHECK(rest < 1e-12);
}

TEST_CASE("DCT round trip and Parseval") {
    std::mt19937 rng(3);
    for (const Grid2D g : {Grid2D(16, 16), Grid2D(7, 12)}) {
        const SpectralPlan plan(g);
        const ScalarField2D f = random_field(g, rng);
        const ScalarField2D c = dct2_forward(f, plan);
        CHECK(norm_inf(dct2_inverse(c, plan) - f) < 1e-12);
        CHECK(std::abs(norm2(c) - norm2(f)) < 1e-12);
    }
}

TEST_CASE("DCT coefficients match the cosine sum definition") {
    const Grid2D g(5, 4);
    const SpectralPlan plan(g);
    std::mt19937 rng(8);
    const ScalarField2D f = random_field(g, rng);
    const ScalarField2D c = dct2_forward(f, plan);
    auto s = [](int k, int n) { return k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n); };
    for (int ky = 0; ky < g.ny(); ++ky) {
        for (int kx = 0; kx < g.nx(); ++kx) {
            double sum = 0.0;
            for (int j = 0; j < g.ny(); ++j)
                for (int i = 0; i < g.nx(); ++i)
                    sum += f(i, j) * std::cos(std::numbers::pi * kx * (i + 0.5) / g.nx()) *
                           std::cos(std::numbers::pi * ky * (j + 0.5) / g.ny());
            CHECK(c(kx, ky) == doctest::Approx(s(kx, g.nx()) * s(ky, g.ny()) * sum).epsilon(1e-12));
        }
    }
}

TEST_CASE("spectral symbol on a 2x2 grid") {
    const SpectralPlan plan(Grid2D(2, 2));
    CHECK(plan.sigma_x()[1] == doctest::Approx(std::sqrt(2.0)));
    const double lambda = 0.7;
    const ScalarField2D M = plan.symbol(lambda);
    CHECK(M(0, 0) == doctest::Approx(-lambda));
    CHECK(M(1, 0) == doctest::Approx(-(2.0 + lambda)));
    CHECK(M(0, 1) == doctest::Approx(-(2.0 + lambda)));
    CHECK(M(1, 1) == doctest::Approx(-(4.0 + lambda)));
}

TEST_CASE("modified Helmholtz solve") {
    SUBCASE("constant right-hand side") {
        const Grid2D g(10, 6);
        const SpectralPlan plan(g);
        const ScalarField2D u = solve_modified_helmholtz(ScalarField2D(g, -0.25), 0.25, plan);
        CHECK(norm_inf(u - ScalarField2D(g, 1.0)) < 1e-12);
    }
    SUBCASE("dense Neumann oracle on 8x8") {
        const Grid2D g(8, 8);
        const SpectralPlan plan(g);
        std::mt19937 rng(5);
        const ScalarField2D F = random_field(g, rng);
        for (double lambda : {1e-3, 0.5, 20.0}) {
            const Eigen::MatrixXd A =
                neumann_laplacian(g) - lambda * Eigen::MatrixXd::Identity(g.size(), g.size());
            const Eigen::VectorXd ref = A.partialPivLu().solve(to_vec(F));
            const ScalarField2D u = solve_modified_helmholtz(F, lambda, plan);
            CHECK((to_vec(u) - ref).norm() / ref.norm() <= 1e-10);
        }
    }
    SUBCASE("residual, linearity and timing on 256x256") {
        const Grid2D g(256, 256);
        const SpectralPlan plan(g);
        std::mt19937 rng(9);
        const ScalarField2D F1 = random_field(g, rng);
        const ScalarField2D F2 = random_field(g, rng);
        const double lambda = 0.05;
        const auto t0 = std::chrono::steady_clock::now();
        const ScalarField2D u1 = solve_modified_helmholtz(F1, lambda, plan);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        CHECK(secs < 1.0);
        ScalarField2D r = laplacian(u1);
        r.axpy(-lambda, u1);
        CHECK(norm2(r - F1) / norm2(F1) <= 1e-8);

        const ScalarField2D u2 = solve_modified_helmholtz(F2, lambda, plan);
        ScalarField2D mix = 2.0 * F1;
        mix.axpy(-3.0, F2);
        ScalarField2D expect = 2.0 * u1;
        expect.axpy(-3.0, u2);
        CHECK(norm_inf(solve_modified_helmholtz(mix, lambda, plan) - expect) < 1e-12 * (1.0 + norm_inf(expect)));
    }
    SUBCASE("reflection symmetry is preserved") {
        const Grid2D g(12, 9);
        const SpectralPlan plan(g);
        std::mt19937 rng(2);
        ScalarField2D F = random_field(g, rng);
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx() / 2; ++i) F(g.nx() - 1 - i, j) = F(i, j);
        const ScalarField2D u = solve_modified_helmholtz(F, 0.3, plan);
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i) CHECK(std::abs(u(i, j) - u(g.nx() - 1 - i, j)) < 1e-12);
    }
    SUBCASE("non-positive lambda is rejected") {
        const SpectralPlan plan(Grid2D(4, 4));
        CHECK_THROWS_AS(solve_modified_helmholtz(ScalarField2D(Grid2D(4, 4)), 0.0, plan), InvalidArgument);
    }
}

TEST_SUITE_END();
