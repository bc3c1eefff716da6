#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "helpers.hpp"
#include "levelsurf/krylov.hpp"
#include "levelsurf/operators.hpp"

using namespace levelsurf;
using namespace levelsurf::test;

TEST_SUITE_BEGIN("krylov");

namespace {

LinearOperator shifted_laplacian() {
    return [](const ScalarField2D& x, ScalarField2D& y) {
        y = laplacian(x);
        y *= -1.0;
        y += x;
    };
}

} // namespace

TEST_CASE("pcg with zero right-hand side") {
    const Grid2D g(8, 8);
    const PcgResult r = pcg(shifted_laplacian(), ScalarField2D(g), ScalarField2D(g, 1.0), 1e-10, 100);
    CHECK(r.report.iterations == 0);
    CHECK(r.report.converged);
    CHECK(norm_inf(r.x) == 0.0);
}

TEST_CASE("pcg recovers a manufactured solution") {
    const Grid2D g(16, 16);
    std::mt19937 rng(1);
    const ScalarField2D x_true = random_field(g, rng);
    ScalarField2D rhs(g);
    shifted_laplacian()(x_true, rhs);
    ScalarField2D diag(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            diag(i, j) = 1.0 + (i > 0) + (i < g.nx() - 1) + (j > 0) + (j < g.ny() - 1);
    const PcgResult r = pcg(shifted_laplacian(), rhs, diag, 1e-12, 1000);
    CHECK(r.report.converged);
    CHECK(norm_inf(r.x - x_true) < 1e-8);

    const auto& h = r.report.preconditioned_residual_history;
    REQUIRE(h.size() == static_cast<std::size_t>(r.report.iterations) + 1);
    CHECK(r.report.residual_history.size() == h.size());

    ScalarField2D rhs3 = 3.0 * rhs;
    const PcgResult r3 = pcg(shifted_laplacian(), rhs3, diag, 1e-12, 1000);
    CHECK(norm_inf(r3.x - 3.0 * r.x) < 1e-10);
}

TEST_CASE("pcg rejects bad preconditioners and detects indefinite operators") {
    const Grid2D g(4, 4);
    CHECK_THROWS_AS(pcg(shifted_laplacian(), ScalarField2D(g, 1.0), ScalarField2D(g, 0.0), 1e-8, 10), InvalidArgument);
    const LinearOperator neg = [](const ScalarField2D& x, ScalarField2D& y) { y = -1.0 * x; };
    CHECK_THROWS_AS(pcg(neg, ScalarField2D(g, 1.0), ScalarField2D(g, 1.0), 1e-8, 10), SolverBreakdown);
}

TEST_CASE("I-subproblem operator: diagonal, dense assembly and SPD") {
    const Grid2D g(6, 6);
    SUBCASE("constant shift") {
        const double c_P = 2.0;
        const IOperator op = build_i_operator(ScalarField2D(g, c_P / 2.0), c_P);
        CHECK(op.diagonal(2, 3) == doctest::Approx(4.0 + 1.0));
        CHECK(op.diagonal(0, 0) == doctest::Approx(2.0 + 1.0));
    }
    SUBCASE("assembly and eigenvalues") {
        ScalarField2D theta(g);
        theta(4, 1) = 3.0;
        const double c_P = 1.5;
        const IOperator op = build_i_operator(theta, c_P);
        const Eigen::MatrixXd A = assemble(g, [&](const ScalarField2D& x) {
            ScalarField2D y(g);
            op.apply(x, y);
            return y;
        });
        Eigen::MatrixXd ref = -neumann_laplacian(g);
        ref(g.index(4, 1), g.index(4, 1)) += 2.0 * 3.0 / c_P;
        CHECK((A - ref).cwiseAbs().maxCoeff() < 1e-14);
        for (std::size_t k = 0; k < g.size(); ++k) CHECK(op.diagonal[k] == doctest::Approx(A(k, k)));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
    SUBCASE("no fidelity anywhere is singular") {
        CHECK_THROWS_AS(build_i_operator(ScalarField2D(g), 1.0), SingularOperator);
    }
}

TEST_CASE("Jacobi preconditioning reduces PCG iterations on a 64x64 I-subproblem") {
    const Grid2D g(64, 64);
    ScalarField2D theta(g);
    for (int i = 0; i < g.nx(); ++i) {
        theta(i, 16) = 1e5;
        theta(i, 47) = 1e5;
    }
    const IOperator op = build_i_operator(theta, 1.0);
    std::mt19937 rng(4);
    const ScalarField2D rhs = random_field(g, rng);
    const PcgResult jac = pcg(op.apply, rhs, op.diagonal, 1e-8, 20000);
    const PcgResult plain = pcg(op.apply, rhs, ScalarField2D(g, 1.0), 1e-8, 20000);
    CHECK(jac.report.converged);
    CHECK(plain.report.converged);
    CHECK(jac.report.iterations < plain.report.iterations);

    const auto& h = jac.report.preconditioned_residual_history;
    int increases = 0;
    for (std::size_t k = 1; k < h.size(); ++k) increases += h[k] > h[k - 1] * (1.0 + 1e-12);
    MESSAGE("preconditioned residual increases: " << increases << " of " << h.size() - 1);
}

TEST_SUITE_END();
