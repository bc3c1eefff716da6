#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "levelsurf/onedim.hpp"
#include "levelsurf/synth.hpp"

using namespace levelsurf;

TEST_SUITE_BEGIN("onedim");

namespace {

// (D^k u)_i = sum_m (-1)^(k-m) C(k, m) u_(i+m), i < n - k.
Eigen::MatrixXd binomial_difference(int n, int k) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n - k, n);
    for (int i = 0; i < n - k; ++i) {
        double c = 1.0;
        for (int m = 0; m <= k; ++m) {
            D(i, i + m) = ((k - m) % 2 ? -1.0 : 1.0) * c;
            c = c * (k - m) / (m + 1);
        }
    }
    return D;
}

struct Problem {
    int n;
    int k;
    double w;
    Eigen::MatrixXd Dk;
    Eigen::VectorXd theta;
    Eigen::VectorXd f;
    Eigen::VectorXd a; ///< alpha * sign at the vector sample, acting on the padded first difference
};

Problem make_problem(const Profile1D& p, int k, double w) {
    Problem q{p.n, k, w, binomial_difference(p.n, k), Eigen::VectorXd::Zero(p.n), Eigen::VectorXd::Zero(p.n),
              Eigen::VectorXd::Zero(p.n)};
    for (const auto& h : p.heights) {
        q.theta(h.index) = h.theta;
        q.f(h.index) = h.value;
    }
    for (const auto& v : p.vectors) q.a(v.index) = v.alpha * v.sign;
    return q;
}

double first_diff_dot(const Problem& q, const Eigen::VectorXd& u) {
    double s = 0.0;
    for (int i = 0; i + 1 < q.n; ++i) s += q.a(i) * (u(i + 1) - u(i));
    return s;
}

double exact_energy(const Problem& q, const Eigen::VectorXd& u) {
    const Eigen::VectorXd r = u - q.f;
    return q.w * (q.Dk * u).cwiseAbs().sum() - first_diff_dot(q, u) + (q.theta.array() * r.array().square()).sum();
}

// Minimizes the energy with |x| replaced by sqrt(x^2 + mu^2), by damped Newton
// steps along a decreasing mu schedule.
Eigen::VectorXd newton_oracle(const Problem& q, Eigen::VectorXd u) {
    Eigen::MatrixXd D1 = Eigen::MatrixXd::Zero(q.n, q.n);
    for (int i = 0; i + 1 < q.n; ++i) {
        D1(i, i) = -1.0;
        D1(i, i + 1) = 1.0;
    }
    const Eigen::VectorXd lin = D1.transpose() * q.a;
    for (double mu = 1.0; mu >= 1e-9; mu *= 0.1) {
        auto f = [&](const Eigen::VectorXd& x) {
            const Eigen::VectorXd d = q.Dk * x;
            const Eigen::VectorXd r = x - q.f;
            return q.w * (d.array().square() + mu * mu).sqrt().sum() - lin.dot(x) +
                   (q.theta.array() * r.array().square()).sum();
        };
        for (int it = 0; it < 200; ++it) {
            const Eigen::VectorXd d = q.Dk * u;
            const Eigen::ArrayXd s = (d.array().square() + mu * mu).sqrt();
            const Eigen::VectorXd grad = q.w * q.Dk.transpose() * (d.array() / s).matrix() - lin +
                                         2.0 * (q.theta.array() * (u - q.f).array()).matrix();
            const Eigen::VectorXd curv = (q.w * mu * mu / s.cube()).matrix();
            Eigen::MatrixXd H = q.Dk.transpose() * curv.asDiagonal() * q.Dk;
            H.diagonal() += 2.0 * q.theta;
            H.diagonal().array() += 1e-14 * (1.0 + H.diagonal().cwiseAbs().maxCoeff());
            const Eigen::VectorXd step = H.ldlt().solve(-grad);
            double t = 1.0;
            const double f0 = f(u);
            while (t > 1e-12 && f(u + t * step) > f0 + 1e-4 * t * grad.dot(step)) t *= 0.5;
            u += t * step;
            if (std::abs(grad.dot(step)) < 1e-18) break;
        }
    }
    return u;
}

Profile1D random_profile(int n, std::mt19937& rng, double alpha) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Profile1D p;
    p.n = n;
    p.values.assign(n, 0.0);
    for (int i = 0; i < n - 1; i += 5) p.heights.push_back({i, 2.0 * u(rng), 10.0});
    p.heights.push_back({n - 1, u(rng), 10.0});
    p.vectors.push_back({n / 3, 1, alpha});
    p.vectors.push_back({2 * n / 3, -1, alpha});
    return p;
}

} // namespace

TEST_CASE("difference operators") {
    const std::vector<double> sq = {0, 1, 4, 9, 16, 25};
    const auto d1 = forward_difference(sq);
    CHECK(d1 == std::vector<double>{1, 3, 5, 7, 9, 0});
    const auto d2 = difference_power(sq, 2);
    CHECK(d2 == std::vector<double>{2, 2, 2, 2});
    CHECK(difference_power(sq, 3) == std::vector<double>{0, 0, 0});
    const Eigen::MatrixXd B = binomial_difference(6, 3);
    const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(sq.data(), 6);
    CHECK((B * v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("first order with constant data gives a constant") {
    Profile1D p;
    p.n = 30;
    p.values.assign(30, 0.0);
    for (int i : {2, 11, 27}) p.heights.push_back({i, 1.5, 10.0});
    const Profile1D s = solve_1d_korder(p, 1, 1.0, 0.0, 10.0);
    for (double v : s.values) CHECK(v == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("second order with two samples gives the line through them") {
    Profile1D p;
    p.n = 40;
    p.values.assign(40, 0.0);
    p.heights = {{8, 0.0, 10.0}, {30, 2.2, 10.0}};
    const Profile1D s = solve_1d_korder(p, 2, 1.0, 0.0, 10.0);
    for (int i = 0; i < 40; ++i) CHECK(std::abs(s.values[i] - 0.1 * (i - 8)) <= 1e-3);
}

TEST_CASE("order study: higher orders oscillate more") {
    const Signal1D sig = make_order_study_signal(64);
    const Profile1D s2 = solve_1d_korder(sig.profile, 2, 1.0, 1.0, 10.0);
    const Profile1D s3 = solve_1d_korder(sig.profile, 3, 1.0, 1.0, 10.0);
    const int c2 = second_difference_sign_changes(s2.values);
    const int c3 = second_difference_sign_changes(s3.values);
    MESSAGE("second-difference sign changes: k=2 " << c2 << ", k=3 " << c3);
    CHECK(c3 > c2);
}

TEST_CASE("ADMM agrees with a smoothed Newton oracle") {
    std::mt19937 rng(12);
    for (int k : {1, 2}) {
        for (int n : {16, 32}) {
            const Profile1D p = random_profile(n, rng, 0.3);
            Solve1DReport rep;
            const OrderTerm terms[] = {{k, 1.0}};
            const Profile1D s = solve_1d(p, terms, {}, &rep);
            CHECK(rep.converged);
            const Problem q = make_problem(p, k, 1.0);
            const Eigen::VectorXd admm = Eigen::Map<const Eigen::VectorXd>(s.values.data(), n);
            const double e_admm = exact_energy(q, admm);
            CHECK(energy_1d(s.values, p, terms) == doctest::Approx(e_admm).epsilon(1e-12));
            std::uniform_real_distribution<double> u(-3.0, 3.0);
            for (int start = 0; start < 10; ++start) {
                Eigen::VectorXd x0(n);
                for (int i = 0; i < n; ++i) x0(i) = u(rng);
                const double e_ref = exact_energy(q, newton_oracle(q, x0));
                CHECK(e_admm <= e_ref + 1e-4 * std::abs(e_ref) + 1e-9);
                CHECK(e_ref <= e_admm + 1e-4 * std::abs(e_admm) + 1e-9);
            }
        }
    }
}

TEST_CASE("solution beats simple competitors and is shift equivariant") {
    std::mt19937 rng(19);
    const Profile1D p = random_profile(32, rng, 0.3);
    const OrderTerm terms[] = {{1, 0.5}, {2, 1.0}};
    const Profile1D s = solve_1d(p, terms);
    const double e = energy_1d(s.values, p, terms);
    CHECK(e <= energy_1d(std::vector<double>(32, 0.0), p, terms) + 1e-9);
    std::vector<double> interp(32, 0.0);
    for (std::size_t h = 0; h + 1 < p.heights.size(); ++h) {
        const auto& a = p.heights[h];
        const auto& b = p.heights[h + 1];
        for (int i = a.index; i <= b.index; ++i)
            interp[i] = a.value + (b.value - a.value) * (i - a.index) / double(b.index - a.index);
    }
    CHECK(e <= energy_1d(interp, p, terms) + 1e-9);

    Profile1D shifted = p;
    for (auto& h : shifted.heights) h.value += 4.0;
    const Profile1D ss = solve_1d(shifted, terms);
    for (int i = 0; i < 32; ++i) CHECK(ss.values[i] == doctest::Approx(s.values[i] + 4.0).epsilon(1e-6));
}

TEST_CASE("solve_1d argument checks") {
    Profile1D p;
    p.n = 20;
    p.values.assign(20, 0.0);
    p.heights = {{3, 1.0, 1.0}};
    const OrderTerm bad_order[] = {{6, 1.0}};
    CHECK_THROWS_AS(solve_1d(p, bad_order), InvalidArgument);
    const OrderTerm bad_weight[] = {{1, -1.0}};
    CHECK_THROWS_AS(solve_1d(p, bad_weight), InvalidArgument);
    const OrderTerm second[] = {{2, 1.0}};
    CHECK_THROWS_AS(solve_1d(p, second), SingularOperator);
    Profile1D empty = p;
    empty.heights.clear();
    CHECK_THROWS_AS(solve_1d(empty, second), InvalidArgument);
    Profile1D out = p;
    out.heights.push_back({25, 0.0, 1.0});
    CHECK_THROWS_AS(solve_1d(out, second), InvalidArgument);
    Profile1D tiny = p;
    tiny.n = 6;
    tiny.values.assign(6, 0.0);
    const OrderTerm third[] = {{3, 1.0}};
    CHECK_THROWS_AS(solve_1d(tiny, third), InvalidArgument);
}

TEST_SUITE_END();
