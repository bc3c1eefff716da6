#include "levelsurf/onedim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "levelsurf/error.hpp"

namespace levelsurf {

std::vector<double> forward_difference(std::span<const double> u) {
    std::vector<double> d(u.size(), 0.0);
    for (std::size_t i = 0; i + 1 < u.size(); ++i) d[i] = u[i + 1] - u[i];
    return d;
}

std::vector<double> difference_power(std::span<const double> u, int k) {
    std::vector<double> d(u.begin(), u.end());
    for (int r = 0; r < k && !d.empty(); ++r) {
        for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = d[i + 1] - d[i];
        d.pop_back();
    }
    return d;
}

namespace {

void check_profile(const Profile1D& p, std::span<const OrderTerm> terms) {
    if (p.n < 2) throw InvalidArgument("1D profile needs at least two samples");
    if (static_cast<int>(p.values.size()) != p.n) throw InvalidArgument("1D profile: values size differs from n");
    if (p.heights.empty()) throw InvalidArgument("1D profile: no height samples");
    if (terms.empty()) throw InvalidArgument("1D solve: no regularizer terms");
    for (const OrderTerm& t : terms) {
        if (t.order < 1 || t.order > 5) throw InvalidArgument("1D order must be in 1..5, got " + std::to_string(t.order));
        if (!(t.weight >= 0.0)) throw InvalidArgument("1D regularizer weight must be non-negative");
        if (p.n < 2 * t.order + 1) {
            throw InvalidArgument("1D profile too short: order " + std::to_string(t.order) + " needs n >= " +
                                  std::to_string(2 * t.order + 1));
        }
    }
    for (const auto& h : p.heights) {
        if (h.index < 0 || h.index >= p.n) throw InvalidArgument("1D height sample index out of range");
        if (!(h.theta > 0.0)) throw InvalidArgument("1D height sample theta must be positive");
    }
    for (const auto& v : p.vectors) {
        if (v.index < 0 || v.index >= p.n) throw InvalidArgument("1D vector sample index out of range");
        if (v.sign != 1 && v.sign != -1) throw InvalidArgument("1D vector sample sign must be +1 or -1");
    }
}

// (n - k) x n matrix of the k-th valid difference.
Eigen::MatrixXd difference_matrix(int n, int k) {
    Eigen::MatrixXd Dk = Eigen::MatrixXd::Identity(n, n);
    for (int r = 0; r < k; ++r) {
        const int m = static_cast<int>(Dk.rows());
        Dk = (Dk.bottomRows(m - 1) - Dk.topRows(m - 1)).eval();
    }
    return Dk;
}

// Padded first difference, the stencil of the matching term.
Eigen::MatrixXd padded_difference(int n) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        D(i, i) = -1.0;
        D(i, i + 1) = 1.0;
    }
    return D;
}

} // namespace

double energy_1d(std::span<const double> I, const Profile1D& p, std::span<const OrderTerm> terms) {
    if (static_cast<int>(I.size()) != p.n) throw InvalidArgument("energy_1d: signal length differs from profile");
    double e = 0.0;
    for (const OrderTerm& t : terms) {
        for (double d : difference_power(I, t.order)) e += t.weight * std::abs(d);
    }
    const std::vector<double> d1 = forward_difference(I);
    for (const auto& v : p.vectors) e -= v.alpha * v.sign * d1[v.index];
    for (const auto& h : p.heights) {
        const double r = I[h.index] - h.value;
        e += h.theta * r * r;
    }
    return e;
}

Profile1D solve_1d(const Profile1D& profile, std::span<const OrderTerm> terms, const Admm1DSettings& settings,
                   Solve1DReport* report) {
    check_profile(profile, terms);
    if (!(settings.c > 0.0)) throw InvalidArgument("1D ADMM penalty must be positive");
    const int n = profile.n;
    const double c = settings.c;

    std::vector<Eigen::MatrixXd> Dk;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (const OrderTerm& t : terms) {
        Dk.push_back(difference_matrix(n, t.order));
        A += c * Dk.back().transpose() * Dk.back();
    }
    Eigen::VectorXd b0 = Eigen::VectorXd::Zero(n);
    for (const auto& h : profile.heights) {
        A(h.index, h.index) += 2.0 * h.theta;
        b0(h.index) += 2.0 * h.theta * h.value;
    }
    // Linear matching term: -<a, D I> contributes D^T a to the right-hand side.
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    for (const auto& v : profile.vectors) a(v.index) += v.alpha * v.sign;
    b0 += padded_difference(n).transpose() * a;

    // The kernel of sum D^T D is the polynomials of degree below the lowest
    // order; k distinct samples determine them.
    int lowest = terms.front().order;
    for (const OrderTerm& t : terms) lowest = std::min(lowest, t.order);
    std::vector<int> sampled;
    for (const auto& h : profile.heights) sampled.push_back(h.index);
    std::sort(sampled.begin(), sampled.end());
    const auto distinct = std::unique(sampled.begin(), sampled.end()) - sampled.begin();
    const Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (distinct < lowest || llt.info() != Eigen::Success) {
        throw SingularOperator("1D system is singular: the height samples do not pin down the polynomials that "
                               "D^k annihilates");
    }

    const std::size_t nt = terms.size();
    std::vector<Eigen::VectorXd> W;
    std::vector<Eigen::VectorXd> U;
    for (const Eigen::MatrixXd& D : Dk) {
        W.emplace_back(Eigen::VectorXd::Zero(D.rows()));
        U.emplace_back(Eigen::VectorXd::Zero(D.rows()));
    }
    Eigen::VectorXd I = Eigen::VectorXd::Zero(n);
    Solve1DReport rep;
    for (int it = 1; it <= settings.max_iter; ++it) {
        Eigen::VectorXd b = b0;
        for (std::size_t t = 0; t < nt; ++t) b += c * Dk[t].transpose() * (W[t] - U[t]);
        I = llt.solve(b);
        double primal = 0.0;
        double dual = 0.0;
        for (std::size_t t = 0; t < nt; ++t) {
            const Eigen::VectorXd DI = Dk[t] * I;
            const Eigen::VectorXd V = DI + U[t];
            const double thr = terms[t].weight / c;
            Eigen::VectorXd Wn(V.size());
            for (Eigen::Index i = 0; i < V.size(); ++i) Wn(i) = std::copysign(std::max(0.0, std::abs(V(i)) - thr), V(i));
            dual += (c * Dk[t].transpose() * (Wn - W[t])).squaredNorm();
            W[t] = Wn;
            U[t] += DI - W[t];
            primal += (DI - W[t]).squaredNorm();
        }
        rep.iterations = it;
        const double scale = settings.tol * (1.0 + I.norm());
        if (std::sqrt(primal) < scale && std::sqrt(dual) < scale) {
            rep.converged = true;
            break;
        }
    }

    Profile1D out = profile;
    out.values.assign(I.data(), I.data() + n);
    rep.energy = energy_1d(out.values, out, terms);
    if (report) *report = rep;
    return out;
}

Profile1D solve_1d_korder(const Profile1D& profile, int k, double g, double alpha, double theta,
                          const Admm1DSettings& settings, Solve1DReport* report) {
    Profile1D p = profile;
    for (auto& h : p.heights) h.theta = theta;
    for (auto& v : p.vectors) v.alpha = alpha;
    const OrderTerm term{k, g};
    return solve_1d(p, std::span<const OrderTerm>(&term, 1), settings, report);
}

int second_difference_sign_changes(std::span<const double> u, double rel_tol) {
    const std::vector<double> d2 = difference_power(u, 2);
    double mx = 0.0;
    for (double v : d2) mx = std::max(mx, std::abs(v));
    const double cut = rel_tol * mx;
    int changes = 0;
    int last = 0;
    for (double v : d2) {
        if (std::abs(v) <= cut) continue;
        const int s = v > 0.0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

} // namespace levelsurf
