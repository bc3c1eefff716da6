#pragma once

#include <span>
#include <vector>

namespace levelsurf {

struct HeightSample1D {
    int index = 0;
    double value = 0.0;
    double theta = 1.0;
};

struct VectorSample1D {
    int index = 0;
    int sign = 1; ///< +1 points towards increasing index
    double alpha = 1.0;
};

/// A 1D signal with sparse height and direction data.
struct Profile1D {
    int n = 0;
    std::vector<double> values;
    std::vector<HeightSample1D> heights;
    std::vector<VectorSample1D> vectors;
};

/// One regularizer weight * |D^order I|_1.
struct OrderTerm {
    int order = 1;
    double weight = 1.0;
};

struct Admm1DSettings {
    double c = 1.0;
    int max_iter = 20000;
    /// Stops when primal and dual residuals both fall below tol * (1 + ||I||).
    double tol = 1e-11;
};

struct Solve1DReport {
    int iterations = 0;
    bool converged = false;
    double energy = 0.0;
};

/// D: (D u)_i = u_{i+1} - u_i for i < n - 1, 0 at the last entry.
std::vector<double> forward_difference(std::span<const double> u);
/// k-th difference over its valid range: n - k entries, no boundary padding,
/// so polynomials of degree below k cost nothing.
std::vector<double> difference_power(std::span<const double> u, int k);

/// sum_t w_t |D^{k_t} I|_1 - sum_Gamma alpha s (D I) + sum_Sigma theta (I - f)^2,
/// with D^k from difference_power and the padded D in the matching term.
double energy_1d(std::span<const double> I, const Profile1D& profile, std::span<const OrderTerm> terms);

/// Minimizes energy_1d by ADMM with W_t = D^{k_t} I split off (soft
/// thresholding by w_t / c) and a dense SPD solve for I, factorized once.
/// The returned profile carries the data of the input and the solution in
/// values. Throws InvalidArgument for an order outside 1..5, a negative
/// weight, n < 2 k + 1, an index out of range, or no height samples, and
/// SingularOperator when the height samples leave a polynomial of degree
/// below k undetermined.
Profile1D solve_1d(const Profile1D& profile, std::span<const OrderTerm> terms, const Admm1DSettings& settings = {},
                   Solve1DReport* report = nullptr);

/// Single-regularizer model g |D^k I|_1 with every sample's alpha and theta
/// replaced by the given values.
Profile1D solve_1d_korder(const Profile1D& profile, int k, double g, double alpha, double theta,
                          const Admm1DSettings& settings = {}, Solve1DReport* report = nullptr);

/// Sign changes of D^2 u, ignoring entries with |.| <= rel_tol * max|D^2 u|.
int second_difference_sign_changes(std::span<const double> u, double rel_tol = 1e-6);

} // namespace levelsurf
