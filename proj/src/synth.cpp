#include "levelsurf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace levelsurf {

namespace {

constexpr double kTheta = 1e5;

void check_n(int n) {
    if (n < 16) throw InvalidArgument("synthetic cases need n >= 16, got " + std::to_string(n));
}

SyntheticCase blank_case(std::string name, int n) {
    const Grid2D grid(n, n);
    SyntheticCase c{std::move(name),
                    ScalarField2D(grid),
                    VectorField2D(grid),
                    {},
                    {},
                    RegularizerWeights::constant(grid, 1.0, 0.0),
                    ScalarField2D(grid),
                    ScalarField2D(grid, kTheta),
                    SolverConfig{},
                    {}};
    c.config.c_Q = 20.0;
    c.provenance.push_back("theta = 1e5: fidelity weight of the synthetic experiments");
    c.provenance.push_back("c_Q = 20, c_P = c_E = 1: penalty setting used for the second real map; "
                           "c_Q = 1 converges too slowly at this scale");
    return c;
}

/// Closed counter-clockwise circle sampled at most half a cell apart; normals point inward.
LevelLine circle_line(double cx, double cy, double r, double level) {
    const int m = std::max(8, static_cast<int>(std::ceil(2.0 * std::numbers::pi * r / 0.5)));
    LevelLine line;
    line.level = level;
    line.closed = true;
    for (int k = 0; k < m; ++k) {
        const double t = 2.0 * std::numbers::pi * k / m;
        line.points.push_back({cx + r * std::cos(t), cy + r * std::sin(t)});
    }
    return normals_from_level_line(std::move(line));
}

/// Closed counter-clockwise square of half-size s; normals point inward.
LevelLine square_line(double c, double s, double level) {
    const int m = std::max(2, static_cast<int>(std::ceil(2.0 * s / 0.5)));
    const Point2 corners[4] = {{c - s, c - s}, {c + s, c - s}, {c + s, c + s}, {c - s, c + s}};
    LevelLine line;
    line.level = level;
    line.closed = true;
    for (int side = 0; side < 4; ++side) {
        const Point2 a = corners[side];
        const Point2 b = corners[(side + 1) % 4];
        for (int k = 0; k < m; ++k) {
            const double t = static_cast<double>(k) / m;
            line.points.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
    }
    return normals_from_level_line(std::move(line));
}

/// Writes `value` into alpha at the nearest cell of every point of `line` not yet painted.
void paint_alpha(ScalarField2D& alpha, Mask2D& painted, const LevelLine& line, double value) {
    const Grid2D& grid = alpha.grid();
    for (const Point2& p : line.points) {
        const int i = static_cast<int>(std::lround(p.x));
        const int j = static_cast<int>(std::lround(p.y));
        if (!grid.contains(i, j) || painted(i, j)) continue;
        painted.set(i, j);
        alpha(i, j) = value;
    }
}

void radial_uphill(SyntheticCase& c, double cx, double cy, double R) {
    const Grid2D& grid = c.ground_truth.grid();
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) {
            const double dx = i - cx;
            const double dy = j - cy;
            const double r = std::hypot(dx, dy);
            if (r > 0.0 && r < R) {
                c.uphill.x(i, j) = -dx / r;
                c.uphill.y(i, j) = -dy / r;
            }
        }
    }
}

} // namespace

Rasterization SyntheticCase::rasterize() const {
    return rasterize_constraints(lines, theta, alpha, ground_truth.grid());
}

SyntheticCase make_ramp_case(int n) {
    check_n(n);
    SyntheticCase c = blank_case("ramp", n);
    const int x0 = static_cast<int>(std::lround(n / 4.0));
    const int x1 = n - 1 - x0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            c.ground_truth(i, j) = static_cast<double>(i - x0) / (x1 - x0);
            c.uphill.x(i, j) = 1.0;
        }
    }
    c.level_values = {0.0, 1.0};
    for (auto [x, level] : {std::pair{x0, 0.0}, std::pair{x1, 1.0}}) {
        LevelLine line;
        line.level = level;
        for (int j = n - 1; j >= 0; --j) line.points.push_back({static_cast<double>(x), static_cast<double>(j)});
        c.lines.push_back(normals_from_level_line(std::move(line)));
    }
    c.provenance.push_back("g = 1, h = 0: parallel level line experiment");
    c.provenance.push_back("alpha = 0: isotropic reference for the parallel level lines");
    return c;
}

SyntheticCase make_cone_case(int n, double alpha) {
    check_n(n);
    SyntheticCase c = blank_case("cone", n);
    const double ctr = (n - 1) / 2.0;
    const double R = 0.4 * (n - 1);
    const double H = R;
    const Grid2D& grid = c.ground_truth.grid();
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            c.ground_truth(i, j) = H * std::max(0.0, 1.0 - std::hypot(i - ctr, j - ctr) / R);
        }
    }
    radial_uphill(c, ctr, ctr, R);

    LevelLine apex;
    if (n % 2 == 1) {
        apex.points = {{ctr, ctr}};
    } else {
        apex.points = {{ctr - 0.5, ctr - 0.5}, {ctr + 0.5, ctr - 0.5}, {ctr + 0.5, ctr + 0.5}, {ctr - 0.5, ctr + 0.5}};
        apex.closed = true;
    }
    apex.level = c.ground_truth(static_cast<int>(std::lround(apex.points[0].x)),
                                static_cast<int>(std::lround(apex.points[0].y)));
    LevelLine base = circle_line(ctr, ctr, R, 0.0);
    c.level_values = {0.0, apex.level};
    Mask2D painted(grid);
    paint_alpha(c.alpha, painted, base, alpha);
    c.lines = {std::move(base), std::move(apex)};
    c.provenance.push_back("g = 1, h = 0: cone experiment, second-order regularizer only");
    c.provenance.push_back("alpha on the base circle, swept over {-1, 0, 1, 2} in the cone experiment");
    c.provenance.push_back("data: base level line with normals plus the apex height");
    return c;
}

SyntheticCase make_semisphere_case(int n, int contour_count) {
    check_n(n);
    if (contour_count != 1 && contour_count != 2 && contour_count != 4 && contour_count != 8) {
        throw InvalidArgument("semisphere contour_count must be 1, 2, 4 or 8, got " + std::to_string(contour_count));
    }
    SyntheticCase c = blank_case("semisphere", n);
    const double ctr = (n - 1) / 2.0;
    const double R = 0.4 * (n - 1);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double r = std::hypot(i - ctr, j - ctr);
            c.ground_truth(i, j) = r < R ? std::sqrt(R * R - r * r) : 0.0;
        }
    }
    radial_uphill(c, ctr, ctr, R);
    Mask2D painted(c.ground_truth.grid());
    for (int k = 0; k < contour_count; ++k) {
        const double z = R * k / contour_count;
        LevelLine line = circle_line(ctr, ctr, std::sqrt(R * R - z * z), z);
        paint_alpha(c.alpha, painted, line, k == 0 ? 2.85 : 0.5);
        c.level_values.push_back(z);
        c.lines.push_back(std::move(line));
    }
    c.provenance.push_back("g = 1, h = 0: semisphere experiment");
    c.provenance.push_back("alpha = 0.5 on inner contours, 2.85 on the largest: semisphere experiment");
    return c;
}

SyntheticCase make_pyramid_case(int n) {
    check_n(n);
    SyntheticCase c = blank_case("pyramid", n);
    const double ctr = (n - 1) / 2.0;
    const double L = (n - 1) / 2.0;
    const double d_foot = 0.9 * L;
    const double d_terrace = 0.65 * L;
    const double d_top_foot = 0.45 * L;
    const double d_top_edge = 0.25 * L;
    const double h1 = d_foot - d_terrace;
    const double h2 = h1 + (d_top_foot - d_top_edge);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double dx = i - ctr;
            const double dy = j - ctr;
            const double d = std::max(std::abs(dx), std::abs(dy));
            double z = 0.0;
            if (d >= d_foot) {
                z = 0.0;
            } else if (d >= d_terrace) {
                z = d_foot - d;
            } else if (d >= d_top_foot) {
                z = h1;
            } else if (d >= d_top_edge) {
                z = h1 + (d_top_foot - d);
            } else {
                z = h2;
            }
            c.ground_truth(i, j) = z;
            if (d > 0.0) {
                const double ux = std::abs(dx) >= std::abs(dy) ? -std::copysign(1.0, dx) : 0.0;
                const double uy = std::abs(dy) >= std::abs(dx) ? -std::copysign(1.0, dy) : 0.0;
                const double len = std::hypot(ux, uy);
                c.uphill.x(i, j) = ux / len;
                c.uphill.y(i, j) = uy / len;
            }
        }
    }
    // Regions follow the forward differences of the ground truth, the stencil
    // the regularizers act on: a cell whose forward step climbs a wall gets
    // that wall's weights even when the cell itself lies on a flat.
    const ScalarField2D& gt = c.ground_truth;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double z = gt(i, j);
            double zn = z;
            if (i + 1 < n && gt(i + 1, j) != z) zn = gt(i + 1, j);
            if (j + 1 < n && gt(i, j + 1) != z) zn = gt(i, j + 1);
            if (zn == z) {
                c.weights.g(i, j) = 0.0;
                c.weights.h(i, j) = 10.0;
            } else {
                c.weights.g(i, j) = 0.5 * (z + zn) < h1 ? 10.0 : 1.0;
                c.weights.h(i, j) = 0.0;
            }
        }
    }
    c.level_values = {0.0, h1, h2};
    c.lines = {square_line(ctr, d_foot, 0.0), square_line(ctr, d_top_foot, h1), square_line(ctr, d_top_edge, h2)};
    Mask2D painted(c.ground_truth.grid());
    paint_alpha(c.alpha, painted, c.lines[1], 11.0);
    paint_alpha(c.alpha, painted, c.lines[0], 1.0);
    paint_alpha(c.alpha, painted, c.lines[2], 1.0);
    c.provenance.push_back("g = 10, h = 0 on the base walls; g = 1, h = 0 on the top walls: pyramid experiment");
    c.provenance.push_back("g = 0, h = 10 on flat regions: pyramid experiment");
    c.provenance.push_back("alpha = 1 on level lines, 11 on the base/top intersection: pyramid experiment");
    c.provenance.push_back("wall slopes and proportions: fixed round values, not given by the source");
    return c;
}

SyntheticCase make_case(const std::string& name, int n, int contour_count) {
    if (name == "ramp") return make_ramp_case(n);
    if (name == "cone") return make_cone_case(n);
    if (name == "semisphere") return make_semisphere_case(n, contour_count);
    if (name == "pyramid") return make_pyramid_case(n);
    throw InvalidArgument("unknown synthetic case '" + name + "' (expected ramp, cone, semisphere or pyramid)");
}

Signal1D make_mixed_1d_signal(int n) {
    if (n < 64) throw InvalidArgument("mixed 1D signal needs n >= 64");
    Signal1D s;
    s.name = "mixed";
    s.profile.n = n;
    s.ground_truth.assign(n, 0.0);
    const int half = n / 2;
    const double period = half / 2.0;
    const int w = n / 8;
    const int p0 = half + n / 16;
    const int p1 = p0 + 2 * w;
    for (int i = 0; i < n; ++i) {
        if (i < half) {
            s.ground_truth[i] = 10.0 + 10.0 * std::sin(2.0 * std::numbers::pi * i / period);
        } else if ((i >= p0 && i < p0 + w) || (i >= p1 && i < p1 + w)) {
            s.ground_truth[i] = 20.0;
        }
    }
    const double theta = 10.0;
    const int step = n / 16;
    std::vector<int> idx;
    for (int i = 0; i < n; i += step) idx.push_back(i);
    for (int e : {p0 - 1, p0, p0 + w - 1, p0 + w, p1 - 1, p1, p1 + w - 1, std::min(p1 + w, n - 1)}) idx.push_back(e);
    idx.push_back(n - 1);
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    for (int i : idx) s.profile.heights.push_back({i, s.ground_truth[i], theta});
    // Direction samples where the sine crosses its mean and on the pulse edges.
    for (int q = 0; q < 4; ++q) {
        const int i = static_cast<int>(std::lround(q * period / 2.0));
        s.profile.vectors.push_back({i, q % 2 == 0 ? 1 : -1, 1.5});
    }
    s.profile.vectors.push_back({p0 - 1, 1, 1.5});
    s.profile.vectors.push_back({p0 + w - 1, -1, 1.5});
    s.profile.vectors.push_back({p1 - 1, 1, 1.5});
    if (p1 + w - 1 < n - 1) s.profile.vectors.push_back({p1 + w - 1, -1, 1.5});
    s.profile.values.assign(n, 0.0);
    s.terms = {{1, 1.5}, {2, 4.0}};
    s.provenance = {"h = 1.5 (first order), g = 4 (second order), alpha = 1.5: mixed-signal experiment",
                    "theta = 10: not stated for this signal, taken from the 1D order study"};
    return s;
}

Signal1D make_order_study_signal(int n) {
    if (n < 32) throw InvalidArgument("order study signal needs n >= 32");
    Signal1D s;
    s.name = "order_study";
    s.profile.n = n;
    s.ground_truth.assign(n, 0.0);
    const int a = n / 8;
    const int b = 3 * n / 8;
    const int c = 5 * n / 8;
    const int d = 7 * n / 8;
    for (int i = 0; i < n; ++i) {
        if (i >= a && i < b) {
            s.ground_truth[i] = static_cast<double>(i - a) / (b - a);
        } else if (i >= b && i < c) {
            s.ground_truth[i] = 1.0;
        } else if (i >= c && i < d) {
            s.ground_truth[i] = 1.0 - static_cast<double>(i - c) / (d - c);
        }
    }
    for (int i : {a, b, n / 2, c, d}) s.profile.heights.push_back({i, s.ground_truth[i], 10.0});
    s.profile.vectors.push_back({(a + b) / 2, 1, 1.0});
    s.profile.vectors.push_back({(c + d) / 2, -1, 1.0});
    s.profile.values.assign(n, 0.0);
    s.terms = {{2, 1.0}};
    s.provenance = {"g = 1, alpha = 1, theta = 10: 1D order study",
                    "sample layout: reconstruction, the source layout is not published"};
    return s;
}

double rmse(const ScalarField2D& a, const ScalarField2D& b) {
    require_same_grid(a.grid(), b.grid(), "rmse");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s / static_cast<double>(a.size()));
}

double rmse(const ScalarField2D& a, const ScalarField2D& b, const Mask2D& mask) {
    require_same_grid(a.grid(), b.grid(), "rmse");
    require_same_grid(a.grid(), mask.grid(), "rmse mask");
    double s = 0.0;
    std::size_t m = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!mask[k]) continue;
        s += (a[k] - b[k]) * (a[k] - b[k]);
        ++m;
    }
    if (m == 0) throw InvalidArgument("rmse: empty mask");
    return std::sqrt(s / static_cast<double>(m));
}

double max_abs_err(const ScalarField2D& a, const ScalarField2D& b) {
    require_same_grid(a.grid(), b.grid(), "max_abs_err");
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

} // namespace levelsurf
