#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "levelsurf/geometry.hpp"
#include "levelsurf/signs.hpp"
#include "levelsurf/synth.hpp"

using namespace levelsurf;
using namespace levelsurf::test;

TEST_SUITE_BEGIN("geometry");

namespace {

std::vector<PointCloudSample> circle_samples(int count, double cx, double cy, double r, double level,
                                             double jitter = 0.0) {
    std::vector<PointCloudSample> s;
    for (int k = 0; k < count; ++k) {
        const double t = 2.0 * std::numbers::pi * (k + jitter * std::sin(7.3 * k)) / count;
        s.push_back({{cx + r * std::cos(t), cy + r * std::sin(t)}, level});
    }
    return s;
}

ConstraintSet scrambled(const ConstraintSet& c, unsigned seed) {
    std::mt19937 rng(seed);
    std::bernoulli_distribution flip(0.5);
    ConstraintSet out = c;
    for (std::size_t k = 0; k < out.grid().size(); ++k) {
        if (out.gamma_mask[k] && flip(rng)) {
            out.normals.x[k] = -out.normals.x[k];
            out.normals.y[k] = -out.normals.y[k];
        }
    }
    return out;
}

std::size_t total_points(const std::vector<LevelLine>& lines) {
    std::size_t n = 0;
    for (const auto& l : lines) n += l.points.size();
    return n;
}

} // namespace

TEST_CASE("assemble_level_lines") {
    SUBCASE("unit square corners form one closed line") {
        const std::vector<PointCloudSample> s = {{{0, 0}, 1}, {{1, 0}, 1}, {{1, 1}, 1}, {{0, 1}, 1}};
        const auto lines = assemble_level_lines(s, 1.5);
        REQUIRE(lines.size() == 1);
        CHECK(lines[0].points.size() == 4);
        CHECK(lines[0].closed);
        CHECK(lines[0].level == 1.0);
    }
    SUBCASE("two distant clusters give two lines") {
        const std::vector<PointCloudSample> s = {{{0, 0}, 0}, {{1, 0}, 0}, {{2, 0}, 0},
                                                 {{20, 0}, 0}, {{21, 0}, 0}, {{22, 0}, 0}};
        const auto lines = assemble_level_lines(s, 1.5);
        REQUIRE(lines.size() == 2);
        CHECK_FALSE(lines[0].closed);
        CHECK(lines[0].points.size() == 3);
        CHECK(lines[1].points.size() == 3);
    }
    SUBCASE("levels are grouped in ascending order") {
        const std::vector<PointCloudSample> s = {{{0, 0}, 2}, {{1, 0}, 2}, {{0, 5}, -1}, {{1, 5}, -1}};
        const auto lines = assemble_level_lines(s, 1.5);
        REQUIRE(lines.size() == 2);
        CHECK(lines[0].level == -1.0);
        CHECK(lines[1].level == 2.0);
    }
    SUBCASE("shuffled circle is recovered in cyclic order") {
        auto s = circle_samples(40, 10, 10, 6, 3.0);
        std::mt19937 rng(5);
        std::shuffle(s.begin(), s.end(), rng);
        const auto lines = assemble_level_lines(s, 1.5);
        REQUIRE(lines.size() == 1);
        const auto& p = lines[0].points;
        REQUIRE(p.size() == 40);
        CHECK(lines[0].closed);
        const double step = 2.0 * 6.0 * std::sin(std::numbers::pi / 40);
        for (std::size_t k = 0; k < p.size(); ++k) {
            const Point2& a = p[k];
            const Point2& b = p[(k + 1) % p.size()];
            CHECK(std::hypot(a.x - b.x, a.y - b.y) == doctest::Approx(step).epsilon(1e-9));
        }
    }
    SUBCASE("output does not depend on input order") {
        // Irregular spacing avoids exact distance ties, which the input index breaks.
        auto s = circle_samples(24, 0, 0, 4, 1.0, 0.2);
        auto more = circle_samples(10, 30, 0, 2, 1.0, 0.2);
        s.insert(s.end(), more.begin(), more.end());
        const auto ref = assemble_level_lines(s, 1.5);
        std::mt19937 rng(9);
        for (int rep = 0; rep < 5; ++rep) {
            std::shuffle(s.begin(), s.end(), rng);
            const auto got = assemble_level_lines(s, 1.5);
            REQUIRE(got.size() == ref.size());
            for (std::size_t l = 0; l < ref.size(); ++l) {
                CHECK(got[l].points == ref[l].points);
                CHECK(got[l].closed == ref[l].closed);
            }
        }
    }
    SUBCASE("isolated point becomes a one-point line") {
        const std::vector<PointCloudSample> s = {{{0, 0}, 0}, {{1, 0}, 0}, {{9, 9}, 0}};
        const auto lines = assemble_level_lines(s, 1.5);
        REQUIRE(lines.size() == 2);
        CHECK(total_points(lines) == 3);
    }
}

TEST_CASE("order_via_isotropic follows contours of a given surface") {
    const Grid2D g(32, 32);
    ScalarField2D bowl(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) bowl(i, j) = std::hypot(i - 15.5, j - 15.5);
    auto s = circle_samples(30, 15.5, 15.5, 8.0, 8.0);
    std::mt19937 rng(2);
    std::shuffle(s.begin(), s.end(), rng);
    s.push_back({{2.0, 2.0}, 100.0});
    const IsotropicOrdering o = order_via_isotropic(s, bowl, 2.5);
    CHECK(o.unordered.size() == 1);
    CHECK(total_points(o.lines) == 30);
    for (const auto& l : o.lines) {
        for (std::size_t k = 0; k + 1 < l.points.size(); ++k) {
            const double d = std::hypot(l.points[k].x - l.points[k + 1].x, l.points[k].y - l.points[k + 1].y);
            CHECK(d < 2.5);
        }
    }
}

TEST_CASE("normals_from_level_line") {
    SUBCASE("straight line") {
        LevelLine l;
        for (int k = 0; k < 5; ++k) l.points.push_back({double(k), 2.0});
        l = normals_from_level_line(l);
        REQUIRE(l.normals.size() == 5);
        for (std::size_t k = 0; k < 5; ++k) {
            CHECK(l.tangents[k].x == doctest::Approx(1.0));
            CHECK(l.normals[k].x == doctest::Approx(0.0));
            CHECK(l.normals[k].y == doctest::Approx(1.0));
        }
    }
    SUBCASE("sampled circle") {
        LevelLine l;
        l.closed = true;
        const double r = 20.0;
        for (int k = 0; k < 256; ++k) {
            const double t = 2.0 * std::numbers::pi * k / 256;
            l.points.push_back({r * std::cos(t), r * std::sin(t)});
        }
        l = normals_from_level_line(l);
        for (std::size_t k = 0; k < l.points.size(); ++k) {
            const double ex = -l.points[k].x / r;
            const double ey = -l.points[k].y / r;
            const double ang = std::acos(std::clamp(ex * l.normals[k].x + ey * l.normals[k].y, -1.0, 1.0));
            CHECK(ang <= 1e-3);
            CHECK(std::hypot(l.normals[k].x, l.normals[k].y) == doctest::Approx(1.0));
        }
    }
    SUBCASE("two points and degenerate input") {
        LevelLine l;
        l.points = {{0, 0}, {0, 3}};
        l = normals_from_level_line(l);
        CHECK(l.normals[0].x == doctest::Approx(-1.0));
        CHECK(l.normals[1].x == doctest::Approx(-1.0));
        LevelLine single;
        single.points = {{1, 1}, {1, 1}};
        CHECK_THROWS_AS(normals_from_level_line(single), InvalidArgument);
    }
}

TEST_CASE("extract_contours") {
    SUBCASE("vertical level line of f = i") {
        const Grid2D g(6, 5);
        ScalarField2D f(g);
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i) f(i, j) = i;
        const double lv[] = {2.5};
        const auto lines = extract_contours(f, lv);
        REQUIRE(lines.size() == 1);
        CHECK_FALSE(lines[0].closed);
        CHECK(lines[0].points.size() == 5);
        for (std::size_t k = 0; k < lines[0].points.size(); ++k) {
            CHECK(lines[0].points[k].x == doctest::Approx(2.5));
            CHECK(std::abs(lines[0].normals[k].x) == doctest::Approx(1.0));
        }
    }
    SUBCASE("paraboloid level set is a circle") {
        const Grid2D g(41, 41);
        ScalarField2D f(g);
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i) f(i, j) = (i - 20.0) * (i - 20.0) + (j - 20.0) * (j - 20.0);
        const double lv[] = {100.0};
        const auto lines = extract_contours(f, lv);
        REQUIRE(lines.size() == 1);
        CHECK(lines[0].closed);
        for (const auto& p : lines[0].points) CHECK(std::abs(std::hypot(p.x - 20.0, p.y - 20.0) - 10.0) < 0.05);
    }
    SUBCASE("level outside the range") {
        const double lv[] = {5.0};
        CHECK(extract_contours(ScalarField2D(Grid2D(4, 4), 1.0), lv).empty());
    }
}

TEST_CASE("rasterize_constraints") {
    const Grid2D g(10, 10);
    SUBCASE("single point") {
        LevelLine l;
        l.level = 0.7;
        l.points = {{3.2, 4.8}};
        const auto r = rasterize_constraints(std::vector<LevelLine>{l}, 2.0, 1.0, g);
        CHECK(r.constraints.sigma_mask.count() == 1);
        CHECK(r.constraints.sigma_mask(3, 5));
        CHECK(r.constraints.heights(3, 5) == 0.7);
        CHECK(r.constraints.theta_hat(3, 5) == 2.0);
        CHECK(r.constraints.gamma_mask.count() == 0);
    }
    SUBCASE("collision keeps the first writer") {
        LevelLine a;
        a.level = 1.0;
        a.points = {{2.0, 2.0}, {3.0, 2.0}};
        LevelLine b;
        b.level = 2.0;
        b.points = {{2.1, 1.9}};
        const auto r = rasterize_constraints(std::vector<LevelLine>{a}, 1.0, 1.0, g);
        CHECK(r.collisions.empty());
        const auto r2 = rasterize_constraints(std::vector<LevelLine>{a, b}, 1.0, 1.0, g);
        REQUIRE(r2.collisions.size() == 1);
        CHECK(r2.collisions[0].kept_level == 1.0);
        CHECK(r2.collisions[0].dropped_level == 2.0);
        CHECK(r2.constraints.heights(2, 2) == 1.0);
    }
    SUBCASE("normals land on Gamma") {
        LevelLine l;
        l.level = 0.0;
        for (int k = 0; k < 6; ++k) l.points.push_back({double(k + 2), 5.0});
        l = normals_from_level_line(l);
        const auto r = rasterize_constraints(std::vector<LevelLine>{l}, 1.0, 3.0, g);
        CHECK(r.constraints.gamma_mask.count() == 6);
        CHECK(r.constraints.alpha_hat(4, 5) == 3.0);
        CHECK(r.constraints.normals.y(4, 5) == doctest::Approx(1.0));
    }
    SUBCASE("sampled ring rasterizes to a connected closed curve") {
        const Grid2D big(64, 64);
        LevelLine l;
        l.closed = true;
        for (int k = 0; k < 400; ++k) {
            const double t = 2.0 * std::numbers::pi * k / 400;
            l.points.push_back({31.5 + 20.0 * std::cos(t), 31.5 + 20.0 * std::sin(t)});
        }
        const auto r = rasterize_constraints(std::vector<LevelLine>{l}, 1.0, 0.0, big);
        const Mask2D& m = r.constraints.sigma_mask;
        for (int j = 0; j < 64; ++j) {
            for (int i = 0; i < 64; ++i) {
                if (!m(i, j)) continue;
                int nb = 0;
                for (int dj = -1; dj <= 1; ++dj)
                    for (int di = -1; di <= 1; ++di)
                        if ((di || dj) && big.contains(i + di, j + dj) && m(i + di, j + dj)) ++nb;
                CHECK(nb >= 2);
            }
        }
    }
    SUBCASE("point outside the grid") {
        LevelLine l;
        l.points = {{1, 1}, {12.0, 3.0}};
        CHECK_THROWS_AS(rasterize_constraints(std::vector<LevelLine>{l}, 1.0, 1.0, g), InvalidArgument);
    }
}

TEST_CASE("global sign determination on the cone recovers uphill normals") {
    const SyntheticCase cone = make_cone_case(64, 1.0);
    const ConstraintSet base = cone.rasterize().constraints;
    const ConstraintSet input = scrambled(base, 7);
    const SignResult res = determine_signs_global(input, cone.weights, cone.config);
    const ConstraintSet& c = res.constraints;
    // The base circle sits at the rim where the analytic uphill field is cut off,
    // so compare against the direction towards the apex.
    const double ctr = 31.5;
    int good = 0;
    int total = 0;
    for (int j = 0; j < 64; ++j) {
        for (int i = 0; i < 64; ++i) {
            if (!c.gamma_mask(i, j)) continue;
            ++total;
            good += c.normals.x(i, j) * (ctr - i) + c.normals.y(i, j) * (ctr - j) > 0.0;
        }
    }
    REQUIRE(total > 0);
    CHECK(good == total);
    CHECK(res.cells.size() == static_cast<std::size_t>(total));
    CHECK(res.complete);
}

TEST_CASE("sign determination on the ramp") {
    const SyntheticCase ramp = make_ramp_case(32);
    const ConstraintSet base = ramp.rasterize().constraints;
    SUBCASE("result does not depend on the input signs") {
        const SignResult a = determine_signs_global(base, ramp.weights, ramp.config);
        const SignResult b = determine_signs_global(scrambled(base, 3), ramp.weights, ramp.config);
        CHECK(a.constraints.normals.x == b.constraints.normals.x);
        CHECK(a.constraints.normals.y == b.constraints.normals.y);
    }
    SUBCASE("adaptive admits every cell in the first round") {
        const SignResult r = determine_signs_adaptive(scrambled(base, 4), ramp.weights, ramp.config, 1e-3, 10);
        CHECK(r.complete);
        for (const auto& cell : r.cells) CHECK(cell.admitted_round == 1);
        for (std::size_t k = 0; k < base.grid().size(); ++k)
            if (base.gamma_mask[k]) CHECK(r.constraints.normals.x[k] > 0.0);
    }
    SUBCASE("a threshold above every |rho| admits nothing and warns") {
        const SignResult r = determine_signs_adaptive(base, ramp.weights, ramp.config, 1e6, 10);
        CHECK_FALSE(r.complete);
        CHECK_FALSE(r.warnings.empty());
        for (const auto& cell : r.cells) CHECK(cell.admitted_round == 0);
        CHECK(norm_inf(r.constraints.alpha_hat) == 0.0);
    }
}

TEST_CASE("rho = 0 keeps the input sign") {
    // Symmetric data: the surface is flat along y, so rho vanishes for normals along y.
    const Grid2D g(16, 16);
    ConstraintSet c(g);
    for (int j = 0; j < 16; ++j) {
        c.set_height(3, j, 0.0, 1e3);
        c.set_height(12, j, 1.0, 1e3);
    }
    c.set_normal(7, 8, 0.0, -1.0, 1.0);
    SolverConfig cfg;
    cfg.outer_max = 200;
    const SignResult r = determine_signs_global(c, RegularizerWeights::constant(g, 1.0, 0.0), cfg);
    CHECK(r.constraints.normals.y(7, 8) == -1.0);
    REQUIRE(r.cells.size() == 1);
    CHECK_FALSE(r.cells[0].flipped);
}

TEST_SUITE_END();
