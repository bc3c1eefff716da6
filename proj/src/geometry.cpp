#include "levelsurf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace levelsurf {

namespace {

double dist(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool lex_less(const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

/// Chains the samples whose indices are listed in `members`.
void chain_group(std::span<const PointCloudSample> samples, const std::vector<std::size_t>& members, double threshold,
                 std::vector<LevelLine>& out) {
    std::vector<bool> used(members.size(), false);
    std::size_t remaining = members.size();
    auto nearest = [&](const Point2& p) {
        std::size_t best = members.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < members.size(); ++m) {
            if (used[m]) continue;
            const double d = dist(p, samples[members[m]].position);
            if (d < best_d) {
                best_d = d;
                best = m;
            }
        }
        return std::pair{best, best_d};
    };

    while (remaining > 0) {
        std::size_t start = members.size();
        for (std::size_t m = 0; m < members.size(); ++m) {
            if (used[m]) continue;
            if (start == members.size() || lex_less(samples[members[m]].position, samples[members[start]].position)) {
                start = m;
            }
        }
        used[start] = true;
        --remaining;
        std::deque<std::size_t> chain{start};
        for (bool at_tail : {true, false}) {
            while (remaining > 0) {
                const Point2& end = samples[members[at_tail ? chain.back() : chain.front()]].position;
                auto [m, d] = nearest(end);
                if (d > threshold) break;
                used[m] = true;
                --remaining;
                if (at_tail) {
                    chain.push_back(m);
                } else {
                    chain.push_front(m);
                }
            }
        }
        LevelLine line;
        line.level = samples[members[start]].level;
        for (std::size_t m : chain) line.points.push_back(samples[members[m]].position);
        line.closed = line.points.size() >= 3 && dist(line.points.front(), line.points.back()) <= threshold;
        out.push_back(std::move(line));
    }
}

} // namespace

std::vector<LevelLine> assemble_level_lines(std::span<const PointCloudSample> samples, double connect_threshold) {
    if (!(connect_threshold > 0.0)) throw InvalidArgument("assemble_level_lines: connect_threshold must be positive");
    std::map<double, std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const auto& s = samples[k];
        if (!std::isfinite(s.position.x) || !std::isfinite(s.position.y) || !std::isfinite(s.level)) {
            throw InvalidArgument("assemble_level_lines: non-finite sample at index " + std::to_string(k));
        }
        groups[s.level].push_back(k);
    }
    std::vector<LevelLine> out;
    for (const auto& [level, members] : groups) chain_group(samples, members, connect_threshold, out);
    return out;
}

IsotropicOrdering order_via_isotropic(std::span<const PointCloudSample> samples,
                                      const ScalarField2D& isotropic_surface, double connect_threshold) {
    if (!(connect_threshold > 0.0)) throw InvalidArgument("order_via_isotropic: connect_threshold must be positive");
    std::map<double, std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < samples.size(); ++k) groups[samples[k].level].push_back(k);

    IsotropicOrdering result;
    for (const auto& [level, members] : groups) {
        const double lv[] = {level};
        const std::vector<LevelLine> contours = extract_contours(isotropic_surface, lv);

        // Cumulative arclength at each contour vertex.
        std::vector<std::vector<double>> arc(contours.size());
        for (std::size_t c = 0; c < contours.size(); ++c) {
            const auto& pts = contours[c].points;
            arc[c].assign(pts.size(), 0.0);
            for (std::size_t s = 1; s < pts.size(); ++s) arc[c][s] = arc[c][s - 1] + dist(pts[s - 1], pts[s]);
        }

        struct Placed {
            double param;
            std::size_t index;
        };
        std::vector<std::vector<Placed>> per_contour(contours.size());
        for (std::size_t k : members) {
            const Point2 p = samples[k].position;
            double best_d = std::numeric_limits<double>::infinity();
            std::size_t best_c = 0;
            double best_param = 0.0;
            for (std::size_t c = 0; c < contours.size(); ++c) {
                const auto& pts = contours[c].points;
                const std::size_t nseg = contours[c].closed ? pts.size() : pts.size() - 1;
                for (std::size_t s = 0; s < nseg; ++s) {
                    const Point2& a = pts[s];
                    const Point2& b = pts[(s + 1) % pts.size()];
                    const double dx = b.x - a.x;
                    const double dy = b.y - a.y;
                    const double len2 = dx * dx + dy * dy;
                    double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
                    t = std::clamp(t, 0.0, 1.0);
                    const Point2 q{a.x + t * dx, a.y + t * dy};
                    const double d = dist(p, q);
                    if (d < best_d) {
                        best_d = d;
                        best_c = c;
                        best_param = arc[c][s] + t * std::sqrt(len2);
                    }
                }
            }
            if (best_d > connect_threshold) {
                result.unordered.push_back(samples[k]);
            } else {
                per_contour[best_c].push_back({best_param, k});
            }
        }

        for (std::size_t c = 0; c < contours.size(); ++c) {
            auto& placed = per_contour[c];
            if (placed.empty()) continue;
            std::sort(placed.begin(), placed.end(), [](const Placed& a, const Placed& b) {
                return a.param < b.param || (a.param == b.param && a.index < b.index);
            });
            const std::size_t m = placed.size();
            auto pos = [&](std::size_t r) { return samples[placed[r].index].position; };
            std::vector<std::size_t> order(m);
            std::iota(order.begin(), order.end(), std::size_t{0});
            bool closed = false;
            if (contours[c].closed) {
                // Rotate so the sequence starts right after a gap; without a gap it is a closed ring.
                std::size_t gap_end = m;
                for (std::size_t r = 0; r < m; ++r) {
                    if (dist(pos(r), pos((r + 1) % m)) > connect_threshold) {
                        gap_end = (r + 1) % m;
                        break;
                    }
                }
                if (gap_end == m) {
                    closed = m >= 3;
                } else {
                    std::rotate(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(gap_end), order.end());
                }
            }
            LevelLine line;
            line.level = level;
            for (std::size_t r = 0; r < m; ++r) {
                const Point2 p = pos(order[r]);
                if (!line.points.empty() && dist(line.points.back(), p) > connect_threshold) {
                    result.lines.push_back(std::move(line));
                    line = LevelLine{};
                    line.level = level;
                }
                line.points.push_back(p);
            }
            line.closed = closed;
            result.lines.push_back(std::move(line));
        }
    }
    return result;
}

LevelLine normals_from_level_line(LevelLine line) {
    const std::size_t n = line.points.size();
    const auto& p = line.points;
    bool distinct = false;
    for (std::size_t k = 1; k < n && !distinct; ++k) distinct = !(p[k] == p[0]);
    if (n < 2 || !distinct) throw InvalidArgument("normals_from_level_line: need at least two distinct points");

    // Nearest point before / after k that differs from p[k]; n when none exists.
    auto step = [&](std::size_t k, bool forward) {
        std::size_t r = k;
        for (std::size_t count = 0; count + 1 < n; ++count) {
            if (forward) {
                if (r + 1 == n) {
                    if (!line.closed) return n;
                    r = 0;
                } else {
                    ++r;
                }
            } else {
                if (r == 0) {
                    if (!line.closed) return n;
                    r = n - 1;
                } else {
                    --r;
                }
            }
            if (!(p[r] == p[k])) return r;
        }
        return n;
    };

    line.tangents.assign(n, Point2{});
    line.normals.assign(n, Point2{});
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t prev = step(k, false);
        const std::size_t next = step(k, true);
        Point2 t{};
        if (prev != n && next != n) t = {p[next].x - p[prev].x, p[next].y - p[prev].y};
        if (std::hypot(t.x, t.y) == 0.0) {
            t = next != n ? Point2{p[next].x - p[k].x, p[next].y - p[k].y} : Point2{p[k].x - p[prev].x, p[k].y - p[prev].y};
        }
        const double len = std::hypot(t.x, t.y);
        line.tangents[k] = {t.x / len, t.y / len};
        line.normals[k] = {-line.tangents[k].y, line.tangents[k].x};
    }
    return line;
}

Rasterization rasterize_constraints(std::span<const LevelLine> lines, const FieldOrConstant& theta,
                                    const FieldOrConstant& alpha, const Grid2D& grid) {
    auto value_at = [&](const FieldOrConstant& f, std::size_t k, const char* what) {
        if (const double* c = std::get_if<double>(&f)) return *c;
        const auto& field = std::get<ScalarField2D>(f);
        require_same_grid(grid, field.grid(), what);
        return field[k];
    };

    std::ostringstream outside;
    std::size_t n_outside = 0;
    for (std::size_t l = 0; l < lines.size(); ++l) {
        for (std::size_t k = 0; k < lines[l].points.size(); ++k) {
            const Point2& p = lines[l].points[k];
            const bool finite = std::isfinite(p.x) && std::isfinite(p.y);
            if (!finite || !grid.contains(static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y)))) {
                if (n_outside < 10) outside << " line " << l << " point " << k << " (" << p.x << ", " << p.y << ")";
                ++n_outside;
            }
        }
    }
    if (n_outside > 0) {
        std::ostringstream msg;
        msg << "rasterize_constraints: " << n_outside << " point(s) outside the grid:" << outside.str();
        if (n_outside > 10) msg << " ...";
        throw InvalidArgument(msg.str());
    }

    Rasterization r{ConstraintSet(grid), {}};
    ConstraintSet& c = r.constraints;
    for (const LevelLine& line : lines) {
        const bool has_normals = line.normals.size() == line.points.size();
        for (std::size_t k = 0; k < line.points.size(); ++k) {
            const int i = static_cast<int>(std::lround(line.points[k].x));
            const int j = static_cast<int>(std::lround(line.points[k].y));
            const std::size_t cell = grid.index(i, j);
            if (!c.sigma_mask[cell]) {
                const double th = value_at(theta, cell, "rasterize_constraints theta");
                if (!(th > 0.0)) {
                    throw InvalidArgument("rasterize_constraints: theta must be positive on Sigma cell (" +
                                          std::to_string(i) + ", " + std::to_string(j) + ")");
                }
                c.set_height(i, j, line.level, th);
            } else if (c.heights[cell] != line.level) {
                r.collisions.push_back({i, j, c.heights[cell], line.level});
            }
            if (has_normals && !c.gamma_mask[cell]) {
                c.set_normal(i, j, line.normals[k].x, line.normals[k].y,
                             value_at(alpha, cell, "rasterize_constraints alpha"));
            }
        }
    }
    return r;
}

} // namespace levelsurf
