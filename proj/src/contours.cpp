#include <array>
#include <cstddef>

#include "levelsurf/geometry.hpp"

namespace levelsurf {

std::vector<LevelLine> extract_contours(const ScalarField2D& field, std::span<const double> levels) {
    const Grid2D& grid = field.grid();
    const int nx = grid.nx();
    const int ny = grid.ny();
    const std::size_t n_h = static_cast<std::size_t>(nx - 1) * static_cast<std::size_t>(ny);
    const std::size_t n_nodes = n_h + static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny - 1);
    auto h_edge = [&](int i, int j) { return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx - 1) + i; };
    auto v_edge = [&](int i, int j) { return n_h + static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + i; };

    std::vector<LevelLine> out;
    for (const double level : levels) {
        std::vector<std::array<std::size_t, 2>> nbr(n_nodes, {n_nodes, n_nodes});
        std::vector<Point2> where(n_nodes);
        auto crossing = [&](std::size_t node, double a, double b, Point2 pa, Point2 pb) {
            const double t = (level - a) / (b - a);
            where[node] = {pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)};
        };
        auto link = [&](std::size_t a, std::size_t b) {
            (nbr[a][0] == n_nodes ? nbr[a][0] : nbr[a][1]) = b;
            (nbr[b][0] == n_nodes ? nbr[b][0] : nbr[b][1]) = a;
        };

        for (int j = 0; j + 1 < ny; ++j) {
            for (int i = 0; i + 1 < nx; ++i) {
                const double v[4] = {field(i, j), field(i + 1, j), field(i + 1, j + 1), field(i, j + 1)};
                const Point2 c[4] = {{double(i), double(j)},
                                     {double(i + 1), double(j)},
                                     {double(i + 1), double(j + 1)},
                                     {double(i), double(j + 1)}};
                const bool above[4] = {v[0] > level, v[1] > level, v[2] > level, v[3] > level};
                // Edges: 0 bottom (v0-v1), 1 right (v1-v2), 2 top (v3-v2), 3 left (v0-v3).
                const std::size_t e[4] = {h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)};
                const int ends[4][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3}};
                int crossed[4];
                int nc = 0;
                for (int k = 0; k < 4; ++k) {
                    const int a = ends[k][0];
                    const int b = ends[k][1];
                    if (above[a] != above[b]) {
                        crossing(e[k], v[a], v[b], c[a], c[b]);
                        crossed[nc++] = k;
                    }
                }
                if (nc == 2) {
                    link(e[crossed[0]], e[crossed[1]]);
                } else if (nc == 4) {
                    const bool centre_above = 0.25 * (v[0] + v[1] + v[2] + v[3]) > level;
                    if (above[0] == centre_above) {
                        link(e[0], e[1]);
                        link(e[2], e[3]);
                    } else {
                        link(e[3], e[0]);
                        link(e[1], e[2]);
                    }
                }
            }
        }

        std::vector<bool> visited(n_nodes, false);
        auto trace = [&](std::size_t start, bool cyclic) {
            LevelLine line;
            line.level = level;
            std::size_t prev = n_nodes;
            std::size_t cur = start;
            while (cur != n_nodes && !visited[cur]) {
                visited[cur] = true;
                const Point2 q = where[cur];
                if (line.points.empty() || !(line.points.back() == q)) line.points.push_back(q);
                const std::size_t next = nbr[cur][0] != prev ? nbr[cur][0] : nbr[cur][1];
                prev = cur;
                cur = next;
            }
            if (cyclic && line.points.size() > 1 && line.points.back() == line.points.front()) line.points.pop_back();
            line.closed = cyclic && line.points.size() >= 3;
            if (line.points.size() >= 2) out.push_back(normals_from_level_line(std::move(line)));
        };
        auto degree = [&](std::size_t k) { return int(nbr[k][0] != n_nodes) + int(nbr[k][1] != n_nodes); };
        for (std::size_t k = 0; k < n_nodes; ++k) {
            if (!visited[k] && degree(k) == 1) trace(k, false);
        }
        for (std::size_t k = 0; k < n_nodes; ++k) {
            if (!visited[k] && degree(k) == 2) trace(k, true);
        }
    }
    return out;
}

} // namespace levelsurf
