#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "levelsurf/fields.hpp"
#include "levelsurf/model.hpp"

namespace levelsurf {

/// Position in grid coordinates: cell (i, j) has its centre at (i, j).
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Ordered polyline on one height level. tangents and normals are either
/// empty (not yet computed, or a degenerate one-point line) or hold one unit
/// vector per point with normal = tangent rotated by +90 degrees.
struct LevelLine {
    double level = 0.0;
    std::vector<Point2> points;
    bool closed = false;
    std::vector<Point2> tangents;
    std::vector<Point2> normals;
};

struct PointCloudSample {
    Point2 position;
    double level = 0.0;
};

/// Groups samples by exact level value (ascending) and chains each group by
/// greedy nearest-neighbour search. A chain starts at the lexicographically
/// smallest unused point, grows at its tail and then at its head, and stops
/// growing at an end once the nearest unused point is farther than
/// connect_threshold. Distance ties go to the lowest input index. A chain is
/// closed when it has at least three points and its ends lie within the
/// threshold. Single leftover points become one-point lines.
std::vector<LevelLine> assemble_level_lines(std::span<const PointCloudSample> samples, double connect_threshold);

struct IsotropicOrdering {
    std::vector<LevelLine> lines;
    /// Samples with no contour of their level within connect_threshold.
    std::vector<PointCloudSample> unordered;
};

/// Orders samples along contours of a previously reconstructed surface: each
/// sample is projected onto the nearest contour polyline of its level and
/// samples are sorted by arclength along it. Consecutive samples farther
/// apart than connect_threshold start a new line.
IsotropicOrdering order_via_isotropic(std::span<const PointCloudSample> samples,
                                      const ScalarField2D& isotropic_surface, double connect_threshold);

/// Fills unit tangents (central differences, one-sided at open ends, wrapping
/// on closed lines, coincident neighbours skipped) and normals (tangent
/// rotated by +90 degrees). Throws InvalidArgument when the line has fewer
/// than two distinct points.
LevelLine normals_from_level_line(LevelLine line);

/// Marching squares on the grid vertices (cell centres). A vertex counts as
/// above a level when its value is strictly greater. Saddle cells connect
/// according to the average of their four corners. Each traced polyline has
/// at least two distinct points and carries tangents and normals.
std::vector<LevelLine> extract_contours(const ScalarField2D& field, std::span<const double> levels);

/// A weight given either as one value for every cell or as a field.
using FieldOrConstant = std::variant<double, ScalarField2D>;

struct RasterCollision {
    int i = 0;
    int j = 0;
    double kept_level = 0.0;
    double dropped_level = 0.0;
};

struct Rasterization {
    ConstraintSet constraints;
    /// Points that landed on a cell already holding a different level.
    std::vector<RasterCollision> collisions;
};

/// Maps every line point to its nearest cell. Sigma receives the level and
/// theta; lines with normals also add Gamma entries with their normal and
/// alpha. The first writer of a cell wins. Throws InvalidArgument listing the
/// offending points when any point falls outside the grid, and when theta is
/// not positive on a Sigma cell.
Rasterization rasterize_constraints(std::span<const LevelLine> lines, const FieldOrConstant& theta,
                                    const FieldOrConstant& alpha, const Grid2D& grid);

} // namespace levelsurf
