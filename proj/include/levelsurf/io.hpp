#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "levelsurf/fields.hpp"
#include "levelsurf/geometry.hpp"
#include "levelsurf/model.hpp"
#include "levelsurf/onedim.hpp"

namespace levelsurf {

// Plain-file formats. CSV files carry a header row, use ',' separators and
// print reals with %.17g so that a write/read round trip is exact.
// IoError is thrown when a file cannot be opened or written, ParseError when
// its content is malformed.

/// Header x,y,value; one row per cell in storage order.
void write_field_csv(const std::filesystem::path& path, const ScalarField2D& field);
/// Reads x,y,value rows; the grid is (max x + 1) by (max y + 1) and every cell
/// must appear exactly once.
ScalarField2D read_field_csv(const std::filesystem::path& path);

/// Header line_id,level,x,y,nx,ny,closed; normal columns are empty for lines
/// without normals.
void write_lines_csv(const std::filesystem::path& path, std::span<const LevelLine> lines);
/// Reads the line format above; the closed column is optional. Lines whose
/// rows all carry normals get tangents rebuilt as normal rotated by -90 degrees.
std::vector<LevelLine> read_lines_csv(const std::filesystem::path& path);

/// Header x,y,level.
std::vector<PointCloudSample> read_points_csv(const std::filesystem::path& path);
void write_points_csv(const std::filesystem::path& path, std::span<const PointCloudSample> samples);

struct PgmScaling {
    double min = 0.0;
    double max = 0.0;
};

/// 16-bit big-endian binary PGM (P5, maxval 65535), min-max scaled; row
/// j = ny - 1 is written first so that y points up in image viewers.
PgmScaling write_pgm16(const std::filesystem::path& path, const ScalarField2D& field);

/// Height-field mesh: one vertex "v x y z" per cell, two triangles per quad.
void write_obj(const std::filesystem::path& path, const ScalarField2D& field);

/// Cell mask from a PNG, binary/ASCII PGM or field CSV; any nonzero value is
/// inside. Image rows are read top-down, the top row being j = ny - 1.
Mask2D read_mask(const std::filesystem::path& path, const Grid2D& grid);

/// Header index,value.
void write_profile_csv(const std::filesystem::path& path, std::span<const double> values);

/// Per-cell constraint dump: header i,j,in_sigma,height,theta,in_gamma,nx,ny,alpha.
void write_constraints_csv(const std::filesystem::path& path, const ConstraintSet& constraints);

} // namespace levelsurf
