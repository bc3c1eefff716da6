#pragma once

#include <string>
#include <vector>

#include "levelsurf/fields.hpp"
#include "levelsurf/geometry.hpp"
#include "levelsurf/model.hpp"
#include "levelsurf/onedim.hpp"

namespace levelsurf {

/// Analytic test surface with sampled level lines and parameter presets.
struct SyntheticCase {
    std::string name;
    ScalarField2D ground_truth;
    /// Unit direction in which the analytic surface rises towards its summit;
    /// zero where undefined (outside radial supports, at the centre).
    VectorField2D uphill;
    std::vector<double> level_values;
    /// Lines oriented so that their normals point uphill. Lines without
    /// direction data have empty normals.
    std::vector<LevelLine> lines;
    RegularizerWeights weights;
    ScalarField2D alpha;
    ScalarField2D theta;
    SolverConfig config;
    /// "parameter = value: source" entries for every preset.
    std::vector<std::string> provenance;

    /// Rasterizes the lines with the preset theta and alpha fields.
    [[nodiscard]] Rasterization rasterize() const;
};

/// Level lines x = round(n / 4) (height 0) and x = n - 1 - round(n / 4)
/// (height 1); the ground truth is the affine ramp through them.
SyntheticCase make_ramp_case(int n = 128);
/// Cone of radius 0.4 (n - 1) and unit slope centred at ((n - 1) / 2, (n - 1) / 2).
/// Data: the base circle with normals and the cells nearest the apex
/// (heights only).
SyntheticCase make_cone_case(int n = 128, double alpha = 1.0);
/// Semisphere of radius 0.4 (n - 1). contour_count in {1, 2, 4, 8} circles at
/// heights R k / count, k = 0 .. count - 1, each with normals; the base circle
/// gets alpha 2.85, the others 0.5.
SyntheticCase make_semisphere_case(int n = 128, int contour_count = 4);
/// Stepped pyramid in the Chebyshev distance d from the centre (L = (n - 1) / 2):
/// floor for d >= 0.9 L, unit-slope base wall, terrace for 0.45 L <= d < 0.65 L,
/// unit-slope top wall, flat top for d < 0.25 L. Level lines at d = 0.9 L,
/// 0.45 L (base/top intersection, alpha 11) and 0.25 L.
SyntheticCase make_pyramid_case(int n = 128);

/// Dispatches on "ramp", "cone", "semisphere", "pyramid".
SyntheticCase make_case(const std::string& name, int n, int contour_count = 4);

/// Sampled 1D signal with its ground truth in values and regularizer presets.
struct Signal1D {
    std::string name;
    Profile1D profile;
    std::vector<double> ground_truth;
    std::vector<OrderTerm> terms;
    std::vector<std::string> provenance;
};

/// Two periods of a sine followed by two rectangular pulses, n >= 64.
Signal1D make_mixed_1d_signal(int n = 256);
/// Sparse layout for the order study: a plateau pair and a slope with
/// direction samples; presets g = 1, alpha = 1, theta = 10.
Signal1D make_order_study_signal(int n = 64);

double rmse(const ScalarField2D& a, const ScalarField2D& b);
/// RMSE over the cells of mask only.
double rmse(const ScalarField2D& a, const ScalarField2D& b, const Mask2D& mask);
double max_abs_err(const ScalarField2D& a, const ScalarField2D& b);

} // namespace levelsurf
