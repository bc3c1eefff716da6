#pragma once

#include "levelsurf/fields.hpp"

namespace levelsurf {

// Finite-difference operators with homogeneous Neumann handling.
//
// gradient uses forward differences and is zero in the normal direction on
// the last column/row. divergence is its exact negative adjoint, so for all
// f, V:  <gradient(f), V> = -<f, divergence(V)>, and divergence(gradient(.))
// is the usual 5-point Neumann Laplacian (symmetric, negative semidefinite,
// kernel = constants).

VectorField2D gradient(const ScalarField2D& f);
ScalarField2D divergence(const VectorField2D& v);

/// Row-wise gradient: row 0 = gradient(v.x), row 1 = gradient(v.y).
TensorField2D jacobian(const VectorField2D& v);
/// Row-wise divergence, the negative adjoint of jacobian.
VectorField2D tensor_divergence(const TensorField2D& t);

/// divergence(gradient(f)) evaluated with the fused 5-point stencil.
ScalarField2D laplacian(const ScalarField2D& f);

/// Central differences in the interior, one-sided at the domain edges.
/// Used where a direction-symmetric derivative estimate is wanted (sign tests).
VectorField2D central_gradient(const ScalarField2D& f);

} // namespace levelsurf
