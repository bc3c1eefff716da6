#include "levelsurf/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace levelsurf {

Grid2D::Grid2D(int nx, int ny) : nx_(nx), ny_(ny) {
    if (nx < 2 || ny < 2) {
        throw InvalidArgument("grid needs at least 2 cells per axis, got " + std::to_string(nx) + "x" +
                              std::to_string(ny));
    }
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
    if (!(a == b)) {
        throw DimensionMismatch(std::string(what) + ": grid " + std::to_string(a.nx()) + "x" +
                                std::to_string(a.ny()) + " vs " + std::to_string(b.nx()) + "x" +
                                std::to_string(b.ny()));
    }
}

ScalarField2D::ScalarField2D(Grid2D grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField2D::ScalarField2D(Grid2D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw DimensionMismatch("field has " + std::to_string(values_.size()) + " values, grid needs " +
                                std::to_string(grid_.size()));
    }
}

void ScalarField2D::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

ScalarField2D& ScalarField2D::operator+=(const ScalarField2D& other) {
    require_same_grid(grid_, other.grid_, "operator+=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

ScalarField2D& ScalarField2D::operator-=(const ScalarField2D& other) {
    require_same_grid(grid_, other.grid_, "operator-=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

ScalarField2D& ScalarField2D::operator*=(double s) noexcept {
    for (auto& v : values_) v *= s;
    return *this;
}

void ScalarField2D::axpy(double a, const ScalarField2D& x) {
    require_same_grid(grid_, x.grid_, "axpy");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += a * x.values_[k];
}

ScalarField2D operator+(ScalarField2D a, const ScalarField2D& b) { return a += b; }
ScalarField2D operator-(ScalarField2D a, const ScalarField2D& b) { return a -= b; }
ScalarField2D operator*(double s, ScalarField2D a) { return a *= s; }

VectorField2D::VectorField2D(ScalarField2D x_, ScalarField2D y_) : x(std::move(x_)), y(std::move(y_)) {
    require_same_grid(x.grid(), y.grid(), "VectorField2D");
}

VectorField2D& VectorField2D::operator+=(const VectorField2D& o) {
    x += o.x;
    y += o.y;
    return *this;
}

VectorField2D& VectorField2D::operator-=(const VectorField2D& o) {
    x -= o.x;
    y -= o.y;
    return *this;
}

VectorField2D& VectorField2D::operator*=(double s) noexcept {
    x *= s;
    y *= s;
    return *this;
}

void VectorField2D::axpy(double a, const VectorField2D& v) {
    x.axpy(a, v.x);
    y.axpy(a, v.y);
}

TensorField2D& TensorField2D::operator+=(const TensorField2D& o) {
    xx += o.xx;
    xy += o.xy;
    yx += o.yx;
    yy += o.yy;
    return *this;
}

TensorField2D& TensorField2D::operator-=(const TensorField2D& o) {
    xx -= o.xx;
    xy -= o.xy;
    yx -= o.yx;
    yy -= o.yy;
    return *this;
}

TensorField2D& TensorField2D::operator*=(double s) noexcept {
    xx *= s;
    xy *= s;
    yx *= s;
    yy *= s;
    return *this;
}

void TensorField2D::axpy(double a, const TensorField2D& t) {
    xx.axpy(a, t.xx);
    xy.axpy(a, t.xy);
    yx.axpy(a, t.yx);
    yy.axpy(a, t.yy);
}

VectorField2D operator-(VectorField2D a, const VectorField2D& b) { return a -= b; }
TensorField2D operator-(TensorField2D a, const TensorField2D& b) { return a -= b; }

double dot(const ScalarField2D& a, const ScalarField2D& b) {
    require_same_grid(a.grid(), b.grid(), "dot");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double dot(const VectorField2D& a, const VectorField2D& b) { return dot(a.x, b.x) + dot(a.y, b.y); }

double dot(const TensorField2D& a, const TensorField2D& b) {
    return dot(a.xx, b.xx) + dot(a.xy, b.xy) + dot(a.yx, b.yx) + dot(a.yy, b.yy);
}

double norm2(const ScalarField2D& a) { return std::sqrt(dot(a, a)); }
double norm2(const VectorField2D& a) { return std::sqrt(dot(a, a)); }
double norm2(const TensorField2D& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const ScalarField2D& a) {
    double m = 0.0;
    for (double v : a.values()) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(const ScalarField2D& a) {
    return std::all_of(a.values().begin(), a.values().end(), [](double v) { return std::isfinite(v); });
}
bool all_finite(const VectorField2D& a) { return all_finite(a.x) && all_finite(a.y); }
bool all_finite(const TensorField2D& a) {
    return all_finite(a.xx) && all_finite(a.xy) && all_finite(a.yx) && all_finite(a.yy);
}

} // namespace levelsurf
