#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "levelsurf/error.hpp"

namespace levelsurf {

/// Cell-centred rectangular grid with unit spacing. Cell (i, j) has
/// x-index i in [0, nx) and y-index j in [0, ny); storage is row-major
/// (y outer, x inner).
class Grid2D {
public:
    static constexpr double spacing = 1.0;

    Grid2D(int nx, int ny);

    [[nodiscard]] int nx() const noexcept { return nx_; }
    [[nodiscard]] int ny() const noexcept { return ny_; }
    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
    }
    [[nodiscard]] std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
    }
    [[nodiscard]] bool contains(int i, int j) const noexcept {
        return i >= 0 && j >= 0 && i < nx_ && j < ny_;
    }

    friend bool operator==(const Grid2D&, const Grid2D&) = default;

private:
    int nx_;
    int ny_;
};

class ScalarField2D {
public:
    explicit ScalarField2D(Grid2D grid, double fill = 0.0);
    ScalarField2D(Grid2D grid, std::vector<double> values);

    [[nodiscard]] const Grid2D& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

    double& operator()(int i, int j) noexcept { return values_[grid_.index(i, j)]; }
    double operator()(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }
    double& operator[](std::size_t k) noexcept { return values_[k]; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }

    [[nodiscard]] std::span<double> values() noexcept { return values_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double* data() noexcept { return values_.data(); }
    [[nodiscard]] const double* data() const noexcept { return values_.data(); }

    void fill(double v);

    ScalarField2D& operator+=(const ScalarField2D& other);
    ScalarField2D& operator-=(const ScalarField2D& other);
    ScalarField2D& operator*=(double s) noexcept;

    /// this += a * x
    void axpy(double a, const ScalarField2D& x);

    friend bool operator==(const ScalarField2D&, const ScalarField2D&) = default;

private:
    Grid2D grid_;
    std::vector<double> values_;
};

ScalarField2D operator+(ScalarField2D a, const ScalarField2D& b);
ScalarField2D operator-(ScalarField2D a, const ScalarField2D& b);
ScalarField2D operator*(double s, ScalarField2D a);

/// Two-component field, e.g. a discrete gradient.
struct VectorField2D {
    explicit VectorField2D(Grid2D grid, double fill = 0.0) : x(grid, fill), y(grid, fill) {}
    VectorField2D(ScalarField2D x_, ScalarField2D y_);

    [[nodiscard]] const Grid2D& grid() const noexcept { return x.grid(); }

    VectorField2D& operator+=(const VectorField2D& o);
    VectorField2D& operator-=(const VectorField2D& o);
    VectorField2D& operator*=(double s) noexcept;
    void axpy(double a, const VectorField2D& v);

    ScalarField2D x;
    ScalarField2D y;
};

/// 2x2 matrix per cell. Row 0 is (xx, xy), row 1 is (yx, yy); the Jacobian
/// of a vector field E stores grad E_1 in row 0 and grad E_2 in row 1.
struct TensorField2D {
    explicit TensorField2D(Grid2D grid, double fill = 0.0)
        : xx(grid, fill), xy(grid, fill), yx(grid, fill), yy(grid, fill) {}

    [[nodiscard]] const Grid2D& grid() const noexcept { return xx.grid(); }

    TensorField2D& operator+=(const TensorField2D& o);
    TensorField2D& operator-=(const TensorField2D& o);
    TensorField2D& operator*=(double s) noexcept;
    void axpy(double a, const TensorField2D& t);

    ScalarField2D xx;
    ScalarField2D xy;
    ScalarField2D yx;
    ScalarField2D yy;
};

VectorField2D operator-(VectorField2D a, const VectorField2D& b);
TensorField2D operator-(TensorField2D a, const TensorField2D& b);

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what);

// Euclidean inner products and norms over all cells and components.
double dot(const ScalarField2D& a, const ScalarField2D& b);
double dot(const VectorField2D& a, const VectorField2D& b);
double dot(const TensorField2D& a, const TensorField2D& b);
double norm2(const ScalarField2D& a);
double norm2(const VectorField2D& a);
double norm2(const TensorField2D& a);
double norm_inf(const ScalarField2D& a);

bool all_finite(const ScalarField2D& a);
bool all_finite(const VectorField2D& a);
bool all_finite(const TensorField2D& a);

} // namespace levelsurf
