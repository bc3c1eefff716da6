#include "levelsurf/operators.hpp"

namespace levelsurf {

VectorField2D gradient(const ScalarField2D& f) {
    const Grid2D& g = f.grid();
    const int nx = g.nx();
    const int ny = g.ny();
    VectorField2D out(g);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double c = f(i, j);
            out.x(i, j) = (i + 1 < nx) ? f(i + 1, j) - c : 0.0;
            out.y(i, j) = (j + 1 < ny) ? f(i, j + 1) - c : 0.0;
        }
    }
    return out;
}

ScalarField2D divergence(const VectorField2D& v) {
    const Grid2D& g = v.grid();
    const int nx = g.nx();
    const int ny = g.ny();
    ScalarField2D out(g);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            double dx;
            if (i == 0) {
                dx = v.x(i, j);
            } else if (i == nx - 1) {
                dx = -v.x(i - 1, j);
            } else {
                dx = v.x(i, j) - v.x(i - 1, j);
            }
            double dy;
            if (j == 0) {
                dy = v.y(i, j);
            } else if (j == ny - 1) {
                dy = -v.y(i, j - 1);
            } else {
                dy = v.y(i, j) - v.y(i, j - 1);
            }
            out(i, j) = dx + dy;
        }
    }
    return out;
}

TensorField2D jacobian(const VectorField2D& v) {
    TensorField2D out(v.grid());
    VectorField2D g1 = gradient(v.x);
    VectorField2D g2 = gradient(v.y);
    out.xx = std::move(g1.x);
    out.xy = std::move(g1.y);
    out.yx = std::move(g2.x);
    out.yy = std::move(g2.y);
    return out;
}

VectorField2D tensor_divergence(const TensorField2D& t) {
    ScalarField2D d1 = divergence(VectorField2D(t.xx, t.xy));
    ScalarField2D d2 = divergence(VectorField2D(t.yx, t.yy));
    return VectorField2D(std::move(d1), std::move(d2));
}

ScalarField2D laplacian(const ScalarField2D& f) {
    const Grid2D& g = f.grid();
    const int nx = g.nx();
    const int ny = g.ny();
    ScalarField2D out(g);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double c = f(i, j);
            double s = 0.0;
            if (i > 0) s += f(i - 1, j) - c;
            if (i + 1 < nx) s += f(i + 1, j) - c;
            if (j > 0) s += f(i, j - 1) - c;
            if (j + 1 < ny) s += f(i, j + 1) - c;
            out(i, j) = s;
        }
    }
    return out;
}

VectorField2D central_gradient(const ScalarField2D& f) {
    const Grid2D& g = f.grid();
    const int nx = g.nx();
    const int ny = g.ny();
    VectorField2D out(g);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            if (i == 0) {
                out.x(i, j) = f(1, j) - f(0, j);
            } else if (i == nx - 1) {
                out.x(i, j) = f(i, j) - f(i - 1, j);
            } else {
                out.x(i, j) = 0.5 * (f(i + 1, j) - f(i - 1, j));
            }
            if (j == 0) {
                out.y(i, j) = f(i, 1) - f(i, 0);
            } else if (j == ny - 1) {
                out.y(i, j) = f(i, j) - f(i, j - 1);
            } else {
                out.y(i, j) = 0.5 * (f(i, j + 1) - f(i, j - 1));
            }
        }
    }
    return out;
}

} // namespace levelsurf
