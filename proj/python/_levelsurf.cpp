#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "levelsurf/alm.hpp"
#include "levelsurf/geometry.hpp"
#include "levelsurf/onedim.hpp"
#include "levelsurf/signs.hpp"
#include "levelsurf/spectral.hpp"
#include "levelsurf/synth.hpp"

namespace py = pybind11;
using namespace levelsurf;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Fields cross the boundary as (ny, nx) arrays: row j holds y-index j.
ScalarField2D to_field(const Array& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2D array of shape (ny, nx)");
    const Grid2D grid(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    return ScalarField2D(grid, std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const ScalarField2D& f) {
    Array a({f.grid().ny(), f.grid().nx()});
    std::copy(f.data(), f.data() + f.size(), a.mutable_data());
    return a;
}

Array points_array(const std::vector<Point2>& pts) {
    Array a({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
    double* d = a.mutable_data();
    for (std::size_t k = 0; k < pts.size(); ++k) {
        d[2 * k] = pts[k].x;
        d[2 * k + 1] = pts[k].y;
    }
    return a;
}

std::vector<Point2> to_points(const Array& a, const char* what) {
    if (a.ndim() != 2 || a.shape(1) != 2) throw py::value_error(std::string(what) + " must have shape (m, 2)");
    std::vector<Point2> pts(static_cast<std::size_t>(a.shape(0)));
    for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = {a.data()[2 * k], a.data()[2 * k + 1]};
    return pts;
}

py::dict line_dict(const LevelLine& l) {
    py::dict d;
    d["level"] = l.level;
    d["points"] = points_array(l.points);
    d["closed"] = l.closed;
    d["normals"] = l.normals.empty() ? py::object(py::none()) : py::object(points_array(l.normals));
    return d;
}

LevelLine to_line(const py::handle& h) {
    const py::dict d = py::reinterpret_borrow<py::dict>(h);
    LevelLine l;
    l.level = d["level"].cast<double>();
    l.points = to_points(d["points"].cast<Array>(), "points");
    if (d.contains("closed")) l.closed = d["closed"].cast<bool>();
    if (d.contains("normals") && !d["normals"].is_none()) {
        l.normals = to_points(d["normals"].cast<Array>(), "normals");
        if (l.normals.size() != l.points.size()) throw py::value_error("normals and points differ in length");
        for (const Point2& n : l.normals) l.tangents.push_back({n.y, -n.x});
    }
    return l;
}

FieldOrConstant weight(const py::object& o) {
    if (py::isinstance<py::float_>(o) || py::isinstance<py::int_>(o)) return o.cast<double>();
    return to_field(o.cast<Array>());
}

ScalarField2D weight_field(const py::object& o, const Grid2D& grid) {
    FieldOrConstant w = weight(o);
    if (auto* v = std::get_if<double>(&w)) return ScalarField2D(grid, *v);
    ScalarField2D f = std::get<ScalarField2D>(std::move(w));
    require_same_grid(grid, f.grid(), "weight");
    return f;
}

py::dict records_dict(const Diagnostics& d) {
    std::vector<double> energy, r_P, r_E, r_Q, rel;
    for (const IterationRecord& r : d.records) {
        energy.push_back(r.energy);
        r_P.push_back(r.r_P);
        r_E.push_back(r.r_E);
        r_Q.push_back(r.r_Q);
        rel.push_back(r.rel_change);
    }
    py::dict out;
    out["energy"] = energy;
    out["r_P"] = r_P;
    out["r_E"] = r_E;
    out["r_Q"] = r_Q;
    out["rel_change"] = rel;
    return out;
}

py::dict reconstruct(const py::list& lines, int nx, int ny, const py::object& g, const py::object& h,
                     const py::object& alpha, const py::object& theta, double c_Q, double c_P, double c_E,
                     int outer_max, double tol, const std::string& matching_mode, const std::string& signs,
                     double eps_threshold) {
    const Grid2D grid(nx, ny);
    std::vector<LevelLine> ll;
    for (const py::handle& l : lines) ll.push_back(to_line(l));
    Rasterization r = rasterize_constraints(ll, weight(theta), weight(alpha), grid);
    const RegularizerWeights w{weight_field(g, grid), weight_field(h, grid)};
    SolverConfig cfg;
    cfg.c_Q = c_Q;
    cfg.c_P = c_P;
    cfg.c_E = c_E;
    cfg.outer_max = outer_max;
    cfg.tol_rel_change = tol;
    cfg.matching_mode = parse_matching_mode(matching_mode);

    py::dict out;
    ConstraintSet cs = r.constraints;
    {
        py::gil_scoped_release release;
        if (signs == "global") {
            cs = determine_signs_global(cs, w, cfg).constraints;
        } else if (signs == "adaptive") {
            cs = determine_signs_adaptive(cs, w, cfg, eps_threshold).constraints;
        } else if (signs != "given") {
            throw InvalidArgument("signs must be given, global or adaptive");
        }
    }
    SolveResult res = [&] {
        py::gil_scoped_release release;
        return solve(cs, w, cfg);
    }();
    out["I"] = to_array(res.I);
    out["iterations"] = res.diagnostics.records.size();
    out["converged"] = res.diagnostics.converged;
    out["energy"] = res.diagnostics.records.empty() ? 0.0 : res.diagnostics.records.back().energy;
    out["history"] = records_dict(res.diagnostics);
    out["collisions"] = r.collisions.size();
    return out;
}

py::dict synthetic_case(const std::string& name, int n, int contour_count) {
    const SyntheticCase c = make_case(name, n, contour_count);
    py::list lines;
    for (const LevelLine& l : c.lines) lines.append(line_dict(l));
    py::dict d;
    d["name"] = c.name;
    d["ground_truth"] = to_array(c.ground_truth);
    d["uphill_x"] = to_array(c.uphill.x);
    d["uphill_y"] = to_array(c.uphill.y);
    d["levels"] = c.level_values;
    d["lines"] = lines;
    d["g"] = to_array(c.weights.g);
    d["h"] = to_array(c.weights.h);
    d["alpha"] = to_array(c.alpha);
    d["theta"] = to_array(c.theta);
    d["c_Q"] = c.config.c_Q;
    d["c_P"] = c.config.c_P;
    d["c_E"] = c.config.c_E;
    d["provenance"] = c.provenance;
    return d;
}

py::list contours(const Array& field, const std::vector<double>& levels) {
    py::list out;
    for (const LevelLine& l : extract_contours(to_field(field), levels)) out.append(line_dict(l));
    return out;
}

std::vector<double> korder(int n, const std::vector<std::pair<int, double>>& heights,
                           const std::vector<std::pair<int, int>>& vectors, int k, double g, double alpha,
                           double theta) {
    Profile1D p;
    p.n = n;
    p.values.assign(static_cast<std::size_t>(n), 0.0);
    for (auto [i, v] : heights) p.heights.push_back({i, v, theta});
    for (auto [i, s] : vectors) p.vectors.push_back({i, s, alpha});
    return solve_1d_korder(p, k, g, alpha, theta).values;
}

Array helmholtz(const Array& F, double lambda) {
    const ScalarField2D f = to_field(F);
    const SpectralPlan plan(f.grid());
    return to_array(solve_modified_helmholtz(f, lambda, plan));
}

} // namespace

PYBIND11_MODULE(_levelsurf, m) {
    m.doc() = "Height-map reconstruction from level lines with first/second-order TV and vector matching";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);
    py::register_exception<UnsupportedConfiguration>(m, "UnsupportedConfiguration", PyExc_ValueError);
    py::register_exception<SingularOperator>(m, "SingularOperator", PyExc_RuntimeError);
    py::register_exception<SolverBreakdown>(m, "SolverBreakdown", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    m.def("reconstruct", &reconstruct, py::arg("lines"), py::arg("nx"), py::arg("ny"), py::arg("g") = 1.0,
          py::arg("h") = 0.0, py::arg("alpha") = 0.0, py::arg("theta") = 1e5, py::arg("c_Q") = 1.0,
          py::arg("c_P") = 1.0, py::arg("c_E") = 1.0, py::arg("outer_max") = 2000, py::arg("tol") = 1e-7,
          py::arg("matching_mode") = "normal", py::arg("signs") = "given", py::arg("eps_threshold") = 0.2,
          "Rasterize level lines (dicts with level, points, optional normals) and reconstruct the height map. "
          "Weights are floats or (ny, nx) arrays.");
    m.def("synthetic_case", &synthetic_case, py::arg("name"), py::arg("n") = 128, py::arg("contour_count") = 4,
          "Analytic test case: ramp, cone, semisphere or pyramid, with preset weights.");
    m.def("extract_contours", &contours, py::arg("field"), py::arg("levels"),
          "Marching-squares level lines of a (ny, nx) field.");
    m.def("solve_1d_korder", &korder, py::arg("n"), py::arg("heights"), py::arg("vectors"), py::arg("k"),
          py::arg("g") = 1.0, py::arg("alpha") = 1.0, py::arg("theta") = 10.0,
          "1D model g |D^k I|_1 - alpha s D I + theta (I - f)^2; heights are (index, value), vectors (index, sign).");
    m.def("solve_modified_helmholtz", &helmholtz, py::arg("F"), py::arg("lam"),
          "Solve (Laplacian - lam) u = F with homogeneous Neumann boundaries.");
    m.def(
        "rmse", [](const Array& a, const Array& b) { return rmse(to_field(a), to_field(b)); }, py::arg("a"),
        py::arg("b"));
}
