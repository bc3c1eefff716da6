#include "manifest.hpp"

#include <fstream>

#include "levelsurf/error.hpp"
#include "levelsurf/io.hpp"

namespace levelsurf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("manifest key '") + key + "': " + e.what());
    }
}

const json& object_at(const json& doc, const char* key) {
    static const json empty = json::object();
    if (!doc.contains(key)) return empty;
    const json& v = doc.at(key);
    if (!v.is_object()) throw ParseError(std::string("manifest key '") + key + "' must be an object");
    return v;
}

std::vector<fs::path> path_list(const json& obj, const char* key, const fs::path& base) {
    std::vector<fs::path> out;
    if (!obj.contains(key)) return out;
    const json& v = obj.at(key);
    if (v.is_string()) {
        out.push_back(resolve(base, v.get<std::string>()));
    } else if (v.is_array()) {
        for (const json& e : v) {
            if (!e.is_string()) throw ParseError(std::string("manifest key '") + key + "' must list path strings");
            out.push_back(resolve(base, e.get<std::string>()));
        }
    } else {
        throw ParseError(std::string("manifest key '") + key + "' must be a path or a list of paths");
    }
    return out;
}

WeightSpec parse_weight(const json& weights, const char* key, WeightSpec fallback, const fs::path& base) {
    if (!weights.contains(key)) return fallback;
    const json& v = weights.at(key);
    WeightSpec w;
    if (v.is_number()) {
        w.base = v.get<double>();
        return w;
    }
    if (!v.is_object()) throw ParseError(std::string("weight '") + key + "' must be a number or an object");
    if (v.contains("field")) {
        if (!v.at("field").is_string()) throw ParseError(std::string("weight '") + key + "': field must be a path");
        w.field = resolve(base, v.at("field").get<std::string>());
    }
    w.base = get_or<double>(v, "base", 0.0);
    if (v.contains("regions")) {
        if (!v.at("regions").is_array()) throw ParseError(std::string("weight '") + key + "': regions must be a list");
        for (const json& r : v.at("regions")) {
            if (!r.is_object() || !r.contains("mask") || !r.contains("value") || !r.at("mask").is_string() ||
                !r.at("value").is_number()) {
                throw ParseError(std::string("weight '") + key + "': each region needs a mask path and a value");
            }
            w.regions.push_back({resolve(base, r.at("mask").get<std::string>()), r.at("value").get<double>()});
        }
    }
    return w;
}

} // namespace

ScalarField2D WeightSpec::materialize(const Grid2D& grid) const {
    ScalarField2D out = field ? read_field_csv(*field) : ScalarField2D(grid, base);
    require_same_grid(grid, out.grid(), "weight field");
    for (const Region& r : regions) {
        const Mask2D m = read_mask(r.mask, grid);
        for (std::size_t k = 0; k < out.size(); ++k) {
            if (m[k]) out[k] = r.value;
        }
    }
    return out;
}

std::vector<fs::path> RunManifest::inputs() const {
    std::vector<fs::path> out = line_files;
    out.insert(out.end(), point_files.begin(), point_files.end());
    if (ground_truth) out.push_back(*ground_truth);
    for (const WeightSpec* w : {&g, &h, &alpha, &theta}) {
        if (w->field) out.push_back(*w->field);
        for (const auto& r : w->regions) out.push_back(r.mask);
    }
    return out;
}

std::string to_string(SignStrategy s) {
    switch (s) {
    case SignStrategy::given: return "given";
    case SignStrategy::global: return "global";
    case SignStrategy::adaptive: return "adaptive";
    }
    return "given";
}

SignStrategy parse_sign_strategy(const std::string& s) {
    if (s == "given") return SignStrategy::given;
    if (s == "global") return SignStrategy::global;
    if (s == "adaptive") return SignStrategy::adaptive;
    throw InvalidArgument("unknown sign strategy '" + s + "' (expected given, global or adaptive)");
}

RunManifest parse_manifest(const json& doc, const fs::path& base_dir) {
    if (!doc.is_object()) throw ParseError("manifest must be a JSON object");
    RunManifest m;

    const json& grid = object_at(doc, "grid");
    if (!grid.contains("nx") || !grid.contains("ny")) throw ParseError("manifest needs grid.nx and grid.ny");
    m.nx = get_or<int>(grid, "nx", 0);
    m.ny = get_or<int>(grid, "ny", 0);
    if (m.nx < 16 || m.ny < 16) throw InvalidArgument("grid size must be at least 16 x 16");

    const json& in = object_at(doc, "inputs");
    m.line_files = path_list(in, "lines", base_dir);
    m.point_files = path_list(in, "points", base_dir);
    if (m.line_files.empty() && m.point_files.empty()) {
        throw InvalidArgument("manifest names no inputs (inputs.lines or inputs.points)");
    }
    m.point_ordering = get_or<std::string>(in, "ordering", m.point_ordering);
    if (m.point_ordering != "greedy" && m.point_ordering != "isotropic") {
        throw InvalidArgument("inputs.ordering must be greedy or isotropic");
    }
    m.connect_threshold = get_or<double>(in, "connect_threshold", m.connect_threshold);
    if (!(m.connect_threshold > 0.0)) throw InvalidArgument("inputs.connect_threshold must be positive");
    if (in.contains("ground_truth")) {
        m.ground_truth = resolve(base_dir, get_or<std::string>(in, "ground_truth", ""));
    }

    const json& w = object_at(doc, "weights");
    m.g = parse_weight(w, "g", m.g, base_dir);
    m.h = parse_weight(w, "h", m.h, base_dir);
    m.alpha = parse_weight(w, "alpha", m.alpha, base_dir);
    m.theta = parse_weight(w, "theta", m.theta, base_dir);

    const json& s = object_at(doc, "signs");
    m.signs = parse_sign_strategy(get_or<std::string>(s, "strategy", "given"));
    m.eps_threshold = get_or<double>(s, "eps_threshold", m.eps_threshold);
    m.max_rounds = get_or<int>(s, "max_rounds", m.max_rounds);
    if (!(m.eps_threshold > 0.0)) throw InvalidArgument("signs.eps_threshold must be positive");
    if (m.max_rounds < 1) throw InvalidArgument("signs.max_rounds must be at least 1");

    const json& sv = object_at(doc, "solver");
    SolverConfig& c = m.solver;
    c.c_Q = get_or<double>(sv, "c_Q", c.c_Q);
    c.c_P = get_or<double>(sv, "c_P", c.c_P);
    c.c_E = get_or<double>(sv, "c_E", c.c_E);
    c.outer_max = get_or<int>(sv, "outer_max", c.outer_max);
    c.inner_L = get_or<int>(sv, "L", c.inner_L);
    c.tol_rel_change = get_or<double>(sv, "tol", c.tol_rel_change);
    c.stop_patience = get_or<int>(sv, "stop_patience", c.stop_patience);
    c.pcg_tol = get_or<double>(sv, "pcg_tol", c.pcg_tol);
    c.pcg_max = get_or<int>(sv, "pcg_max", c.pcg_max);
    if (doc.contains("matching_mode")) {
        c.matching_mode = parse_matching_mode(get_or<std::string>(doc, "matching_mode", "normal"));
    }
    c.validate();

    const json& out = object_at(doc, "outputs");
    m.outputs.dir = resolve(base_dir, get_or<std::string>(out, "dir", "."));
    m.outputs.height_csv = get_or<std::string>(out, "height_csv", m.outputs.height_csv);
    m.outputs.height_pgm = get_or<std::string>(out, "height_pgm", m.outputs.height_pgm);
    m.outputs.mesh_obj = get_or<std::string>(out, "mesh_obj", m.outputs.mesh_obj);
    m.outputs.log_jsonl = get_or<std::string>(out, "log_jsonl", m.outputs.log_jsonl);
    m.outputs.summary_json = get_or<std::string>(out, "summary_json", m.outputs.summary_json);
    m.outputs.normals_csv = get_or<std::string>(out, "normals_csv", m.outputs.normals_csv);
    m.outputs.signs_report_json = get_or<std::string>(out, "signs_report_json", m.outputs.signs_report_json);

    m.seed = get_or<std::uint64_t>(doc, "seed", 0);
    return m;
}

RunManifest load_manifest(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open manifest " + path.string());
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ParseError("malformed manifest " + path.string() + ": " + e.what());
    }
    return parse_manifest(doc, path.parent_path());
}

void require_inputs_exist(const RunManifest& m) {
    for (const fs::path& p : m.inputs()) {
        if (!fs::exists(p)) throw IoError("input not found: " + p.string());
    }
}

json to_json(const WeightSpec& w) {
    if (w.is_constant()) return w.base;
    json j = json::object();
    if (w.field) j["field"] = w.field->string();
    j["base"] = w.base;
    if (!w.regions.empty()) {
        j["regions"] = json::array();
        for (const auto& r : w.regions) j["regions"].push_back({{"mask", r.mask.string()}, {"value", r.value}});
    }
    return j;
}

} // namespace levelsurf::cli
