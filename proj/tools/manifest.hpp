#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levelsurf/fields.hpp"
#include "levelsurf/model.hpp"

namespace levelsurf::cli {

/// A weight field: a constant, a field CSV, or a base value overridden on
/// the cells of region masks (later regions win).
struct WeightSpec {
    struct Region {
        std::filesystem::path mask;
        double value = 0.0;
    };
    double base = 0.0;
    std::optional<std::filesystem::path> field;
    std::vector<Region> regions;

    [[nodiscard]] bool is_constant() const { return !field && regions.empty(); }
    [[nodiscard]] ScalarField2D materialize(const Grid2D& grid) const;
};

enum class SignStrategy { given, global, adaptive };

struct OutputPaths {
    std::filesystem::path dir = ".";
    std::string height_csv = "height.csv";
    std::string height_pgm = "height.pgm";
    std::string mesh_obj = "height.obj";
    std::string log_jsonl = "convergence.jsonl";
    std::string summary_json = "summary.json";
    std::string normals_csv = "normals.csv";
    std::string signs_report_json = "signs_report.json";

    [[nodiscard]] std::filesystem::path at(const std::string& name) const { return dir / name; }
};

struct RunManifest {
    int nx = 0;
    int ny = 0;
    std::vector<std::filesystem::path> line_files;
    std::vector<std::filesystem::path> point_files;
    /// "greedy" chains point clouds directly; "isotropic" orders them along
    /// contours of a height-only presolve.
    std::string point_ordering = "greedy";
    double connect_threshold = 2.0;
    std::optional<std::filesystem::path> ground_truth;
    WeightSpec g{1.0, {}, {}};
    WeightSpec h{0.0, {}, {}};
    WeightSpec alpha{0.0, {}, {}};
    WeightSpec theta{1e5, {}, {}};
    SignStrategy signs = SignStrategy::given;
    double eps_threshold = 0.2;
    int max_rounds = 50;
    SolverConfig solver;
    OutputPaths outputs;
    std::uint64_t seed = 0;

    /// Every input path named by the manifest.
    [[nodiscard]] std::vector<std::filesystem::path> inputs() const;
};

/// Parses a manifest document; relative paths are resolved against base_dir.
/// Throws ParseError for malformed JSON or wrongly typed entries and
/// InvalidArgument for values that violate the manifest invariants.
RunManifest parse_manifest(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunManifest load_manifest(const std::filesystem::path& path);

/// Throws IoError naming the first input that does not exist.
void require_inputs_exist(const RunManifest& m);

nlohmann::json to_json(const WeightSpec& w);
std::string to_string(SignStrategy s);
SignStrategy parse_sign_strategy(const std::string& s);

} // namespace levelsurf::cli
