#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "levelsurf/alm.hpp"
#include "levelsurf/error.hpp"
#include "levelsurf/geometry.hpp"
#include "levelsurf/io.hpp"
#include "levelsurf/signs.hpp"
#include "levelsurf/synth.hpp"
#include "manifest.hpp"

namespace levelsurf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void setup_logging() {
    auto logger = spdlog::get("levelsurf");
    if (!logger) {
        logger = spdlog::stderr_logger_mt("levelsurf");
        spdlog::set_default_logger(logger);
    }
    const char* env = std::getenv("LEVELSURF_LOG");
    logger->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

void write_json(const fs::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

FieldOrConstant field_or_constant(const WeightSpec& w, const Grid2D& grid) {
    if (w.is_constant()) return w.base;
    return w.materialize(grid);
}

// Lines from line files plus chained point clouds, with normals computed for
// point-cloud chains of two or more distinct points.
std::vector<LevelLine> gather_lines(const RunManifest& m, const Grid2D& grid, const RegularizerWeights& weights) {
    std::vector<LevelLine> lines;
    for (const fs::path& p : m.line_files) {
        auto more = read_lines_csv(p);
        spdlog::info("read {} line(s) from {}", more.size(), p.string());
        lines.insert(lines.end(), more.begin(), more.end());
    }
    std::vector<PointCloudSample> samples;
    for (const fs::path& p : m.point_files) {
        auto more = read_points_csv(p);
        samples.insert(samples.end(), more.begin(), more.end());
    }
    if (samples.empty()) return lines;

    std::vector<LevelLine> chained;
    if (m.point_ordering == "greedy") {
        chained = assemble_level_lines(samples, m.connect_threshold);
    } else {
        std::vector<LevelLine> singles;
        for (const PointCloudSample& s : samples) singles.push_back({s.level, {s.position}, false, {}, {}});
        singles.insert(singles.end(), lines.begin(), lines.end());
        Rasterization r = rasterize_constraints(singles, field_or_constant(m.theta, grid), 0.0, grid);
        SolverConfig cfg = m.solver;
        cfg.matching_mode = MatchingMode::none;
        const SolveResult pre = solve(r.constraints, weights, cfg);
        IsotropicOrdering ord = order_via_isotropic(samples, pre.I, m.connect_threshold);
        if (!ord.unordered.empty()) {
            spdlog::warn("{} sample(s) lie off every isotropic contour and are kept as single points",
                         ord.unordered.size());
        }
        chained = std::move(ord.lines);
        for (const PointCloudSample& s : ord.unordered) chained.push_back({s.level, {s.position}, false, {}, {}});
    }
    for (LevelLine& line : chained) {
        try {
            line = normals_from_level_line(std::move(line));
        } catch (const InvalidArgument&) {
            line.tangents.clear();
            line.normals.clear();
        }
    }
    spdlog::info("chained {} point sample(s) into {} line(s)", samples.size(), chained.size());
    lines.insert(lines.end(), chained.begin(), chained.end());
    return lines;
}

struct Problem {
    Grid2D grid;
    RegularizerWeights weights;
    ConstraintSet constraints;
    std::size_t collisions = 0;
};

Problem assemble(const RunManifest& m) {
    require_inputs_exist(m);
    const Grid2D grid(m.nx, m.ny);
    RegularizerWeights weights{m.g.materialize(grid), m.h.materialize(grid)};
    if (auto issues = validate(weights); !issues.empty()) throw InvalidArgument(issues.front());
    std::vector<LevelLine> lines = gather_lines(m, grid, weights);
    Rasterization r = rasterize_constraints(lines, field_or_constant(m.theta, grid), field_or_constant(m.alpha, grid), grid);
    if (!r.collisions.empty()) {
        spdlog::warn("{} line point(s) fell on cells already holding another level; first writer kept",
                     r.collisions.size());
    }
    return {grid, std::move(weights), std::move(r.constraints), r.collisions.size()};
}

json sign_cells_json(const SignResult& s) {
    json cells = json::array();
    for (const CellSign& c : s.cells) {
        cells.push_back({{"i", c.i},
                         {"j", c.j},
                         {"rho", c.rho},
                         {"eps", c.eps},
                         {"admitted_round", c.admitted_round},
                         {"flipped", c.flipped}});
    }
    return cells;
}

SignResult run_signs(const RunManifest& m, const Problem& p, SignStrategy strategy) {
    if (strategy == SignStrategy::adaptive) {
        return determine_signs_adaptive(p.constraints, p.weights, m.solver, m.eps_threshold, m.max_rounds);
    }
    return determine_signs_global(p.constraints, p.weights, m.solver);
}

void write_normals_csv(const fs::path& path, const ConstraintSet& c) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "i,j,nx,ny,alpha\n";
    char buf[128];
    const Grid2D& grid = c.grid();
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) {
            if (!c.gamma_mask(i, j)) continue;
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", i, j, c.normals.x(i, j), c.normals.y(i, j),
                          c.alpha_hat(i, j));
            out << buf;
        }
    }
    if (!out) throw IoError("failed writing " + path.string());
}

json record_json(const IterationRecord& r) {
    return {{"iteration", r.iteration},           {"energy", r.energy},
            {"r_P", r.r_P},                       {"r_E", r.r_E},
            {"r_Q", r.r_Q},                       {"rel_change", r.rel_change},
            {"pcg_iterations", r.pcg_iterations}, {"pcg_converged", r.pcg_converged}};
}

struct Overrides {
    std::optional<std::string> out_dir;
    std::optional<int> outer_max;
    std::optional<std::string> matching_mode;
    std::optional<std::string> strategy;
    std::optional<double> eps_threshold;
    std::optional<double> c_Q;
    std::optional<double> c_P;
    std::optional<double> c_E;
    std::optional<std::uint64_t> seed;

    void apply(RunManifest& m) const {
        if (out_dir) m.outputs.dir = *out_dir;
        if (outer_max) m.solver.outer_max = *outer_max;
        if (matching_mode) m.solver.matching_mode = parse_matching_mode(*matching_mode);
        if (strategy) m.signs = parse_sign_strategy(*strategy);
        if (eps_threshold) m.eps_threshold = *eps_threshold;
        if (c_Q) m.solver.c_Q = *c_Q;
        if (c_P) m.solver.c_P = *c_P;
        if (c_E) m.solver.c_E = *c_E;
        if (seed) m.seed = *seed;
        m.solver.validate();
        if (!(m.eps_threshold > 0.0)) throw InvalidArgument("eps threshold must be positive");
    }
};

int cmd_reconstruct(const std::string& manifest_path, const Overrides& ov) {
    const auto t0 = std::chrono::steady_clock::now();
    RunManifest m = load_manifest(manifest_path);
    ov.apply(m);
    Problem p = assemble(m);
    fs::create_directories(m.outputs.dir);

    json signs_info = {{"strategy", to_string(m.signs)}};
    if (m.signs != SignStrategy::given) {
        const SignResult s = run_signs(m, p, m.signs);
        for (const std::string& w : s.warnings) spdlog::warn("{}", w);
        signs_info["rounds"] = s.rounds;
        signs_info["complete"] = s.complete;
        signs_info["warnings"] = s.warnings;
        p.constraints = s.constraints;
    }

    std::ofstream log(m.outputs.at(m.outputs.log_jsonl));
    if (!log) throw IoError("cannot open " + m.outputs.at(m.outputs.log_jsonl).string() + " for writing");
    const SolveResult res = solve(p.constraints, p.weights, m.solver, std::nullopt, [&](const IterationRecord& r) {
        log << record_json(r).dump() << '\n';
        if (r.iteration % 100 == 0) spdlog::debug("iteration {} energy {:.10g}", r.iteration, r.energy);
    });
    log.close();
    if (!log) throw IoError("failed writing " + m.outputs.at(m.outputs.log_jsonl).string());

    write_field_csv(m.outputs.at(m.outputs.height_csv), res.I);
    const PgmScaling scale = write_pgm16(m.outputs.at(m.outputs.height_pgm), res.I);
    write_obj(m.outputs.at(m.outputs.mesh_obj), res.I);

    const Diagnostics& d = res.diagnostics;
    const IterationRecord last = d.records.empty() ? IterationRecord{} : d.records.back();
    json summary = {
        {"grid", {{"nx", m.nx}, {"ny", m.ny}}},
        {"iterations", static_cast<int>(d.records.size())},
        {"converged", d.converged},
        {"pcg_failures", d.pcg_failures},
        {"final_energy", last.energy},
        {"residuals", {{"r_P", last.r_P}, {"r_E", last.r_E}, {"r_Q", last.r_Q}}},
        {"rel_change", last.rel_change},
        {"sigma_cells", p.constraints.sigma_mask.count()},
        {"gamma_cells", p.constraints.gamma_mask.count()},
        {"raster_collisions", p.collisions},
        {"signs", signs_info},
        {"matching_mode", to_string(m.solver.matching_mode)},
        {"penalties", {{"c_Q", m.solver.c_Q}, {"c_P", m.solver.c_P}, {"c_E", m.solver.c_E}}},
        {"pgm_scaling", {{"min", scale.min}, {"max", scale.max}}},
        {"seed", m.seed},
    };
    if (m.ground_truth) {
        const ScalarField2D gt = read_field_csv(*m.ground_truth);
        summary["rmse_vs_ground_truth"] = rmse(res.I, gt);
        summary["max_abs_err_vs_ground_truth"] = max_abs_err(res.I, gt);
    }
    summary["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_json(m.outputs.at(m.outputs.summary_json), summary);
    spdlog::info("reconstruction finished after {} iteration(s), energy {:.10g}", d.records.size(), last.energy);
    if (!d.converged) spdlog::warn("stopping rule not met within {} outer iterations", m.solver.outer_max);
    return exit_ok;
}

int cmd_signs(const std::string& manifest_path, const Overrides& ov) {
    RunManifest m = load_manifest(manifest_path);
    ov.apply(m);
    Problem p = assemble(m);
    fs::create_directories(m.outputs.dir);
    const SignStrategy strategy = m.signs == SignStrategy::adaptive ? SignStrategy::adaptive : SignStrategy::global;
    const SignResult s = run_signs(m, p, strategy);
    for (const std::string& w : s.warnings) spdlog::warn("{}", w);
    write_normals_csv(m.outputs.at(m.outputs.normals_csv), s.constraints);
    write_field_csv(m.outputs.at(m.outputs.height_csv), s.surface);
    json report = {{"strategy", to_string(strategy)},
                   {"eps_threshold", m.eps_threshold},
                   {"rounds", s.rounds},
                   {"complete", s.complete},
                   {"warnings", s.warnings},
                   {"cells", sign_cells_json(s)}};
    write_json(m.outputs.at(m.outputs.signs_report_json), report);
    return exit_ok;
}

json weight_json(const ScalarField2D& f, const fs::path& dir, const std::string& name) {
    bool constant = true;
    for (std::size_t k = 1; k < f.size() && constant; ++k) constant = f[k] == f[0];
    if (constant) return f[0];
    write_field_csv(dir / (name + ".csv"), f);
    return {{"field", name + ".csv"}};
}

int cmd_synth(const std::string& name, int n, int contours, const std::string& out_dir) {
    const SyntheticCase c = make_case(name, n, contours);
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write_field_csv(dir / "ground_truth.csv", c.ground_truth);
    json line_files = json::array();
    for (std::size_t k = 0; k < c.lines.size(); ++k) {
        const std::string file = "line_" + std::to_string(k) + ".csv";
        write_lines_csv(dir / file, std::span<const LevelLine>(&c.lines[k], 1));
        line_files.push_back(file);
    }
    json manifest = {
        {"grid", {{"nx", n}, {"ny", n}}},
        {"inputs", {{"lines", line_files}, {"ground_truth", "ground_truth.csv"}}},
        {"weights",
         {{"g", weight_json(c.weights.g, dir, "g")},
          {"h", weight_json(c.weights.h, dir, "h")},
          {"alpha", weight_json(c.alpha, dir, "alpha")},
          {"theta", weight_json(c.theta, dir, "theta")}}},
        {"matching_mode", to_string(c.config.matching_mode)},
        {"signs", {{"strategy", "given"}}},
        {"solver",
         {{"c_Q", c.config.c_Q},
          {"c_P", c.config.c_P},
          {"c_E", c.config.c_E},
          {"outer_max", c.config.outer_max},
          {"L", c.config.inner_L},
          {"tol", c.config.tol_rel_change},
          {"stop_patience", c.config.stop_patience},
          {"pcg_tol", c.config.pcg_tol}}},
        {"outputs", {{"dir", "out"}}},
        {"seed", 0},
        {"provenance", c.provenance},
    };
    write_json(dir / "manifest.json", manifest);
    spdlog::info("wrote case {} ({} line file(s)) to {}", name, c.lines.size(), dir.string());
    return exit_ok;
}

int cmd_contours(const std::string& field_csv, const std::vector<double>& levels, const std::string& out) {
    if (!fs::exists(field_csv)) throw IoError("input not found: " + field_csv);
    const ScalarField2D f = read_field_csv(field_csv);
    const std::vector<LevelLine> lines = extract_contours(f, levels);
    const fs::path out_path(out);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    write_lines_csv(out_path, lines);
    spdlog::info("traced {} polyline(s) over {} level(s)", lines.size(), levels.size());
    return exit_ok;
}

} // namespace

int run(const std::vector<std::string>& args) {
    setup_logging();
    CLI::App app{"Height-map reconstruction from level lines and direction data", "levelsurf"};
    app.require_subcommand(1);

    Overrides ov;
    std::string manifest;
    auto add_overrides = [&](CLI::App* sub) {
        sub->add_option("manifest", manifest, "Run manifest (JSON)")->required();
        sub->add_option("--out-dir", ov.out_dir, "Output directory (overrides outputs.dir)");
        sub->add_option("--outer-max", ov.outer_max, "Maximum outer iterations");
        sub->add_option("--matching-mode", ov.matching_mode, "normal, tangent or none")
            ->check(CLI::IsMember({"normal", "tangent", "none"}));
        sub->add_option("--signs", ov.strategy, "given, global or adaptive")
            ->check(CLI::IsMember({"given", "global", "adaptive"}));
        sub->add_option("--eps-threshold", ov.eps_threshold, "Admission threshold of the adaptive sign procedure");
        sub->add_option("--c-q", ov.c_Q, "Penalty c_Q");
        sub->add_option("--c-p", ov.c_P, "Penalty c_P");
        sub->add_option("--c-e", ov.c_E, "Penalty c_E");
        sub->add_option("--seed", ov.seed, "Seed recorded with the run");
    };
    CLI::App* rec = app.add_subcommand("reconstruct", "Reconstruct a height map from a manifest");
    add_overrides(rec);
    CLI::App* sig = app.add_subcommand("signs", "Decide normal signs and write a per-cell report");
    add_overrides(sig);

    std::string case_name;
    int n = 128;
    int contours = 4;
    std::string synth_out;
    CLI::App* syn = app.add_subcommand("synth", "Write a synthetic case with its preset manifest");
    syn->add_option("case", case_name, "ramp, cone, semisphere or pyramid")
        ->required()
        ->check(CLI::IsMember({"ramp", "cone", "semisphere", "pyramid"}));
    syn->add_option("-n,--size", n, "Grid size")->check(CLI::Range(16, 4096));
    syn->add_option("--contours", contours, "Semisphere contour count")->check(CLI::IsMember({1, 2, 4, 8}));
    syn->add_option("-o,--out", synth_out, "Output directory")->required();

    std::string field_csv;
    std::vector<double> levels;
    std::string contours_out;
    CLI::App* con = app.add_subcommand("contours", "Trace level lines of a field CSV");
    con->add_option("field", field_csv, "Field CSV (x,y,value)")->required();
    con->add_option("-l,--levels", levels, "Levels, comma separated")->delimiter(',');
    con->add_option("-o,--out", contours_out, "Output lines CSV")->required();

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*rec) return cmd_reconstruct(manifest, ov);
        if (*sig) return cmd_signs(manifest, ov);
        if (*syn) return cmd_synth(case_name, n, contours, synth_out);
        if (*con) return cmd_contours(field_csv, levels, contours_out);
    } catch (const IoError& e) {
        spdlog::error("{}", e.what());
        return exit_io;
    } catch (const fs::filesystem_error& e) {
        spdlog::error("{}", e.what());
        return exit_io;
    } catch (const ParseError& e) {
        spdlog::error("{}", e.what());
        return exit_parse;
    } catch (const SolverBreakdown& e) {
        spdlog::error("{}", e.what());
        return exit_solver;
    } catch (const SingularOperator& e) {
        spdlog::error("{}", e.what());
        return exit_solver;
    } catch (const Error& e) {
        spdlog::error("{}", e.what());
        return exit_validation;
    }
    return exit_usage;
}

} // namespace levelsurf::cli
