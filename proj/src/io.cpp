#include "levelsurf/io.hpp"

#include <png.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace levelsurf {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    cells.push_back(cur);
    for (auto& c : cells) {
        const auto b = c.find_first_not_of(" \t");
        const auto e = c.find_last_not_of(" \t");
        c = b == std::string::npos ? std::string{} : c.substr(b, e - b + 1);
    }
    return cells;
}

/// Rows of a headered CSV, addressed by column name.
class CsvTable {
public:
    CsvTable(const std::filesystem::path& path, std::vector<std::string> required) : path_(path) {
        std::ifstream in = open_in(path);
        std::string line;
        if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file, expected a header row");
        header_ = split(line);
        for (const auto& name : required) static_cast<void>(column(name));
        std::size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            auto cells = split(line);
            if (cells.size() != header_.size()) {
                throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                                 std::to_string(header_.size()) + " fields, got " + std::to_string(cells.size()));
            }
            rows_.push_back(std::move(cells));
            lines_.push_back(line_no);
        }
    }

    [[nodiscard]] bool has(const std::string& name) const {
        return std::find(header_.begin(), header_.end(), name) != header_.end();
    }
    [[nodiscard]] std::size_t column(const std::string& name) const {
        auto it = std::find(header_.begin(), header_.end(), name);
        if (it == header_.end()) throw ParseError(path_.string() + ": missing column '" + name + "'");
        return static_cast<std::size_t>(it - header_.begin());
    }
    [[nodiscard]] std::size_t size() const { return rows_.size(); }
    [[nodiscard]] const std::string& text(std::size_t row, std::size_t col) const { return rows_[row][col]; }
    [[nodiscard]] double real(std::size_t row, std::size_t col) const {
        const std::string& s = rows_[row][col];
        double v = 0.0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) {
            throw ParseError(where(row) + ": '" + s + "' is not a finite number");
        }
        return v;
    }
    [[nodiscard]] long integer(std::size_t row, std::size_t col) const {
        const std::string& s = rows_[row][col];
        long v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) throw ParseError(where(row) + ": '" + s + "' is not an integer");
        return v;
    }
    [[nodiscard]] std::string where(std::size_t row) const {
        return path_.string() + ":" + std::to_string(lines_[row]);
    }

private:
    std::filesystem::path path_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::size_t> lines_;
};

} // namespace

void write_field_csv(const std::filesystem::path& path, const ScalarField2D& field) {
    std::ofstream out = open_out(path);
    const Grid2D& g = field.grid();
    out << "x,y,value\n";
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) out << i << ',' << j << ',' << fmt(field(i, j)) << '\n';
    }
    finish(out, path);
}

ScalarField2D read_field_csv(const std::filesystem::path& path) {
    const CsvTable t(path, {"x", "y", "value"});
    const std::size_t cx = t.column("x");
    const std::size_t cy = t.column("y");
    const std::size_t cv = t.column("value");
    long nx = 0;
    long ny = 0;
    for (std::size_t r = 0; r < t.size(); ++r) {
        const long x = t.integer(r, cx);
        const long y = t.integer(r, cy);
        if (x < 0 || y < 0) throw ParseError(t.where(r) + ": negative cell index");
        nx = std::max(nx, x + 1);
        ny = std::max(ny, y + 1);
    }
    if (nx < 2 || ny < 2) throw ParseError(path.string() + ": field needs at least 2x2 cells");
    if (static_cast<std::size_t>(nx * ny) != t.size()) {
        throw ParseError(path.string() + ": " + std::to_string(t.size()) + " rows for a " + std::to_string(nx) + "x" +
                         std::to_string(ny) + " grid");
    }
    const Grid2D grid(static_cast<int>(nx), static_cast<int>(ny));
    ScalarField2D f(grid);
    std::vector<bool> seen(grid.size(), false);
    for (std::size_t r = 0; r < t.size(); ++r) {
        const std::size_t k = grid.index(static_cast<int>(t.integer(r, cx)), static_cast<int>(t.integer(r, cy)));
        if (seen[k]) throw ParseError(t.where(r) + ": duplicate cell");
        seen[k] = true;
        f[k] = t.real(r, cv);
    }
    return f;
}

void write_lines_csv(const std::filesystem::path& path, std::span<const LevelLine> lines) {
    std::ofstream out = open_out(path);
    out << "line_id,level,x,y,nx,ny,closed\n";
    for (std::size_t l = 0; l < lines.size(); ++l) {
        const LevelLine& line = lines[l];
        const bool normals = line.normals.size() == line.points.size();
        for (std::size_t k = 0; k < line.points.size(); ++k) {
            out << l << ',' << fmt(line.level) << ',' << fmt(line.points[k].x) << ',' << fmt(line.points[k].y) << ',';
            if (normals) out << fmt(line.normals[k].x) << ',' << fmt(line.normals[k].y);
            else out << ',';
            out << ',' << (line.closed ? 1 : 0) << '\n';
        }
    }
    finish(out, path);
}

std::vector<LevelLine> read_lines_csv(const std::filesystem::path& path) {
    const CsvTable t(path, {"line_id", "level", "x", "y"});
    const std::size_t cid = t.column("line_id");
    const std::size_t clv = t.column("level");
    const std::size_t cx = t.column("x");
    const std::size_t cy = t.column("y");
    const bool has_n = t.has("nx") && t.has("ny");
    const bool has_closed = t.has("closed");

    std::vector<LevelLine> lines;
    std::map<long, std::size_t> slot;
    std::vector<char> all_normals;
    for (std::size_t r = 0; r < t.size(); ++r) {
        const long id = t.integer(r, cid);
        auto [it, inserted] = slot.try_emplace(id, lines.size());
        if (inserted) {
            lines.emplace_back();
            lines.back().level = t.real(r, clv);
            all_normals.push_back(has_n);
        }
        LevelLine& line = lines[it->second];
        if (t.real(r, clv) != line.level) throw ParseError(t.where(r) + ": level differs within line " + std::to_string(id));
        line.points.push_back({t.real(r, cx), t.real(r, cy)});
        if (has_closed) line.closed = t.integer(r, t.column("closed")) != 0;
        char& normals_ok = all_normals[it->second];
        if (normals_ok) {
            const std::string& sx = t.text(r, t.column("nx"));
            const std::string& sy = t.text(r, t.column("ny"));
            if (sx.empty() || sy.empty()) {
                normals_ok = false;
                line.normals.clear();
            } else {
                const double vx = t.real(r, t.column("nx"));
                const double vy = t.real(r, t.column("ny"));
                const double len = std::hypot(vx, vy);
                if (!(len > 0.0)) throw ParseError(t.where(r) + ": zero normal vector");
                line.normals.push_back({vx / len, vy / len});
            }
        }
    }
    for (std::size_t l = 0; l < lines.size(); ++l) {
        LevelLine& line = lines[l];
        if (!all_normals[l]) {
            line.normals.clear();
            continue;
        }
        line.tangents.clear();
        for (const Point2& n : line.normals) line.tangents.push_back({n.y, -n.x});
    }
    return lines;
}

std::vector<PointCloudSample> read_points_csv(const std::filesystem::path& path) {
    const CsvTable t(path, {"x", "y", "level"});
    std::vector<PointCloudSample> out;
    for (std::size_t r = 0; r < t.size(); ++r) {
        out.push_back({{t.real(r, t.column("x")), t.real(r, t.column("y"))}, t.real(r, t.column("level"))});
    }
    return out;
}

void write_points_csv(const std::filesystem::path& path, std::span<const PointCloudSample> samples) {
    std::ofstream out = open_out(path);
    out << "x,y,level\n";
    for (const auto& s : samples) out << fmt(s.position.x) << ',' << fmt(s.position.y) << ',' << fmt(s.level) << '\n';
    finish(out, path);
}

PgmScaling write_pgm16(const std::filesystem::path& path, const ScalarField2D& field) {
    const Grid2D& g = field.grid();
    PgmScaling s{field[0], field[0]};
    for (std::size_t k = 0; k < field.size(); ++k) {
        s.min = std::min(s.min, field[k]);
        s.max = std::max(s.max, field[k]);
    }
    const double range = s.max - s.min;
    std::ofstream out = open_out(path);
    out << "P5\n" << g.nx() << ' ' << g.ny() << "\n65535\n";
    for (int j = g.ny() - 1; j >= 0; --j) {
        for (int i = 0; i < g.nx(); ++i) {
            const double u = range > 0.0 ? (field(i, j) - s.min) / range : 0.0;
            const auto v = static_cast<unsigned>(std::lround(std::clamp(u, 0.0, 1.0) * 65535.0));
            out.put(static_cast<char>((v >> 8) & 0xff));
            out.put(static_cast<char>(v & 0xff));
        }
    }
    finish(out, path);
    return s;
}

void write_obj(const std::filesystem::path& path, const ScalarField2D& field) {
    const Grid2D& g = field.grid();
    std::ofstream out = open_out(path);
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) out << "v " << i << ' ' << j << ' ' << fmt(field(i, j)) << '\n';
    }
    auto vid = [&](int i, int j) { return g.index(i, j) + 1; };
    for (int j = 0; j + 1 < g.ny(); ++j) {
        for (int i = 0; i + 1 < g.nx(); ++i) {
            out << "f " << vid(i, j) << ' ' << vid(i + 1, j) << ' ' << vid(i + 1, j + 1) << '\n';
            out << "f " << vid(i, j) << ' ' << vid(i + 1, j + 1) << ' ' << vid(i, j + 1) << '\n';
        }
    }
    finish(out, path);
}

namespace {

Mask2D mask_from_rows(const std::vector<double>& top_down, int w, int h, const Grid2D& grid,
                      const std::filesystem::path& path) {
    if (w != grid.nx() || h != grid.ny()) {
        throw DimensionMismatch(path.string() + ": mask is " + std::to_string(w) + "x" + std::to_string(h) +
                                ", grid is " + std::to_string(grid.nx()) + "x" + std::to_string(grid.ny()));
    }
    Mask2D m(grid);
    for (int r = 0; r < h; ++r) {
        for (int i = 0; i < w; ++i) {
            if (top_down[static_cast<std::size_t>(r) * w + i] != 0.0) m.set(i, h - 1 - r);
        }
    }
    return m;
}

Mask2D read_png_mask(const std::filesystem::path& path, const Grid2D& grid) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
        throw ParseError(path.string() + ": " + image.message);
    }
    image.format = PNG_FORMAT_GRAY;
    std::vector<png_byte> buf(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
        png_image_free(&image);
        throw ParseError(path.string() + ": " + image.message);
    }
    std::vector<double> v(buf.begin(), buf.end());
    return mask_from_rows(v, static_cast<int>(image.width), static_cast<int>(image.height), grid, path);
}

Mask2D read_pgm_mask(const std::filesystem::path& path, const Grid2D& grid) {
    std::ifstream in = open_in(path);
    auto token = [&]() {
        std::string tok;
        char ch = 0;
        while (in.get(ch)) {
            if (ch == '#') {
                std::string rest;
                std::getline(in, rest);
            } else if (!std::isspace(static_cast<unsigned char>(ch))) {
                tok.push_back(ch);
                break;
            }
        }
        while (in.get(ch) && !std::isspace(static_cast<unsigned char>(ch))) tok.push_back(ch);
        return tok;
    };
    const std::string magic = token();
    if (magic != "P5" && magic != "P2") throw ParseError(path.string() + ": not a PGM file");
    int w = 0;
    int h = 0;
    int maxval = 0;
    try {
        w = std::stoi(token());
        h = std::stoi(token());
        maxval = std::stoi(token());
    } catch (const std::exception&) {
        throw ParseError(path.string() + ": malformed PGM header");
    }
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) throw ParseError(path.string() + ": bad PGM header values");
    std::vector<double> v(static_cast<std::size_t>(w) * h);
    for (auto& x : v) {
        if (magic == "P2") {
            try {
                x = std::stoi(token());
            } catch (const std::exception&) {
                throw ParseError(path.string() + ": truncated PGM data");
            }
        } else {
            unsigned char b[2] = {0, 0};
            const int bytes = maxval > 255 ? 2 : 1;
            if (!in.read(reinterpret_cast<char*>(b), bytes)) throw ParseError(path.string() + ": truncated PGM data");
            x = bytes == 2 ? (b[0] << 8 | b[1]) : b[0];
        }
    }
    return mask_from_rows(v, w, h, grid, path);
}

} // namespace

Mask2D read_mask(const std::filesystem::path& path, const Grid2D& grid) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (!std::filesystem::is_regular_file(path)) throw IoError("cannot open '" + path.string() + "' for reading");
    if (ext == ".png") return read_png_mask(path, grid);
    if (ext == ".pgm") return read_pgm_mask(path, grid);
    if (ext == ".csv") {
        const ScalarField2D f = read_field_csv(path);
        require_same_grid(grid, f.grid(), "read_mask");
        Mask2D m(grid);
        for (std::size_t k = 0; k < f.size(); ++k) m.set(k, f[k] != 0.0);
        return m;
    }
    throw ParseError(path.string() + ": unsupported mask format (expected .png, .pgm or .csv)");
}

void write_profile_csv(const std::filesystem::path& path, std::span<const double> values) {
    std::ofstream out = open_out(path);
    out << "index,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << fmt(values[i]) << '\n';
    finish(out, path);
}

void write_constraints_csv(const std::filesystem::path& path, const ConstraintSet& c) {
    std::ofstream out = open_out(path);
    const Grid2D& g = c.grid();
    out << "i,j,in_sigma,height,theta,in_gamma,nx,ny,alpha\n";
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const std::size_t k = g.index(i, j);
            if (!c.sigma_mask[k] && !c.gamma_mask[k]) continue;
            out << i << ',' << j << ',' << int(c.sigma_mask[k]) << ',' << fmt(c.heights[k]) << ','
                << fmt(c.theta_hat[k]) << ',' << int(c.gamma_mask[k]) << ',' << fmt(c.normals.x[k]) << ','
                << fmt(c.normals.y[k]) << ',' << fmt(c.alpha_hat[k]) << '\n';
        }
    }
    finish(out, path);
}

} // namespace levelsurf
