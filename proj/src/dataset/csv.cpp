#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "wallgp/dataset.hpp"
#include "wallgp/error.hpp"

namespace wallgp::dataset {

namespace {

enum class Dimension { Text, Dimensionless, Stress, Ratio, Length, Force };

struct Unit {
    std::string_view suffix;
    double to_canonical;
};

const std::vector<Unit>& units_for(Dimension d) {
    static const std::vector<Unit> none;
    static const std::vector<Unit> stress = {{"mpa", 1.0}, {"ksi", 6.894757293168361}, {"psi", 0.006894757293168361}};
    static const std::vector<Unit> ratio = {{"frac", 1.0}, {"pct", 0.01}};
    static const std::vector<Unit> length = {{"mm", 1.0}, {"m", 1000.0}, {"in", 25.4}};
    static const std::vector<Unit> force = {{"kn", 1.0}, {"kip", 4.4482216152605}, {"n", 0.001}};
    switch (d) {
        case Dimension::Stress: return stress;
        case Dimension::Ratio: return ratio;
        case Dimension::Length: return length;
        case Dimension::Force: return force;
        default: return none;
    }
}

// Row values as parsed; numeric ones already in canonical units.
struct RowValues {
    std::map<std::string, double, std::less<>> numbers;
    std::map<std::string, std::string, std::less<>> texts;
};

struct ColumnDef {
    std::string_view base;
    Dimension dimension;
    bool required;
    std::string_view canonical_header;  // written by write_csv
};

const std::vector<ColumnDef>& columns() {
    static const std::vector<ColumnDef> defs = {
        {"id", Dimension::Text, true, "id"},
        {"fc", Dimension::Stress, true, "fc_mpa"},
        {"fyl", Dimension::Stress, true, "fyl_mpa"},
        {"fyt", Dimension::Stress, true, "fyt_mpa"},
        {"fybl", Dimension::Stress, true, "fybl_mpa"},
        {"fysh", Dimension::Stress, true, "fysh_mpa"},
        {"rho_l", Dimension::Ratio, true, "rho_l_frac"},
        {"rho_t", Dimension::Ratio, true, "rho_t_frac"},
        {"rho_bl", Dimension::Ratio, true, "rho_bl_frac"},
        {"rho_sh", Dimension::Ratio, true, "rho_sh_frac"},
        {"alr", Dimension::Dimensionless, true, "alr"},
        {"ar", Dimension::Dimensionless, true, "ar"},
        {"ssr", Dimension::Dimensionless, true, "ssr"},
        {"lw", Dimension::Length, true, "lw_mm"},
        {"tw", Dimension::Length, true, "tw_mm"},
        {"hw", Dimension::Length, true, "hw_mm"},
        {"s", Dimension::Length, false, "s_mm"},
        {"mode", Dimension::Text, true, "mode"},
        {"shape", Dimension::Text, false, "shape"},
        {"end", Dimension::Text, false, "end"},
        {"Vcr", Dimension::Force, false, "Vcr_kn"},
        {"Vy", Dimension::Force, false, "Vy_kn"},
        {"dy", Dimension::Length, false, "dy_mm"},
        {"Vmax", Dimension::Force, false, "Vmax_kn"},
        {"dmax", Dimension::Length, false, "dmax_mm"},
        {"Vu", Dimension::Force, false, "Vu_kn"},
        {"du", Dimension::Length, false, "du_mm"},
        {"vn", Dimension::Force, false, "vn_kn"},
    };
    return defs;
}

struct BoundColumn {
    const ColumnDef* def;
    double factor;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

BoundColumn bind_header(const std::string& header) {
    for (const auto& def : columns()) {
        if (def.dimension == Dimension::Text || def.dimension == Dimension::Dimensionless) {
            if (header == def.base) return {&def, 1.0};
            continue;
        }
        const std::string prefix = std::string(def.base) + "_";
        if (header.rfind(prefix, 0) != 0) continue;
        const std::string suffix = header.substr(prefix.size());
        // "rho_l" is a prefix of "rho_l..." only; guard against bases that prefix other bases.
        bool other_base = false;
        for (const auto& other : columns()) {
            if (&other != &def && other.base.size() > def.base.size() && header.rfind(other.base, 0) == 0) {
                other_base = true;
            }
        }
        if (other_base) continue;
        for (const auto& u : units_for(def.dimension)) {
            if (suffix == u.suffix) return {&def, u.to_canonical};
        }
        fail(ErrorCode::UnitError, "column '" + header + "': unknown unit '" + suffix + "'");
    }
    fail(ErrorCode::SchemaMismatch, "unknown column '" + header + "'");
}

bool parse_double(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::string format_number(double v) { return fmt::format("{}", v); }

}  // namespace

CsvReadResult read_csv(std::istream& in) {
    CsvReadResult result;
    std::string line;
    std::vector<BoundColumn> bound;
    bool have_header = false;
    std::size_t data_row = 0;

    while (std::getline(in, line)) {
        const std::string trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        if (!have_header) {
            if (trimmed.size() >= 3 && static_cast<unsigned char>(trimmed[0]) == 0xEF) {
                line = trimmed.substr(3);  // UTF-8 BOM
            }
            for (const auto& h : split_csv_line(trim(line))) bound.push_back(bind_header(h));
            for (const auto& def : columns()) {
                int count = 0;
                for (const auto& b : bound) count += b.def == &def ? 1 : 0;
                if (count > 1) fail(ErrorCode::SchemaMismatch, "duplicate column for '" + std::string(def.base) + "'");
                if (count == 0 && def.required) {
                    fail(ErrorCode::SchemaMismatch, "missing required column '" + std::string(def.canonical_header) + "'");
                }
            }
            have_header = true;
            continue;
        }

        ++data_row;
        const auto cells = split_csv_line(trimmed);
        std::vector<std::string> problems;
        if (cells.size() != bound.size()) {
            result.issues.push_back({data_row, fmt::format("expected {} cells, found {}", bound.size(), cells.size())});
            continue;
        }
        RowValues row;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto& def = *bound[c].def;
            if (cells[c].empty()) continue;
            if (def.dimension == Dimension::Text) {
                row.texts[std::string(def.base)] = cells[c];
                continue;
            }
            double v = 0.0;
            if (!parse_double(cells[c], v)) {
                problems.push_back(fmt::format("{}: '{}' is not a number", def.canonical_header, cells[c]));
                continue;
            }
            row.numbers[std::string(def.base)] = v * bound[c].factor;
        }
        for (const auto& def : columns()) {
            if (!def.required) continue;
            const std::string key(def.base);
            if (!row.numbers.contains(key) && !row.texts.contains(key)) {
                problems.push_back(fmt::format("{} is empty", def.canonical_header));
            }
        }

        WallSpecimen s;
        auto num = [&](std::string_view key) {
            auto it = row.numbers.find(key);
            return it == row.numbers.end() ? 0.0 : it->second;
        };
        if (auto it = row.texts.find("id"); it != row.texts.end()) s.id = it->second;
        s.concrete_strength = num("fc");
        s.web_long_yield = num("fyl");
        s.web_transv_yield = num("fyt");
        s.boundary_long_yield = num("fybl");
        s.boundary_transv_yield = num("fysh");
        s.web_long_ratio = num("rho_l");
        s.web_transv_ratio = num("rho_t");
        s.boundary_long_ratio = num("rho_bl");
        s.boundary_transv_ratio = num("rho_sh");
        s.axial_load_ratio = num("alr");
        s.aspect_ratio = num("ar");
        s.shear_span_ratio = num("ssr");
        s.length = num("lw");
        s.thickness = num("tw");
        s.height = num("hw");
        if (row.numbers.contains("s")) s.stirrup_spacing = num("s");
        if (row.numbers.contains("vn")) s.nominal_shear_strength = num("vn");
        if (auto it = row.texts.find("mode"); it != row.texts.end()) {
            if (auto m = parse_failure_mode(it->second)) {
                s.failure_mode = *m;
            } else {
                problems.push_back("mode '" + it->second + "' is not one of S, SF, F");
            }
        }
        if (auto it = row.texts.find("shape"); it != row.texts.end()) {
            if (auto v = parse_section_shape(it->second)) {
                s.section_shape = *v;
            } else {
                problems.push_back("shape '" + it->second + "' is not one of rectangular, barbell, flanged");
            }
        }
        if (auto it = row.texts.find("end"); it != row.texts.end()) {
            if (auto v = parse_end_condition(it->second)) {
                s.end_condition = *v;
            } else {
                problems.push_back("end '" + it->second + "' is not one of cantilever, fixed_top");
            }
        }

        int targets_present = 0;
        for (Output o : kOutputs) targets_present += row.numbers.contains(output_name(o)) ? 1 : 0;
        if (targets_present == static_cast<int>(kOutputs.size())) {
            BackbonePoints b;
            for (Output o : kOutputs) b.set(o, num(output_name(o)));
            b.wall_height = s.height;
            s.backbone = b;
        } else if (targets_present > 0) {
            problems.push_back("backbone targets must be all present or all empty");
        }

        if (problems.empty()) {
            for (auto& v : s.invariant_violations()) problems.push_back(std::move(v));
        }
        if (problems.empty()) {
            result.specimens.push_back(std::move(s));
        } else {
            std::string msg;
            for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "; " : "") + problems[i];
            result.issues.push_back({data_row, msg});
        }
    }
    if (!have_header) fail(ErrorCode::SchemaMismatch, "CSV has no header row");
    return result;
}

std::vector<WallSpecimen> load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
    CsvReadResult r = read_csv(in);
    if (!r.issues.empty()) {
        std::string msg = path.string() + ": " + std::to_string(r.issues.size()) + " invalid row(s)";
        for (const auto& issue : r.issues) msg += fmt::format("\n  row {}: {}", issue.row, issue.message);
        fail(ErrorCode::InvariantViolation, msg);
    }
    return std::move(r.specimens);
}

void write_csv(std::ostream& out, std::span<const WallSpecimen> specimens) {
    const auto& defs = columns();
    for (std::size_t i = 0; i < defs.size(); ++i) out << (i ? "," : "") << defs[i].canonical_header;
    out << '\n';
    for (const auto& s : specimens) {
        std::vector<std::string> cells;
        cells.push_back(s.id);
        for (double v : {s.concrete_strength, s.web_long_yield, s.web_transv_yield, s.boundary_long_yield,
                         s.boundary_transv_yield, s.web_long_ratio, s.web_transv_ratio, s.boundary_long_ratio,
                         s.boundary_transv_ratio, s.axial_load_ratio, s.aspect_ratio, s.shear_span_ratio, s.length,
                         s.thickness, s.height}) {
            cells.push_back(format_number(v));
        }
        cells.push_back(s.stirrup_spacing ? format_number(*s.stirrup_spacing) : "");
        cells.emplace_back(to_string(s.failure_mode));
        cells.emplace_back(to_string(s.section_shape));
        cells.emplace_back(to_string(s.end_condition));
        for (Output o : kOutputs) cells.push_back(s.backbone ? format_number(s.backbone->get(o)) : "");
        cells.push_back(s.nominal_shear_strength ? format_number(*s.nominal_shear_strength) : "");
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    }
}

void save_csv(const std::filesystem::path& path, std::span<const WallSpecimen> specimens) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
    write_csv(out, specimens);
}

HysteresisRecord read_hysteresis_csv(std::istream& in, double wall_height) {
    HysteresisRecord record;
    record.wall_height = wall_height;
    std::string line;
    bool header = false;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        const std::string trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        const auto cells = split_csv_line(trimmed);
        if (!header) {
            if (cells.size() != 2 || cells[0] != "disp_mm" || cells[1] != "force_kn") {
                fail(ErrorCode::SchemaMismatch, "hysteresis CSV header must be 'disp_mm,force_kn'");
            }
            header = true;
            continue;
        }
        ++row;
        HysteresisSample s;
        if (cells.size() != 2 || !parse_double(cells[0], s.displacement) || !parse_double(cells[1], s.force)) {
            fail(ErrorCode::SchemaMismatch, "hysteresis CSV row " + std::to_string(row) + " is not two numbers");
        }
        record.samples.push_back(s);
    }
    if (!header) fail(ErrorCode::SchemaMismatch, "hysteresis CSV has no header row");
    return record;
}

HysteresisRecord load_hysteresis_csv(const std::filesystem::path& path, double wall_height) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
    return read_hysteresis_csv(in, wall_height);
}

void write_polyline_csv(std::ostream& out, std::span<const Polyline> polylines) {
    out << "id,vertex,disp_mm,force_kn\n";
    for (const auto& p : polylines) {
        for (std::size_t k = 0; k < p.vertices.size(); ++k) {
            out << p.id << ',' << k << ',' << format_number(p.vertices[k].displacement) << ','
                << format_number(p.vertices[k].force) << '\n';
        }
    }
}

std::vector<Polyline> read_polyline_csv(std::istream& in) {
    std::vector<Polyline> out;
    std::string line;
    bool header = false;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        const std::string trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        const auto cells = split_csv_line(trimmed);
        if (!header) {
            if (cells != std::vector<std::string>{"id", "vertex", "disp_mm", "force_kn"}) {
                fail(ErrorCode::SchemaMismatch, "polyline CSV header must be 'id,vertex,disp_mm,force_kn'");
            }
            header = true;
            continue;
        }
        ++row;
        Vertex v;
        if (cells.size() != 4 || !parse_double(cells[2], v.displacement) || !parse_double(cells[3], v.force)) {
            fail(ErrorCode::SchemaMismatch, "polyline CSV row " + std::to_string(row) + " is malformed");
        }
        if (out.empty() || out.back().id != cells[0]) out.push_back({cells[0], {}});
        out.back().vertices.push_back(v);
    }
    if (!header) fail(ErrorCode::SchemaMismatch, "polyline CSV has no header row");
    return out;
}

}  // namespace wallgp::dataset
