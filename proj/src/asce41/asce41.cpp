#include "wallgp/asce41.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "wallgp/error.hpp"

namespace wallgp::asce41 {

extern const std::string_view kEmbeddedTables;

namespace {

constexpr double kPsiPerMpa = 145.037737730209;

double parse_number(const std::string& token, std::size_t line) {
    if (token == "inf") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        fail(ErrorCode::SchemaMismatch, fmt::format("tables line {}: '{}' is not a number", line, token));
    }
    return v;
}

bool parse_flag(const std::string& token, std::size_t line) {
    if (token == "yes") return true;
    if (token == "no") return false;
    fail(ErrorCode::SchemaMismatch, fmt::format("tables line {}: expected yes/no, got '{}'", line, token));
}

std::vector<double> distinct_sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Bracketing index and weight of x in a sorted grid, clamped to its ends.
std::pair<std::size_t, double> bracket(const std::vector<double>& grid, double x) {
    if (grid.size() == 1 || x <= grid.front()) return {0, 0.0};
    if (x >= grid.back()) return {grid.size() - 2, 1.0};
    std::size_t i = 0;
    while (x > grid[i + 1]) ++i;
    return {i, (x - grid[i]) / (grid[i + 1] - grid[i])};
}

// Exact at the endpoints: w = 0 gives a, w = 1 gives b.
double lerp(double a, double b, double w) { return (1.0 - w) * a + w * b; }

Asce41FlexureParams lerp(const Asce41FlexureParams& p, const Asce41FlexureParams& q, double w) {
    return {lerp(p.a, q.a, w), lerp(p.b, q.b, w), lerp(p.c, q.c, w)};
}

}  // namespace

Tables parse_tables(std::string_view text) {
    Tables t;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream fields(raw);
        std::vector<std::string> tok;
        for (std::string s; fields >> s;) tok.push_back(s);
        if (tok.empty()) continue;
        if (tok[0] == "shear") {
            if (tok.size() != 8) {
                fail(ErrorCode::SchemaMismatch, fmt::format("tables line {}: shear rows have 7 values", line_no));
            }
            ShearRow row;
            row.axial_upper = parse_number(tok[1], line_no);
            row.params = {parse_number(tok[2], line_no), parse_number(tok[3], line_no), parse_number(tok[4], line_no),
                          parse_number(tok[5], line_no), parse_number(tok[6], line_no), parse_number(tok[7], line_no)};
            t.shear.push_back(row);
        } else if (tok[0] == "flexure") {
            if (tok.size() != 7) {
                fail(ErrorCode::SchemaMismatch, fmt::format("tables line {}: flexure rows have 6 values", line_no));
            }
            FlexureRow row;
            row.axial = parse_number(tok[1], line_no);
            row.shear_stress = parse_number(tok[2], line_no);
            row.confined = parse_flag(tok[3], line_no);
            row.params = {parse_number(tok[4], line_no), parse_number(tok[5], line_no), parse_number(tok[6], line_no)};
            t.flexure.push_back(row);
        } else {
            fail(ErrorCode::SchemaMismatch, fmt::format("tables line {}: unknown table '{}'", line_no, tok[0]));
        }
    }
    if (t.shear.empty()) fail(ErrorCode::SchemaMismatch, "no shear rows");
    std::sort(t.shear.begin(), t.shear.end(),
              [](const ShearRow& a, const ShearRow& b) { return a.axial_upper < b.axial_upper; });
    if (!std::isinf(t.shear.back().axial_upper)) {
        fail(ErrorCode::SchemaMismatch, "the last shear row must have an 'inf' axial bound");
    }
    for (bool confined : {true, false}) {
        std::vector<double> ax;
        std::vector<double> sh;
        std::size_t count = 0;
        for (const auto& r : t.flexure) {
            if (r.confined != confined) continue;
            ax.push_back(r.axial);
            sh.push_back(r.shear_stress);
            ++count;
        }
        const std::size_t grid = distinct_sorted(ax).size() * distinct_sorted(sh).size();
        if (count == 0 || count != grid) {
            fail(ErrorCode::SchemaMismatch,
                 fmt::format("flexure rows for confined={} do not form a complete grid", confined ? "yes" : "no"));
        }
    }
    return t;
}

const Tables& embedded_tables() {
    static const Tables tables = parse_tables(kEmbeddedTables);
    return tables;
}

Asce41ShearParams shear_controlled_params(const WallState& state, const Tables& tables) {
    for (const auto& row : tables.shear) {
        if (state.axial_metric <= row.axial_upper) return row.params;
    }
    return tables.shear.back().params;
}

Asce41FlexureParams flexure_controlled_params(const WallState& state, const Tables& tables) {
    std::vector<const FlexureRow*> rows;
    std::vector<double> ax;
    std::vector<double> sh;
    for (const auto& r : tables.flexure) {
        if (r.confined != state.confined_boundary) continue;
        rows.push_back(&r);
        ax.push_back(r.axial);
        sh.push_back(r.shear_stress);
    }
    ax = distinct_sorted(ax);
    sh = distinct_sorted(sh);
    auto at = [&](double a, double s) -> const Asce41FlexureParams& {
        for (const auto* r : rows) {
            if (r->axial == a && r->shear_stress == s) return r->params;
        }
        fail(ErrorCode::SchemaMismatch, "flexure grid is incomplete");
    };
    const auto [i, wa] = bracket(ax, state.axial_metric);
    const auto [j, ws] = bracket(sh, state.shear_stress_metric);
    const std::size_t i1 = std::min(i + 1, ax.size() - 1);
    const std::size_t j1 = std::min(j + 1, sh.size() - 1);
    const auto low_shear = lerp(at(ax[i], sh[j]), at(ax[i1], sh[j]), wa);
    const auto high_shear = lerp(at(ax[i], sh[j1]), at(ax[i1], sh[j1]), wa);
    return lerp(low_shear, high_shear, ws);
}

dataset::BackbonePoints back_calculate_shear(const Asce41ShearParams& p, double v_y, double h) {
    dataset::BackbonePoints b;
    b.v_cr = p.f * v_y;
    b.v_y = v_y;
    b.delta_y = p.g / 100.0 * h;
    b.v_max = p.strength_ratio * v_y;
    b.delta_max = p.d / 100.0 * h;
    b.delta_u = p.e / 100.0 * h;
    b.v_u = p.c * b.v_max;
    b.wall_height = h;
    return b;
}

dataset::BackbonePoints back_calculate_flexure(const Asce41FlexureParams& p, double v_y, double delta_y, double h) {
    dataset::BackbonePoints b;
    b.v_cr = v_y;
    b.v_y = v_y;
    b.delta_y = delta_y;
    b.v_max = v_y;
    b.delta_max = delta_y + p.a * h;
    b.delta_u = delta_y + p.b * h;
    b.v_u = p.c * v_y;
    b.wall_height = h;
    return b;
}

double shear_stress_metric(double v_kn, double t_w, double l_w, double fc_mpa, StressUnit unit) {
    const double mpa_ratio = v_kn * 1000.0 / (t_w * l_w * std::sqrt(fc_mpa));
    return unit == StressUnit::Psi ? mpa_ratio * std::sqrt(kPsiPerMpa) : mpa_ratio;
}

WallState wall_state(const dataset::WallSpecimen& s, double shear_demand_kn, StressUnit unit) {
    WallState state;
    state.axial_metric = s.axial_load_ratio;
    state.shear_stress_metric = shear_stress_metric(shear_demand_kn, s.thickness, s.length, s.concrete_strength, unit);
    state.confined_boundary = s.boundary_transv_ratio > 0.0;
    return state;
}

double aci_wall_shear(const dataset::WallSpecimen& s) {
    const double r = s.aspect_ratio;
    double alpha_c = 0.17;
    if (r <= 1.5) {
        alpha_c = 0.25;
    } else if (r < 2.0) {
        alpha_c = 0.25 + (0.17 - 0.25) * (r - 1.5) / 0.5;
    }
    return s.thickness * s.length *
           (alpha_c * std::sqrt(s.concrete_strength) + s.web_transv_ratio * s.web_transv_yield) / 1000.0;
}

double nominal_shear_strength(const dataset::WallSpecimen& s, const NominalShearFormula& formula) {
    const double v = formula(s);
    if (!std::isfinite(v) || v <= 0.0) {
        fail(ErrorCode::InvariantViolation, fmt::format("nominal shear strength for {} is {}, must be positive",
                                                        s.id, v));
    }
    return v;
}

dataset::BackbonePoints shear_baseline(const dataset::WallSpecimen& s, double v_n) {
    return back_calculate_shear(shear_controlled_params(wall_state(s, v_n)), v_n, s.height);
}

}  // namespace wallgp::asce41
