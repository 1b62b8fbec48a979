#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <fmt/format.h>

#include "wallgp/dataset.hpp"
#include "wallgp/error.hpp"

namespace wallgp::dataset {

std::string_view to_string(FailureMode m) {
    switch (m) {
        case FailureMode::Shear: return "S";
        case FailureMode::ShearFlexure: return "SF";
        case FailureMode::Flexure: return "F";
    }
    return "?";
}

std::string_view to_string(SectionShape s) {
    switch (s) {
        case SectionShape::Rectangular: return "rectangular";
        case SectionShape::Barbell: return "barbell";
        case SectionShape::Flanged: return "flanged";
    }
    return "?";
}

std::string_view to_string(EndCondition e) {
    switch (e) {
        case EndCondition::Cantilever: return "cantilever";
        case EndCondition::FixedTop: return "fixed_top";
    }
    return "?";
}

std::optional<FailureMode> parse_failure_mode(std::string_view text) {
    if (text == "S") return FailureMode::Shear;
    if (text == "SF") return FailureMode::ShearFlexure;
    if (text == "F") return FailureMode::Flexure;
    return std::nullopt;
}

std::optional<SectionShape> parse_section_shape(std::string_view text) {
    if (text == "rectangular") return SectionShape::Rectangular;
    if (text == "barbell") return SectionShape::Barbell;
    if (text == "flanged") return SectionShape::Flanged;
    return std::nullopt;
}

std::optional<EndCondition> parse_end_condition(std::string_view text) {
    if (text == "cantilever") return EndCondition::Cantilever;
    if (text == "fixed_top") return EndCondition::FixedTop;
    return std::nullopt;
}

std::string_view output_name(Output o) {
    switch (o) {
        case Output::Vcr: return "Vcr";
        case Output::Vy: return "Vy";
        case Output::DeltaY: return "dy";
        case Output::Vmax: return "Vmax";
        case Output::DeltaMax: return "dmax";
        case Output::Vu: return "Vu";
        case Output::DeltaU: return "du";
    }
    return "?";
}

std::optional<Output> parse_output(std::string_view name) {
    for (Output o : kOutputs) {
        if (output_name(o) == name) return o;
    }
    return std::nullopt;
}

bool is_force(Output o) { return o == Output::Vcr || o == Output::Vy || o == Output::Vmax || o == Output::Vu; }

double BackbonePoints::get(Output o) const {
    switch (o) {
        case Output::Vcr: return v_cr;
        case Output::Vy: return v_y;
        case Output::DeltaY: return delta_y;
        case Output::Vmax: return v_max;
        case Output::DeltaMax: return delta_max;
        case Output::Vu: return v_u;
        case Output::DeltaU: return delta_u;
    }
    return 0.0;
}

void BackbonePoints::set(Output o, double value) {
    switch (o) {
        case Output::Vcr: v_cr = value; break;
        case Output::Vy: v_y = value; break;
        case Output::DeltaY: delta_y = value; break;
        case Output::Vmax: v_max = value; break;
        case Output::DeltaMax: delta_max = value; break;
        case Output::Vu: v_u = value; break;
        case Output::DeltaU: delta_u = value; break;
    }
}

std::vector<std::string> BackbonePoints::invariant_violations() const {
    std::vector<std::string> out;
    for (Output o : kOutputs) {
        if (!std::isfinite(get(o))) out.push_back(fmt::format("{} is not finite", output_name(o)));
    }
    if (!(v_cr > 0.0)) out.push_back(fmt::format("Vcr = {} must be > 0", v_cr));
    if (!(v_cr <= v_y)) out.push_back(fmt::format("Vcr = {} exceeds Vy = {}", v_cr, v_y));
    if (!(v_y <= v_max)) out.push_back(fmt::format("Vy = {} exceeds Vmax = {}", v_y, v_max));
    if (!(v_u <= v_max)) out.push_back(fmt::format("Vu = {} exceeds Vmax = {}", v_u, v_max));
    if (!(delta_y > 0.0)) out.push_back(fmt::format("dy = {} must be > 0", delta_y));
    if (!(delta_y <= delta_max)) out.push_back(fmt::format("dy = {} exceeds dmax = {}", delta_y, delta_max));
    if (!(delta_max <= delta_u)) out.push_back(fmt::format("dmax = {} exceeds du = {}", delta_max, delta_u));
    return out;
}

std::vector<std::string> WallSpecimen::invariant_violations() const {
    std::vector<std::string> out;
    auto positive = [&](double v, std::string_view name) {
        if (!(v > 0.0) || !std::isfinite(v)) out.push_back(fmt::format("{} = {} must be > 0", name, v));
    };
    auto non_negative = [&](double v, std::string_view name) {
        if (!(v >= 0.0) || !std::isfinite(v)) out.push_back(fmt::format("{} = {} must be >= 0", name, v));
    };
    if (id.empty()) out.emplace_back("id is empty");
    positive(concrete_strength, "fc");
    positive(web_long_yield, "fyl");
    positive(web_transv_yield, "fyt");
    positive(boundary_long_yield, "fybl");
    positive(boundary_transv_yield, "fysh");
    non_negative(web_long_ratio, "rho_l");
    non_negative(web_transv_ratio, "rho_t");
    non_negative(boundary_long_ratio, "rho_bl");
    non_negative(boundary_transv_ratio, "rho_sh");
    if (!(axial_load_ratio >= 0.0 && axial_load_ratio < 1.0)) {
        out.push_back(fmt::format("alr = {} must lie in [0, 1)", axial_load_ratio));
    }
    positive(aspect_ratio, "ar");
    positive(shear_span_ratio, "ssr");
    positive(length, "lw");
    positive(thickness, "tw");
    positive(height, "hw");
    if (stirrup_spacing) positive(*stirrup_spacing, "s");
    if (nominal_shear_strength) positive(*nominal_shear_strength, "vn");
    if (backbone) {
        for (auto& v : backbone->invariant_violations()) out.push_back("backbone: " + v);
    }
    return out;
}

namespace {

struct FeatureAccessor {
    std::string_view name;
    std::function<double(const WallSpecimen&)> get;
};

const std::vector<FeatureAccessor>& feature_catalog() {
    static const std::vector<FeatureAccessor> catalog = {
        {"fc_mpa", [](const WallSpecimen& s) { return s.concrete_strength; }},
        {"fyl_mpa", [](const WallSpecimen& s) { return s.web_long_yield; }},
        {"fyt_mpa", [](const WallSpecimen& s) { return s.web_transv_yield; }},
        {"fybl_mpa", [](const WallSpecimen& s) { return s.boundary_long_yield; }},
        {"fysh_mpa", [](const WallSpecimen& s) { return s.boundary_transv_yield; }},
        {"rho_l_frac", [](const WallSpecimen& s) { return s.web_long_ratio; }},
        {"rho_t_frac", [](const WallSpecimen& s) { return s.web_transv_ratio; }},
        {"rho_bl_frac", [](const WallSpecimen& s) { return s.boundary_long_ratio; }},
        {"rho_sh_frac", [](const WallSpecimen& s) { return s.boundary_transv_ratio; }},
        {"alr", [](const WallSpecimen& s) { return s.axial_load_ratio; }},
        {"ar", [](const WallSpecimen& s) { return s.aspect_ratio; }},
        {"ssr", [](const WallSpecimen& s) { return s.shear_span_ratio; }},
        {"lw_mm", [](const WallSpecimen& s) { return s.length; }},
        {"tw_mm", [](const WallSpecimen& s) { return s.thickness; }},
        {"hw_mm", [](const WallSpecimen& s) { return s.height; }},
        {"s_mm",
         [](const WallSpecimen& s) {
             if (!s.stirrup_spacing) fail(ErrorCode::FeatureMismatch, "specimen " + s.id + " has no s_mm value");
             return *s.stirrup_spacing;
         }},
    };
    return catalog;
}

const FeatureAccessor& find_feature(std::string_view name) {
    for (const auto& f : feature_catalog()) {
        if (f.name == name) return f;
    }
    fail(ErrorCode::FeatureMismatch, "unknown feature '" + std::string(name) + "'");
}

}  // namespace

const std::vector<std::string>& default_feature_names() {
    static const std::vector<std::string> names = {"fc_mpa",     "fyl_mpa",     "fyt_mpa",    "fybl_mpa",
                                                   "fysh_mpa",   "rho_l_frac",  "rho_t_frac", "rho_bl_frac",
                                                   "rho_sh_frac", "alr",        "ar",         "ssr"};
    return names;
}

const std::vector<std::string>& selectable_feature_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& f : feature_catalog()) out.emplace_back(f.name);
        return out;
    }();
    return names;
}

double feature_value(const WallSpecimen& s, std::string_view name) { return find_feature(name).get(s); }

numerics::Matrix feature_matrix(std::span<const WallSpecimen> specimens, const std::vector<std::string>& names) {
    std::vector<const FeatureAccessor*> columns;
    for (const auto& n : names) columns.push_back(&find_feature(n));
    numerics::Matrix x(static_cast<Eigen::Index>(specimens.size()), static_cast<Eigen::Index>(names.size()));
    for (std::size_t i = 0; i < specimens.size(); ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = columns[j]->get(specimens[i]);
        }
    }
    return x;
}

numerics::Vector target_vector(std::span<const WallSpecimen> specimens, Output o) {
    numerics::Vector y(static_cast<Eigen::Index>(specimens.size()));
    for (std::size_t i = 0; i < specimens.size(); ++i) {
        if (!specimens[i].backbone) {
            fail(ErrorCode::InvariantViolation, "specimen " + specimens[i].id + " has no backbone targets");
        }
        y(static_cast<Eigen::Index>(i)) = specimens[i].backbone->get(o);
    }
    return y;
}

std::string_view to_string(ScopeRule r) {
    switch (r) {
        case ScopeRule::FailureMode: return "failure_mode";
        case ScopeRule::LengthToThickness: return "length_to_thickness";
        case ScopeRule::AspectRatio: return "aspect_ratio";
    }
    return "?";
}

ScopeCriteria ScopeCriteria::all_modes() {
    ScopeCriteria c;
    c.modes = {FailureMode::Shear, FailureMode::ShearFlexure, FailureMode::Flexure};
    return c;
}

ScopePartition filter_scope(std::span<const WallSpecimen> specimens, const ScopeCriteria& criteria) {
    ScopePartition out;
    for (const auto& s : specimens) {
        std::vector<ScopeRule> reasons;
        if (std::find(criteria.modes.begin(), criteria.modes.end(), s.failure_mode) == criteria.modes.end()) {
            reasons.push_back(ScopeRule::FailureMode);
        }
        if (!(s.length / s.thickness <= criteria.max_length_to_thickness)) {
            reasons.push_back(ScopeRule::LengthToThickness);
        }
        if (!(s.aspect_ratio <= criteria.max_aspect_ratio)) reasons.push_back(ScopeRule::AspectRatio);
        if (reasons.empty()) {
            out.in_scope.push_back(s);
        } else {
            out.excluded.push_back({s, std::move(reasons)});
        }
    }
    return out;
}

std::vector<Vertex> backbone_to_polyline(const BackbonePoints& b) {
    std::vector<Vertex> v;
    v.push_back({0.0, 0.0});
    if (b.v_cr < b.v_y) v.push_back({b.v_cr * b.delta_y / b.v_y, b.v_cr});
    v.push_back({b.delta_y, b.v_y});
    v.push_back({b.delta_max, b.v_max});
    v.push_back({b.delta_u, b.v_u});
    return v;
}

BackbonePoints backbone_from_polyline(std::span<const Vertex> vertices, double wall_height) {
    if (vertices.size() != 4 && vertices.size() != 5) {
        fail(ErrorCode::SchemaMismatch, "backbone polyline must have 4 or 5 vertices, got " +
                                            std::to_string(vertices.size()));
    }
    const std::size_t k = vertices.size() == 5 ? 2 : 1;  // index of the yield vertex
    BackbonePoints b;
    b.v_y = vertices[k].force;
    b.delta_y = vertices[k].displacement;
    b.v_cr = vertices.size() == 5 ? vertices[1].force : b.v_y;
    b.v_max = vertices[k + 1].force;
    b.delta_max = vertices[k + 1].displacement;
    b.v_u = vertices[k + 2].force;
    b.delta_u = vertices[k + 2].displacement;
    b.wall_height = wall_height;
    return b;
}

}  // namespace wallgp::dataset
