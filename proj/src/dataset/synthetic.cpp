#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <fmt/format.h>

#include "wallgp/dataset.hpp"
#include "wallgp/error.hpp"

namespace wallgp::dataset {

const std::vector<FeatureRange>& synthetic_feature_ranges() {
    static const std::vector<FeatureRange> ranges = {
        {"fc_mpa", 20.0, 80.0},        {"fyl_mpa", 300.0, 650.0},     {"fyt_mpa", 300.0, 650.0},
        {"fybl_mpa", 300.0, 650.0},    {"fysh_mpa", 300.0, 650.0},    {"rho_l_frac", 0.0025, 0.03},
        {"rho_t_frac", 0.0025, 0.015}, {"rho_bl_frac", 0.005, 0.06},  {"rho_sh_frac", 0.0, 0.02},
        {"alr", 0.0, 0.4},             {"ar", 0.3, 3.0},              {"ssr", 0.3, 3.0},
    };
    return ranges;
}

BackbonePoints synthetic_backbone(const WallSpecimen& s) {
    const double n = s.axial_load_ratio;
    const double a = s.aspect_ratio;
    BackbonePoints b;
    b.v_max = 1000.0 * (1.0 + 6.0 * n - 10.0 * n * n) * std::pow(a, -0.7) * std::pow(s.concrete_strength / 40.0, 0.1);
    b.v_y = b.v_max * (0.65 - 0.05 * n);
    b.v_cr = b.v_max * (0.40 - 0.10 * n);
    b.v_u = b.v_max * (0.80 - 1.60 * n);
    b.delta_y = 2.5 * a * (1.0 + 2.5 * n);
    b.delta_max = 10.0 * a * (1.0 - 1.2 * n);
    b.delta_u = 18.0 * a * (1.0 - 1.5 * n);
    b.wall_height = s.height;
    return b;
}

std::vector<WallSpecimen> generate_synthetic_database(std::size_t n, std::uint64_t seed, double noise_level) {
    if (n < 10) fail(ErrorCode::InvariantViolation, "synthetic database needs n >= 10");
    if (!(noise_level >= 0.0)) fail(ErrorCode::InvariantViolation, "noise level must be >= 0");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto& ranges = synthetic_feature_ranges();
    auto draw = [&](std::size_t k) { return ranges[k].low + (ranges[k].high - ranges[k].low) * unit(rng); };

    std::vector<WallSpecimen> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        WallSpecimen s;
        s.id = fmt::format("SYN{:04d}", i + 1);
        s.concrete_strength = draw(0);
        s.web_long_yield = draw(1);
        s.web_transv_yield = draw(2);
        s.boundary_long_yield = draw(3);
        s.boundary_transv_yield = draw(4);
        s.web_long_ratio = draw(5);
        s.web_transv_ratio = draw(6);
        s.boundary_long_ratio = draw(7);
        s.boundary_transv_ratio = draw(8);
        s.axial_load_ratio = draw(9);
        s.aspect_ratio = draw(10);
        s.shear_span_ratio = draw(11);
        s.length = 600.0 + 2400.0 * unit(rng);
        s.thickness = s.length / (6.0 + 13.0 * unit(rng));
        s.height = s.aspect_ratio * s.length;
        s.stirrup_spacing = 75.0 + 175.0 * unit(rng);

        const double shape_draw = unit(rng);
        s.section_shape = shape_draw < 0.66   ? SectionShape::Rectangular
                          : shape_draw < 0.83 ? SectionShape::Barbell
                                              : SectionShape::Flanged;
        s.end_condition = unit(rng) < 0.88 ? EndCondition::Cantilever : EndCondition::FixedTop;
        const double mode_draw = unit(rng);
        if (s.aspect_ratio < 1.0) {
            s.failure_mode = FailureMode::Shear;
        } else if (s.aspect_ratio <= 2.0) {
            s.failure_mode = FailureMode::ShearFlexure;
        } else {
            s.failure_mode = mode_draw < 0.5 ? FailureMode::Flexure : FailureMode::ShearFlexure;
        }

        BackbonePoints b = synthetic_backbone(s);
        for (Output o : kOutputs) b.set(o, b.get(o) * std::exp(noise_level * gauss(rng)));
        b.v_y = std::min(b.v_y, b.v_max);
        b.v_cr = std::min(b.v_cr, b.v_y);
        b.v_u = std::min(b.v_u, b.v_max);
        b.delta_max = std::max(b.delta_max, b.delta_y);
        b.delta_u = std::max(b.delta_u, b.delta_max);
        s.backbone = b;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace wallgp::dataset
