#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "wallgp/asce41.hpp"
#include "wallgp/error.hpp"

using namespace wallgp;
using namespace wallgp::asce41;
using dataset::BackbonePoints;

namespace {

struct FlexureFixture {
    double axial;
    double shear;
    bool confined;
    double a, b, c;
};

// Published corner rows, typed in independently of data/asce41_tables.txt.
const FlexureFixture kFlexure[] = {
    {0.10, 4, true, 0.015, 0.020, 0.75},  {0.10, 6, true, 0.010, 0.015, 0.40},
    {0.25, 4, true, 0.009, 0.012, 0.60},  {0.25, 6, true, 0.005, 0.010, 0.30},
    {0.10, 4, false, 0.008, 0.015, 0.60}, {0.10, 6, false, 0.006, 0.010, 0.30},
    {0.25, 4, false, 0.003, 0.005, 0.25}, {0.25, 6, false, 0.002, 0.004, 0.20},
};

dataset::WallSpecimen reference_wall() {
    dataset::WallSpecimen s;
    s.id = "REF";
    s.concrete_strength = 30.0;
    s.web_long_yield = 420.0;
    s.web_transv_yield = 420.0;
    s.boundary_long_yield = 420.0;
    s.boundary_transv_yield = 420.0;
    s.web_long_ratio = 0.005;
    s.web_transv_ratio = 0.005;
    s.boundary_long_ratio = 0.02;
    s.boundary_transv_ratio = 0.0;
    s.axial_load_ratio = 0.1;
    s.length = 1500.0;
    s.thickness = 150.0;
    s.height = 1500.0;
    s.aspect_ratio = 1.0;
    s.shear_span_ratio = 1.0;
    return s;
}

}  // namespace

TEST_CASE("shear-controlled rows") {
    const auto low = shear_controlled_params({0.3, 0.0, false});
    CHECK(low == Asce41ShearParams{0.6, 0.2, 1.0, 2.0, 0.4, 1.0});
    const auto high = shear_controlled_params({0.7, 0.0, false});
    CHECK(high == Asce41ShearParams{0.6, 0.0, 0.75, 1.0, 0.4, 1.0});
    CHECK(shear_controlled_params({0.5, 0.0, false}) == low);
    CHECK(shear_controlled_params({std::nextafter(0.5, 1.0), 0.0, false}) == high);
    CHECK(shear_controlled_params({0.0, 3.0, true}) == low);
}

TEST_CASE("flexure-controlled corners reproduce the table exactly") {
    for (const auto& f : kFlexure) {
        const auto p = flexure_controlled_params({f.axial, f.shear, f.confined});
        CHECK(p.a == f.a);
        CHECK(p.b == f.b);
        CHECK(p.c == f.c);
    }
}

TEST_CASE("flexure lookups clamp beyond the tabulated corners") {
    CHECK(flexure_controlled_params({0.0, 1.0, true}) == Asce41FlexureParams{0.015, 0.020, 0.75});
    CHECK(flexure_controlled_params({0.6, 9.0, false}) == Asce41FlexureParams{0.002, 0.004, 0.20});
}

TEST_CASE("flexure midpoint interpolation") {
    const auto p = flexure_controlled_params({0.175, 4.0, true});
    CHECK(p.a == doctest::Approx(0.012).epsilon(1e-12));
    CHECK(p.b == doctest::Approx(0.016).epsilon(1e-12));
    CHECK(p.c == doctest::Approx(0.675).epsilon(1e-12));
    const auto q = flexure_controlled_params({0.1, 5.0, false});
    CHECK(q.a == doctest::Approx(0.007).epsilon(1e-12));
}

TEST_CASE("property: interpolated values are bounded by their bounding rows") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> axial(0.1, 0.25), shear(4.0, 6.0);
    for (int rep = 0; rep < 200; ++rep) {
        const bool confined = rep % 2 == 0;
        const auto p = flexure_controlled_params({axial(rng), shear(rng), confined});
        double lo_a = 1, hi_a = 0, lo_b = 1, hi_b = 0, lo_c = 1, hi_c = 0;
        for (const auto& f : kFlexure) {
            if (f.confined != confined) continue;
            lo_a = std::min(lo_a, f.a), hi_a = std::max(hi_a, f.a);
            lo_b = std::min(lo_b, f.b), hi_b = std::max(hi_b, f.b);
            lo_c = std::min(lo_c, f.c), hi_c = std::max(hi_c, f.c);
        }
        CHECK(p.a >= lo_a - 1e-15);
        CHECK(p.a <= hi_a + 1e-15);
        CHECK(p.b >= lo_b - 1e-15);
        CHECK(p.b <= hi_b + 1e-15);
        CHECK(p.c >= lo_c - 1e-15);
        CHECK(p.c <= hi_c + 1e-15);
        CHECK(p.a <= p.b);
    }
}

TEST_CASE("property: interpolation along one axis is bounded by its two rows") {
    for (double t = 0.0; t <= 1.0; t += 0.05) {
        const double axial = 0.1 + 0.15 * t;
        const auto p = flexure_controlled_params({axial, 6.0, false});
        CHECK(p.a <= 0.006 + 1e-15);
        CHECK(p.a >= 0.002 - 1e-15);
        CHECK(p.c <= 0.30 + 1e-15);
        CHECK(p.c >= 0.20 - 1e-15);
    }
}

TEST_CASE("back-calculated shear backbone") {
    const auto b = back_calculate_shear(shear_controlled_params({0.3, 0, false}), 100.0, 1000.0);
    CHECK(b.v_cr == 60.0);
    CHECK(b.v_y == 100.0);
    CHECK(b.delta_y == 4.0);
    CHECK(b.v_max == 100.0);
    CHECK(b.delta_max == 10.0);
    CHECK(b.delta_u == 20.0);
    CHECK(b.v_u == 20.0);
    CHECK(b.wall_height == 1000.0);

    const auto z = back_calculate_shear(shear_controlled_params({0.7, 0, false}), 100.0, 1000.0);
    CHECK(z.v_u == 0.0);
    CHECK(z.delta_u == 10.0);
    CHECK(z.delta_max == 7.5);
}

TEST_CASE("property: every shear row gives a valid backbone") {
    for (const auto& row : embedded_tables().shear) {
        const auto b = back_calculate_shear(row.params, 250.0, 2400.0);
        CHECK(b.v_cr > 0.0);
        CHECK(b.v_cr <= b.v_y);
        CHECK(b.v_y <= b.v_max);
        CHECK(b.v_u <= b.v_max);
        CHECK(b.delta_y > 0.0);
        CHECK(b.delta_y <= b.delta_max);
        CHECK(b.delta_max <= b.delta_u);
    }
}

TEST_CASE("property: back-calculation scales linearly") {
    const auto p = shear_controlled_params({0.2, 0, false});
    const auto base = back_calculate_shear(p, 100.0, 1000.0);
    for (double k : {0.5, 2.0, 3.7}) {
        const auto fv = back_calculate_shear(p, 100.0 * k, 1000.0);
        const auto fh = back_calculate_shear(p, 100.0, 1000.0 * k);
        for (auto o : dataset::kOutputs) {
            if (dataset::is_force(o)) {
                CHECK(fv.get(o) == doctest::Approx(k * base.get(o)).epsilon(1e-14));
                CHECK(fh.get(o) == base.get(o));
            } else {
                CHECK(fh.get(o) == doctest::Approx(k * base.get(o)).epsilon(1e-14));
                CHECK(fv.get(o) == base.get(o));
            }
        }
    }
}

TEST_CASE("flexure back-calculation converts rotations with the wall height") {
    const auto b = back_calculate_flexure({0.015, 0.020, 0.75}, 400.0, 8.0, 2000.0);
    CHECK(b.delta_max == doctest::Approx(8.0 + 30.0).epsilon(1e-14));
    CHECK(b.delta_u == doctest::Approx(8.0 + 40.0).epsilon(1e-14));
    CHECK(b.v_u == doctest::Approx(300.0).epsilon(1e-14));
    CHECK(b.v_max == 400.0);
    CHECK(b.v_cr == 400.0);
}

TEST_CASE("embedded tables parse and the parser rejects malformed input") {
    const auto& t = embedded_tables();
    CHECK(t.shear.size() == 2);
    CHECK(t.flexure.size() == 8);
    CHECK(std::isinf(t.shear.back().axial_upper));
    CHECK_THROWS_AS(parse_tables("shear 0.5 0.6 0.2\n"), Error);
    CHECK_THROWS_AS(parse_tables("bogus 1 2 3\n"), Error);
    CHECK_THROWS_AS(parse_tables("shear inf 0.6 0 0.75 1 0.4 1\n"), Error);  // no flexure grid
}

TEST_CASE("reference wall nominal shear strength") {
    // tw lw (alpha_c sqrt(f'c) + rho_t fyt) = 150 * 1500 * (0.25 sqrt(30) + 0.005 * 420) N
    const double expected = 150.0 * 1500.0 * (0.25 * std::sqrt(30.0) + 0.005 * 420.0) / 1000.0;
    CHECK(aci_wall_shear(reference_wall()) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(aci_wall_shear(reference_wall()) == doctest::Approx(780.594).epsilon(1e-6));
}

TEST_CASE("nominal shear strength scales with thickness and increases with strength terms") {
    auto s = reference_wall();
    const double base = nominal_shear_strength(s);
    s.thickness *= 2.0;
    CHECK(nominal_shear_strength(s) == doctest::Approx(2.0 * base).epsilon(1e-14));
    for (int field = 0; field < 3; ++field) {
        auto w = reference_wall();
        const double before = nominal_shear_strength(w);
        if (field == 0) w.concrete_strength *= 1.1;
        if (field == 1) w.web_transv_ratio *= 1.1;
        if (field == 2) w.web_transv_yield *= 1.1;
        CHECK(nominal_shear_strength(w) > before);
    }
}

TEST_CASE("aspect ratio coefficient interpolates between 0.25 and 0.17") {
    auto s = reference_wall();
    s.web_transv_ratio = 0.0;
    const double unit = s.thickness * s.length * std::sqrt(s.concrete_strength) / 1000.0;
    s.aspect_ratio = 1.5;
    CHECK(aci_wall_shear(s) == doctest::Approx(0.25 * unit).epsilon(1e-14));
    s.aspect_ratio = 1.75;
    CHECK(aci_wall_shear(s) == doctest::Approx(0.21 * unit).epsilon(1e-14));
    s.aspect_ratio = 2.5;
    CHECK(aci_wall_shear(s) == doctest::Approx(0.17 * unit).epsilon(1e-14));
}

TEST_CASE("plug-in formula contract") {
    const auto s = reference_wall();
    const double vn = nominal_shear_strength(s, [](const dataset::WallSpecimen&) { return 500.0; });
    CHECK(vn == 500.0);
    const auto b = shear_baseline(s, vn);
    CHECK(b.v_y == 500.0);
    CHECK(b.v_cr == 300.0);
    CHECK(b.delta_y == doctest::Approx(0.004 * 1500.0).epsilon(1e-14));
    CHECK_THROWS_AS(nominal_shear_strength(s, [](const dataset::WallSpecimen&) { return -1.0; }), Error);
    CHECK_THROWS_AS(nominal_shear_strength(
                        s, [](const dataset::WallSpecimen&) { return std::numeric_limits<double>::quiet_NaN(); }),
                    Error);
}

TEST_CASE("shear stress metric unit conventions") {
    // 1 MPa^0.5 ratio: V = tw lw sqrt(fc) / 1000 kN
    const double v = 150.0 * 1500.0 * std::sqrt(30.0) / 1000.0;
    CHECK(shear_stress_metric(v, 150.0, 1500.0, 30.0, StressUnit::MPa) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(shear_stress_metric(v, 150.0, 1500.0, 30.0, StressUnit::Psi) ==
          doctest::Approx(std::sqrt(145.037737730209)).epsilon(1e-12));
    const auto st = wall_state(reference_wall(), v, StressUnit::MPa);
    CHECK(st.axial_metric == 0.1);
    CHECK(!st.confined_boundary);
}
