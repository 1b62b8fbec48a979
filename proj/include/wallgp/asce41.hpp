#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "wallgp/dataset.hpp"

namespace wallgp::asce41 {

struct WallState {
    double axial_metric = 0.0;         // ((As - As') fyE + P) / (tw lw fc)
    double shear_stress_metric = 0.0;  // V / (tw lw sqrt(f'c)), psi convention by default
    bool confined_boundary = false;
};

struct Asce41ShearParams {
    double f = 0.0;  // Vcr / Vy
    double c = 0.0;  // Vu / Vmax
    double d = 0.0;  // dmax / h, percent
    double e = 0.0;  // du / h, percent
    double g = 0.0;  // dy / h, percent
    double strength_ratio = 1.0;  // Vmax / Vy
    bool operator==(const Asce41ShearParams&) const = default;
};

struct Asce41FlexureParams {
    double a = 0.0;  // theta_max - theta_y, rad
    double b = 0.0;  // theta_u - theta_y, rad
    double c = 0.0;  // Vu / Vmax
    bool operator==(const Asce41FlexureParams&) const = default;
};

struct ShearRow {
    double axial_upper = 0.0;  // inclusive; +inf for the last row
    Asce41ShearParams params;
};

struct FlexureRow {
    double axial = 0.0;
    double shear_stress = 0.0;
    bool confined = false;
    Asce41FlexureParams params;
};

struct Tables {
    std::vector<ShearRow> shear;  // ascending axial_upper
    std::vector<FlexureRow> flexure;
};

// Parses the whitespace-separated table format of data/asce41_tables.txt.
// Throws SchemaMismatch on malformed lines or an incomplete flexure grid.
Tables parse_tables(std::string_view text);
// The tables compiled into the library.
const Tables& embedded_tables();

Asce41ShearParams shear_controlled_params(const WallState& state, const Tables& tables = embedded_tables());
// Bilinear in (axial, shear stress) between the tabulated corners, clamped outside them.
Asce41FlexureParams flexure_controlled_params(const WallState& state, const Tables& tables = embedded_tables());

// Physical backbone from normalized shear parameters. Forces in kN, h in mm.
dataset::BackbonePoints back_calculate_shear(const Asce41ShearParams& params, double v_y, double h);
// Flexure backbone with rotations converted to top displacement (delta = theta h).
// Cracking is placed at yield.
dataset::BackbonePoints back_calculate_flexure(const Asce41FlexureParams& params, double v_y, double delta_y,
                                               double h);

enum class StressUnit { Psi, MPa };

// V / (tw lw sqrt(f'c)) for V in kN, lengths in mm, f'c in MPa, in the requested unit system.
double shear_stress_metric(double v_kn, double t_w, double l_w, double fc_mpa, StressUnit unit = StressUnit::Psi);

// Axial metric approximated by P / (Ag f'c).
WallState wall_state(const dataset::WallSpecimen& s, double shear_demand_kn, StressUnit unit = StressUnit::Psi);

// Nominal shear strength plug-in, kN.
using NominalShearFormula = std::function<double(const dataset::WallSpecimen&)>;

// Default plug-in:
//   Vn = tw lw (alpha_c sqrt(f'c) + rho_t f_yt) / 1000   [kN; mm, MPa]
//   alpha_c = 0.25 for hw/lw <= 1.5, 0.17 for hw/lw >= 2.0, linear in between.
// No upper cap is applied.
double aci_wall_shear(const dataset::WallSpecimen& s);

// Throws InvariantViolation if the plug-in returns a non-positive or non-finite value.
double nominal_shear_strength(const dataset::WallSpecimen& s, const NominalShearFormula& formula = aci_wall_shear);

// Shear-controlled baseline for one specimen with Vy = Vn and h = hw.
dataset::BackbonePoints shear_baseline(const dataset::WallSpecimen& s, double v_n);

}  // namespace wallgp::asce41
