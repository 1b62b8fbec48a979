#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wallgp/numerics.hpp"

namespace wallgp::dataset {

enum class FailureMode { Shear, ShearFlexure, Flexure };
enum class SectionShape { Rectangular, Barbell, Flanged };
enum class EndCondition { Cantilever, FixedTop };

std::string_view to_string(FailureMode m);
std::string_view to_string(SectionShape s);
std::string_view to_string(EndCondition e);
std::optional<FailureMode> parse_failure_mode(std::string_view text);
std::optional<SectionShape> parse_section_shape(std::string_view text);
std::optional<EndCondition> parse_end_condition(std::string_view text);

// The seven backbone targets. Forces in kN, displacements in mm.
enum class Output { Vcr, Vy, DeltaY, Vmax, DeltaMax, Vu, DeltaU };
inline constexpr std::array<Output, 7> kOutputs = {Output::Vcr,      Output::Vy, Output::DeltaY, Output::Vmax,
                                                   Output::DeltaMax, Output::Vu, Output::DeltaU};
std::string_view output_name(Output o);  // "Vcr", "Vy", "dy", "Vmax", "dmax", "Vu", "du"
std::optional<Output> parse_output(std::string_view name);
bool is_force(Output o);

struct BackbonePoints {
    double v_cr = 0.0;
    double v_y = 0.0;
    double delta_y = 0.0;
    double v_max = 0.0;
    double delta_max = 0.0;
    double v_u = 0.0;
    double delta_u = 0.0;
    double wall_height = 0.0;  // mm, for drift conversion; 0 when unknown

    double get(Output o) const;
    void set(Output o, double value);
    // 0 < Vcr <= Vy <= Vmax, Vu <= Vmax, 0 < dy <= dmax <= du. Empty when valid.
    std::vector<std::string> invariant_violations() const;
    bool operator==(const BackbonePoints&) const = default;
};

struct WallSpecimen {
    std::string id;
    // Twelve default design properties.
    double concrete_strength = 0.0;      // f'c, MPa
    double web_long_yield = 0.0;         // f_yl, MPa
    double web_transv_yield = 0.0;       // f_yt, MPa
    double boundary_long_yield = 0.0;    // f_ybl, MPa
    double boundary_transv_yield = 0.0;  // f_ysh, MPa
    double web_long_ratio = 0.0;         // rho_l, fraction
    double web_transv_ratio = 0.0;       // rho_t, fraction
    double boundary_long_ratio = 0.0;    // rho_bl, fraction
    double boundary_transv_ratio = 0.0;  // rho_sh, fraction
    double axial_load_ratio = 0.0;       // P / (A_g f'c)
    double aspect_ratio = 0.0;           // h_w / l_w
    double shear_span_ratio = 0.0;       // M / (V l_w)
    // Geometry, mm.
    double length = 0.0;     // l_w
    double thickness = 0.0;  // t_w
    double height = 0.0;     // h_w
    std::optional<double> stirrup_spacing;
    FailureMode failure_mode = FailureMode::Shear;
    SectionShape section_shape = SectionShape::Rectangular;
    EndCondition end_condition = EndCondition::Cantilever;
    std::optional<BackbonePoints> backbone;
    std::optional<double> nominal_shear_strength;  // reported V_n, kN

    std::vector<std::string> invariant_violations() const;
    bool operator==(const WallSpecimen&) const = default;
};

// Feature columns use the canonical CSV names ("fc_mpa", "rho_l_frac", "alr", ...).
const std::vector<std::string>& default_feature_names();
// The twelve defaults plus the geometry columns (lw_mm, tw_mm, hw_mm, s_mm).
const std::vector<std::string>& selectable_feature_names();
double feature_value(const WallSpecimen& s, std::string_view name);
numerics::Matrix feature_matrix(std::span<const WallSpecimen> specimens, const std::vector<std::string>& names);
// Throws InvariantViolation when a specimen has no backbone.
numerics::Vector target_vector(std::span<const WallSpecimen> specimens, Output o);

// ---- CSV ------------------------------------------------------------------

struct RowIssue {
    std::size_t row = 0;  // 1-based data row (header excluded)
    std::string message;
};

struct CsvReadResult {
    std::vector<WallSpecimen> specimens;
    std::vector<RowIssue> issues;
};

// Header problems throw (SchemaMismatch, UnitError). Row problems are collected.
CsvReadResult read_csv(std::istream& in);
// Like read_csv, but throws one InvariantViolation listing every bad row.
std::vector<WallSpecimen> load_csv(const std::filesystem::path& path);
void write_csv(std::ostream& out, std::span<const WallSpecimen> specimens);
void save_csv(const std::filesystem::path& path, std::span<const WallSpecimen> specimens);

// ---- Scope ----------------------------------------------------------------

enum class ScopeRule { FailureMode, LengthToThickness, AspectRatio };
std::string_view to_string(ScopeRule r);

struct ScopeCriteria {
    std::vector<FailureMode> modes = {FailureMode::Shear, FailureMode::ShearFlexure};
    double max_length_to_thickness = 20.0;
    double max_aspect_ratio = 3.0;

    static ScopeCriteria shear_dominated() { return {}; }
    static ScopeCriteria all_modes();
};

struct Exclusion {
    WallSpecimen specimen;
    std::vector<ScopeRule> reasons;
};

struct ScopePartition {
    std::vector<WallSpecimen> in_scope;
    std::vector<Exclusion> excluded;
};

ScopePartition filter_scope(std::span<const WallSpecimen> specimens, const ScopeCriteria& criteria = {});

// ---- Hysteresis and backbone extraction -------------------------------------

struct HysteresisSample {
    double displacement = 0.0;  // mm
    double force = 0.0;         // kN
};

struct HysteresisRecord {
    std::vector<HysteresisSample> samples;
    double wall_height = 0.0;  // mm
};

// Two-column CSV: disp_mm, force_kn.
HysteresisRecord load_hysteresis_csv(const std::filesystem::path& path, double wall_height);
HysteresisRecord read_hysteresis_csv(std::istream& in, double wall_height);

enum class YieldStrategy {
    EquivalentEnergy,  // elastic-perfectly-plastic curve with equal area up to the peak
    SecantFraction,    // first envelope point reaching yield_secant_fraction * Vmax
};

struct ExtractionConfig {
    YieldStrategy yield = YieldStrategy::EquivalentEnergy;
    double elastic_secant_fraction = 0.4;   // defines the bilinear elastic stiffness
    double yield_secant_fraction = 0.75;
    double cracking_stiffness_ratio = 0.7;  // secant / initial tangent at cracking
    double initial_stiffness_window = 0.1;  // leading fraction of the envelope used for the initial tangent
    double ultimate_force_ratio = 0.8;      // post-peak force defining the ultimate point
    double new_amplitude_tolerance = 0.01;  // an excursion counts as a first cycle when it exceeds the prior peak by 1%
};

// Piecewise-linear envelope starting after the origin; displacement and force are magnitudes.
struct Envelope {
    std::vector<double> displacement;
    std::vector<double> force;
};

// First-cycle envelope of one loading direction (+1 or -1), reported as magnitudes.
Envelope direction_envelope(const HysteresisRecord& record, int direction, const ExtractionConfig& config = {});
// Average of the positive and negative envelopes on their common displacement grid.
Envelope averaged_envelope(const HysteresisRecord& record, const ExtractionConfig& config = {});
BackbonePoints backbone_from_envelope(const Envelope& envelope, double wall_height,
                                      const ExtractionConfig& config = {});
// Throws TooFewCycles or NoPeak.
BackbonePoints extract_backbone(const HysteresisRecord& record, const ExtractionConfig& config = {});

// ---- Polyline -------------------------------------------------------------

struct Vertex {
    double displacement = 0.0;
    double force = 0.0;
    bool operator==(const Vertex&) const = default;
};

// (0,0), cracking (dropped when it coincides with yield), yield, peak, ultimate.
std::vector<Vertex> backbone_to_polyline(const BackbonePoints& b);
BackbonePoints backbone_from_polyline(std::span<const Vertex> vertices, double wall_height = 0.0);

struct Polyline {
    std::string id;
    std::vector<Vertex> vertices;
    bool operator==(const Polyline&) const = default;
};

// Long-format CSV: id,vertex,disp_mm,force_kn. Numbers use shortest round-trip form.
void write_polyline_csv(std::ostream& out, std::span<const Polyline> polylines);
std::vector<Polyline> read_polyline_csv(std::istream& in);

// ---- Synthetic database ------------------------------------------------------

// Noise-free generating functions of the synthetic database. With n = axial
// load ratio and a = aspect ratio (the two dominant features):
//   Vmax = 1000 (1 + 6n - 10n^2) a^-0.7 (f'c/40)^0.1
//   Vy   = Vmax (0.65 - 0.05n)     Vcr = Vmax (0.40 - 0.10n)     Vu = Vmax (0.80 - 1.60n)
//   dy   = 2.5 a (1 + 2.5n)        dmax = 10 a (1 - 1.2n)        du = 18 a (1 - 1.5n)
// Forces in kN, displacements in mm.
BackbonePoints synthetic_backbone(const WallSpecimen& s);

// Feature distributions (all uniform): f'c 20-80 MPa; every yield strength 300-650 MPa;
// rho_l 0.0025-0.03; rho_t 0.0025-0.015; rho_bl 0.005-0.06; rho_sh 0-0.02;
// axial load ratio 0-0.4; aspect ratio 0.3-3.0; shear-span ratio 0.3-3.0 drawn
// independently of the aspect ratio.
// l_w 600-3000 mm, l_w/t_w 6-19, s 75-250 mm. Failure mode: S for a < 1, SF for
// a <= 2, otherwise F or SF with equal odds.
struct FeatureRange {
    std::string_view name;
    double low;
    double high;
};
const std::vector<FeatureRange>& synthetic_feature_ranges();

// Each target gets an independent multiplicative exp(noise_level * N(0,1)) factor,
// after which the backbone ordering invariants are restored by clamping.
// Deterministic for a given seed. Throws InvariantViolation for n < 10.
std::vector<WallSpecimen> generate_synthetic_database(std::size_t n, std::uint64_t seed, double noise_level);

}  // namespace wallgp::dataset
