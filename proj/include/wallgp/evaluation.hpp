#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wallgp/asce41.hpp"
#include "wallgp/dataset.hpp"
#include "wallgp/gpr.hpp"

namespace wallgp::evaluation {

using numerics::Matrix;
using numerics::Vector;

// ---- Splits ---------------------------------------------------------------

struct TrialSplit {
    std::vector<std::size_t> train;  // positions into SplitPlan::ids
    std::vector<std::size_t> test;
};

struct SplitPlan {
    std::uint64_t seed = 0;
    int trial_count = 100;
    double train_fraction = 0.9;
    std::vector<std::string> ids;
    std::vector<TrialSplit> trials;
};

// Throws TooFewSpecimens for fewer than 20 ids, ConfigError for a bad fraction or trial count.
SplitPlan make_splits(const std::vector<std::string>& ids, std::uint64_t seed, int trials = 100,
                      double fraction = 0.9);

// Deterministic 64-bit mix used to derive per-trial and per-output seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

// ---- Metrics --------------------------------------------------------------

// 1 - SS_res / SS_tot. Throws DimensionMismatch or DegenerateActuals.
double r_squared(const Vector& actual, const Vector& predicted);
// RMSE / mean(actual). Throws NonPositiveMean.
double rel_rmse(const Vector& actual, const Vector& predicted);

struct PaStats {
    double mean = 0.0;
    double std = 0.0;  // sample (n-1); 0 for a single ratio
};
// Element-wise predicted / actual. Throws NonPositiveActual.
std::vector<double> pa_ratios(const Vector& actual, const Vector& predicted);
PaStats pa_stats(const Vector& actual, const Vector& predicted);
PaStats summarize_ratios(std::span<const double> ratios);

double median(std::vector<double> values);

// ---- Trials ---------------------------------------------------------------

// A trained per-output model as seen by the harness.
struct FittedModel {
    std::function<Vector(const Matrix& x)> predict;  // physical units, one value per row
    gpr::KernelParams params;
    transforms::TargetTransform target_transform;
    transforms::Standardizer standardizer;
    std::vector<gpr::FeatureRelevance> relevance;
};

using ModelFactory = std::function<FittedModel(const Matrix& x_train, const Vector& y_train, const gpr::FitConfig&)>;

// Fits a GPR model per call.
FittedModel fit_gpr_model(const Matrix& x_train, const Vector& y_train, const gpr::FitConfig& config);
FittedModel wrap_gpr_model(gpr::GprModel model);

struct PipelineConfig {
    std::vector<std::string> features = dataset::default_feature_names();
    std::vector<dataset::Output> outputs = {dataset::kOutputs.begin(), dataset::kOutputs.end()};
    gpr::FitConfig fit;
    int threads = 1;  // 0 uses the hardware concurrency
    ModelFactory factory = fit_gpr_model;
};

struct OutputResult {
    dataset::Output output = dataset::Output::Vmax;
    bool ok = false;
    std::string error;  // set when the fit or the metrics failed
    bool retained = true;
    double train_r2 = 0.0;
    double test_r2 = 0.0;
    double rel_rmse = 0.0;
    std::vector<double> pa_ratios;
    std::vector<std::string> test_ids;
    std::vector<double> test_actual;
    std::vector<double> test_predicted;
    gpr::KernelParams params;
    transforms::TargetTransform target_transform;
    transforms::Standardizer standardizer;
    std::vector<gpr::FeatureRelevance> relevance;
};

struct TrialResult {
    int trial = 0;
    std::vector<OutputResult> outputs;  // in PipelineConfig::outputs order
};

// `specimens` must be aligned with plan.ids. Fit failures are recorded per output.
std::vector<TrialResult> run_trials(std::span<const dataset::WallSpecimen> specimens, const SplitPlan& plan,
                                    const PipelineConfig& config);

struct OvertrainingRule {
    double max_gap = 0.4;      // train_r2 - test_r2
    double min_test_r2 = 0.2;
};

bool is_overtrained(const OutputResult& r, const OvertrainingRule& rule);

// Marks overtrained (trial, output) results as not retained and returns the updated list.
std::vector<TrialResult> filter_overtrained(std::vector<TrialResult> results, const OvertrainingRule& rule = {});

// ---- Aggregation ----------------------------------------------------------

struct FeatureTally {
    std::string feature;
    int top_k = 0;  // retained results ranking this feature within the top k
};

struct OutputAggregate {
    dataset::Output output = dataset::Output::Vmax;
    int retained = 0;
    int dropped = 0;
    int failed = 0;
    double median_test_r2 = 0.0;
    double median_train_r2 = 0.0;
    double mean_rel_rmse = 0.0;
    PaStats pa;
    std::vector<FeatureTally> tally;  // in feature order
};

struct AggregateReport {
    int trial_count = 0;
    int top_k = 2;
    OvertrainingRule rule;
    std::vector<std::string> features;
    std::vector<OutputAggregate> outputs;
    std::vector<std::string> warnings;
};

// Aggregates retained results. An output with no retained trial gets NaN metrics and a warning.
// Throws EmptyResults when `results` is empty.
AggregateReport aggregate(std::span<const TrialResult> results, const std::vector<std::string>& features,
                          const OvertrainingRule& rule = {}, int top_k = 2);

// Fraction of retained results whose top-k features are exactly `expected` (in any order).
double top_k_hit_rate(std::span<const TrialResult> results, dataset::Output output,
                      const std::vector<std::string>& expected);

// ---- ASCE 41 comparison -----------------------------------------------------

struct VnSource {
    bool prefer_reported = true;  // use the specimen's reported Vn when present
    asce41::NominalShearFormula formula = asce41::aci_wall_shear;
};

double resolve_vn(const dataset::WallSpecimen& s, const VnSource& source);

struct ComparisonRow {
    dataset::Output output = dataset::Output::Vmax;
    PaStats gpr;
    PaStats asce41;
};

struct ComparisonTable {
    std::size_t specimen_count = 0;
    std::vector<ComparisonRow> rows;
};

// `predictions[i]` holds the model predictions for `specimens[i]`. Throws EmptyResults on an empty set.
ComparisonTable compare_asce41(std::span<const dataset::WallSpecimen> specimens,
                               std::span<const dataset::BackbonePoints> predictions, const VnSource& source = {});
// Convenience overload predicting with one fitted GPR model per output.
ComparisonTable compare_asce41(std::span<const dataset::WallSpecimen> specimens,
                               const std::vector<std::pair<dataset::Output, gpr::GprModel>>& models,
                               const VnSource& source = {});

// ---- Reports --------------------------------------------------------------

nlohmann::json report_to_document(const AggregateReport& report);
std::string report_to_table(const AggregateReport& report);
nlohmann::json comparison_to_document(const ComparisonTable& table);
std::string comparison_to_table(const ComparisonTable& table);

}  // namespace wallgp::evaluation
