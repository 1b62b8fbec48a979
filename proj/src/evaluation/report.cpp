#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "wallgp/error.hpp"
#include "wallgp/evaluation.hpp"

namespace wallgp::evaluation {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string cell(double v, int precision) { return std::isfinite(v) ? fmt::format("{:.{}f}", v, precision) : "n/a"; }

ComparisonTable compare_rows(std::span<const dataset::WallSpecimen> specimens,
                             std::span<const dataset::BackbonePoints> predictions,
                             const std::vector<dataset::Output>& outputs, const VnSource& source) {
    if (specimens.empty()) fail(ErrorCode::EmptyResults, "no test specimens to compare");
    if (specimens.size() != predictions.size()) {
        fail(ErrorCode::DimensionMismatch,
             fmt::format("{} specimens vs {} predictions", specimens.size(), predictions.size()));
    }
    std::vector<dataset::BackbonePoints> baseline;
    for (const auto& s : specimens) {
        if (!s.backbone) fail(ErrorCode::InvariantViolation, "specimen " + s.id + " has no measured backbone");
        baseline.push_back(asce41::shear_baseline(s, resolve_vn(s, source)));
    }
    const auto n = static_cast<Eigen::Index>(specimens.size());
    ComparisonTable table;
    table.specimen_count = specimens.size();
    for (dataset::Output o : outputs) {
        Vector actual(n);
        Vector gpr(n);
        Vector asce(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            actual(i) = specimens[k].backbone->get(o);
            gpr(i) = predictions[k].get(o);
            asce(i) = baseline[k].get(o);
        }
        table.rows.push_back({o, pa_stats(actual, gpr), pa_stats(actual, asce)});
    }
    return table;
}

}  // namespace

double resolve_vn(const dataset::WallSpecimen& s, const VnSource& source) {
    if (source.prefer_reported && s.nominal_shear_strength) {
        if (!(*s.nominal_shear_strength > 0.0)) {
            fail(ErrorCode::InvariantViolation, "reported Vn of " + s.id + " is not positive");
        }
        return *s.nominal_shear_strength;
    }
    return asce41::nominal_shear_strength(s, source.formula);
}

ComparisonTable compare_asce41(std::span<const dataset::WallSpecimen> specimens,
                               std::span<const dataset::BackbonePoints> predictions, const VnSource& source) {
    return compare_rows(specimens, predictions, {dataset::kOutputs.begin(), dataset::kOutputs.end()}, source);
}

ComparisonTable compare_asce41(std::span<const dataset::WallSpecimen> specimens,
                               const std::vector<std::pair<dataset::Output, gpr::GprModel>>& models,
                               const VnSource& source) {
    std::vector<dataset::BackbonePoints> predictions(specimens.size());
    std::vector<dataset::Output> outputs;
    for (const auto& [output, model] : models) {
        outputs.push_back(output);
        const Matrix x = dataset::feature_matrix(specimens, model.feature_names());
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            predictions[static_cast<std::size_t>(i)].set(output, gpr::predict(model, x.row(i).transpose()).mean);
        }
    }
    return compare_rows(specimens, predictions, outputs, source);
}

json report_to_document(const AggregateReport& report) {
    json doc;
    doc["kind"] = "wallgp.evaluation_report";
    doc["trial_count"] = report.trial_count;
    doc["top_k"] = report.top_k;
    doc["overtraining_rule"] = {{"max_gap", report.rule.max_gap}, {"min_test_r2", report.rule.min_test_r2}};
    doc["metric_definitions"] = {{"r2", "1 - SS_res/SS_tot, median over retained trials"},
                                 {"rel_rmse", "RMSE / mean(actual), mean over retained trials"},
                                 {"pa", "predicted / actual, pooled over retained test sets, sample std"}};
    doc["features"] = report.features;
    json outputs = json::array();
    for (const auto& o : report.outputs) {
        json tally = json::object();
        for (const auto& t : o.tally) tally[t.feature] = t.top_k;
        outputs.push_back({{"output", std::string(dataset::output_name(o.output))},
                           {"retained", o.retained},
                           {"dropped", o.dropped},
                           {"failed", o.failed},
                           {"median_test_r2", number(o.median_test_r2)},
                           {"median_train_r2", number(o.median_train_r2)},
                           {"mean_rel_rmse", number(o.mean_rel_rmse)},
                           {"pa_mean", number(o.pa.mean)},
                           {"pa_std", number(o.pa.std)},
                           {"top_k_tally", tally}});
    }
    doc["outputs"] = outputs;
    doc["warnings"] = report.warnings;
    return doc;
}

std::string report_to_table(const AggregateReport& report) {
    std::string out = fmt::format("{:<6} {:>8} {:>8} {:>9} {:>8} {:>8} {:>5} {:>5} {:>5}  top-{} features\n", "output",
                                  "R2 med", "R2 train", "RelRMSE", "P/A mean", "P/A std", "kept", "drop", "fail",
                                  report.top_k);
    for (const auto& o : report.outputs) {
        // Most frequent top-k features first.
        std::vector<FeatureTally> tally = o.tally;
        std::stable_sort(tally.begin(), tally.end(),
                         [](const FeatureTally& a, const FeatureTally& b) { return a.top_k > b.top_k; });
        std::string top;
        for (std::size_t i = 0; i < tally.size() && i < 3; ++i) {
            if (tally[i].top_k == 0) break;
            top += fmt::format("{}{}({})", i == 0 ? "" : " ", tally[i].feature, tally[i].top_k);
        }
        out += fmt::format("{:<6} {:>8} {:>8} {:>9} {:>8} {:>8} {:>5} {:>5} {:>5}  {}\n",
                           dataset::output_name(o.output), cell(o.median_test_r2, 3), cell(o.median_train_r2, 3),
                           cell(o.mean_rel_rmse, 3), cell(o.pa.mean, 3), cell(o.pa.std, 3), o.retained, o.dropped,
                           o.failed, top);
    }
    out += fmt::format("trials: {}  overtraining rule: gap > {} or test R2 < {}\n", report.trial_count,
                       report.rule.max_gap, report.rule.min_test_r2);
    for (const auto& w : report.warnings) out += "warning: " + w + "\n";
    return out;
}

json comparison_to_document(const ComparisonTable& table) {
    json rows = json::array();
    for (const auto& r : table.rows) {
        rows.push_back({{"output", std::string(dataset::output_name(r.output))},
                        {"gpr_pa_mean", number(r.gpr.mean)},
                        {"gpr_pa_std", number(r.gpr.std)},
                        {"asce41_pa_mean", number(r.asce41.mean)},
                        {"asce41_pa_std", number(r.asce41.std)}});
    }
    return {{"kind", "wallgp.asce41_comparison"}, {"specimens", table.specimen_count}, {"rows", rows}};
}

std::string comparison_to_table(const ComparisonTable& table) {
    std::string out = fmt::format("{:<6} {:>9} {:>9} {:>10} {:>10}\n", "output", "GPR mean", "GPR std",
                                  "ASCE mean", "ASCE std");
    for (const auto& r : table.rows) {
        out += fmt::format("{:<6} {:>9} {:>9} {:>10} {:>10}\n", dataset::output_name(r.output), cell(r.gpr.mean, 3),
                           cell(r.gpr.std, 3), cell(r.asce41.mean, 3), cell(r.asce41.std, 3));
    }
    out += fmt::format("test specimens: {}\n", table.specimen_count);
    return out;
}

}  // namespace wallgp::evaluation
