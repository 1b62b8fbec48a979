#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "wallgp/error.hpp"
#include "wallgp/evaluation.hpp"

namespace wallgp::evaluation {

namespace {

Matrix select_rows(const Matrix& x, const std::vector<std::size_t>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
    return out;
}

Vector select(const Vector& y, const std::vector<std::size_t>& rows) {
    Vector out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(rows[i]));
    return out;
}

OutputResult run_output(const Matrix& x, const Vector& y, const TrialSplit& split, const SplitPlan& plan,
                        const PipelineConfig& config, int trial, std::size_t output_index) {
    OutputResult r;
    r.output = config.outputs[output_index];
    const Matrix x_train = select_rows(x, split.train);
    const Vector y_train = select(y, split.train);
    const Matrix x_test = select_rows(x, split.test);
    const Vector y_test = select(y, split.test);
    for (std::size_t i : split.test) r.test_ids.push_back(plan.ids[i]);
    r.test_actual.assign(y_test.data(), y_test.data() + y_test.size());

    gpr::FitConfig fit = config.fit;
    fit.feature_names = config.features;
    fit.output_name = std::string(dataset::output_name(r.output));
    fit.optimizer.seed =
        derive_seed(plan.seed, static_cast<std::uint64_t>(trial), 0x100 + static_cast<std::uint64_t>(r.output));
    try {
        FittedModel model = config.factory(x_train, y_train, fit);
        const Vector p_train = model.predict(x_train);
        const Vector p_test = model.predict(x_test);
        r.test_predicted.assign(p_test.data(), p_test.data() + p_test.size());
        r.params = std::move(model.params);
        r.target_transform = model.target_transform;
        r.standardizer = std::move(model.standardizer);
        r.relevance = std::move(model.relevance);
        r.train_r2 = r_squared(y_train, p_train);
        r.test_r2 = r_squared(y_test, p_test);
        r.rel_rmse = rel_rmse(y_test, p_test);
        r.pa_ratios = pa_ratios(y_test, p_test);
        r.ok = true;
    } catch (const Error& e) {
        r.ok = false;
        r.retained = false;
        r.error = e.what();
    }
    return r;
}

}  // namespace

FittedModel wrap_gpr_model(gpr::GprModel model) {
    auto shared = std::make_shared<const gpr::GprModel>(std::move(model));
    FittedModel out;
    out.params = shared->params();
    out.target_transform = shared->target_transform();
    out.standardizer = shared->standardizer();
    out.relevance = gpr::feature_relevance(*shared);
    out.predict = [shared](const Matrix& x) {
        Vector p(x.rows());
        for (Eigen::Index i = 0; i < x.rows(); ++i) p(i) = gpr::predict(*shared, x.row(i).transpose()).mean;
        return p;
    };
    return out;
}

FittedModel fit_gpr_model(const Matrix& x_train, const Vector& y_train, const gpr::FitConfig& config) {
    return wrap_gpr_model(gpr::fit(x_train, y_train, config));
}

std::vector<TrialResult> run_trials(std::span<const dataset::WallSpecimen> specimens, const SplitPlan& plan,
                                    const PipelineConfig& config) {
    if (specimens.size() != plan.ids.size()) {
        fail(ErrorCode::DimensionMismatch,
             fmt::format("{} specimens but the split plan covers {} ids", specimens.size(), plan.ids.size()));
    }
    for (std::size_t i = 0; i < specimens.size(); ++i) {
        if (specimens[i].id != plan.ids[i]) {
            fail(ErrorCode::InvariantViolation,
                 fmt::format("specimen {} is '{}' but the plan expects '{}'", i, specimens[i].id, plan.ids[i]));
        }
    }
    if (config.outputs.empty()) fail(ErrorCode::ConfigError, "no outputs selected");
    if (!config.factory) fail(ErrorCode::ConfigError, "no model factory");

    const Matrix x = dataset::feature_matrix(specimens, config.features);
    std::vector<Vector> targets;
    for (dataset::Output o : config.outputs) targets.push_back(dataset::target_vector(specimens, o));

    std::vector<TrialResult> results(plan.trials.size());
    auto run_one = [&](std::size_t t) {
        TrialResult tr;
        tr.trial = static_cast<int>(t);
        for (std::size_t k = 0; k < config.outputs.size(); ++k) {
            tr.outputs.push_back(run_output(x, targets[k], plan.trials[t], plan, config, static_cast<int>(t), k));
        }
        results[t] = std::move(tr);
    };

    std::size_t workers = config.threads > 0 ? static_cast<std::size_t>(config.threads)
                                              : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, plan.trials.size());
    if (workers <= 1) {
        for (std::size_t t = 0; t < plan.trials.size(); ++t) run_one(t);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t t = next++; t < plan.trials.size(); t = next++) {
                try {
                    run_one(t);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

bool is_overtrained(const OutputResult& r, const OvertrainingRule& rule) {
    return r.train_r2 - r.test_r2 > rule.max_gap || r.test_r2 < rule.min_test_r2;
}

std::vector<TrialResult> filter_overtrained(std::vector<TrialResult> results, const OvertrainingRule& rule) {
    for (auto& trial : results) {
        for (auto& r : trial.outputs) r.retained = r.ok && !is_overtrained(r, rule);
    }
    return results;
}

namespace {

bool in_top_k(const OutputResult& r, const std::string& feature, int k) {
    const auto limit = std::min(r.relevance.size(), static_cast<std::size_t>(std::max(k, 0)));
    for (std::size_t i = 0; i < limit; ++i) {
        if (r.relevance[i].name == feature) return true;
    }
    return false;
}

}  // namespace

AggregateReport aggregate(std::span<const TrialResult> results, const std::vector<std::string>& features,
                          const OvertrainingRule& rule, int top_k) {
    if (results.empty()) fail(ErrorCode::EmptyResults, "no trial results to aggregate");
    AggregateReport report;
    report.trial_count = static_cast<int>(results.size());
    report.top_k = top_k;
    report.rule = rule;
    report.features = features;

    const std::size_t n_outputs = results.front().outputs.size();
    for (const auto& t : results) {
        if (t.outputs.size() != n_outputs) {
            fail(ErrorCode::DimensionMismatch, "trial results cover different output sets");
        }
    }
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < n_outputs; ++k) {
        OutputAggregate agg;
        agg.output = results.front().outputs[k].output;
        std::vector<double> test_r2;
        std::vector<double> train_r2;
        std::vector<double> pooled;
        double rel_sum = 0.0;
        for (const auto& f : features) agg.tally.push_back({f, 0});
        for (const auto& t : results) {
            const OutputResult& r = t.outputs[k];
            if (!r.ok) {
                ++agg.failed;
                continue;
            }
            if (!r.retained) {
                ++agg.dropped;
                continue;
            }
            ++agg.retained;
            test_r2.push_back(r.test_r2);
            train_r2.push_back(r.train_r2);
            rel_sum += r.rel_rmse;
            pooled.insert(pooled.end(), r.pa_ratios.begin(), r.pa_ratios.end());
            for (auto& tally : agg.tally) {
                if (in_top_k(r, tally.feature, top_k)) ++tally.top_k;
            }
        }
        const std::string name(dataset::output_name(agg.output));
        if (agg.retained == 0) {
            agg.median_test_r2 = agg.median_train_r2 = agg.mean_rel_rmse = nan;
            agg.pa = {nan, nan};
            report.warnings.push_back(fmt::format("AllTrialsDropped: output {} has no retained trial "
                                                  "({} dropped as overtrained, {} failed)",
                                                  name, agg.dropped, agg.failed));
        } else {
            agg.median_test_r2 = median(test_r2);
            agg.median_train_r2 = median(train_r2);
            agg.mean_rel_rmse = rel_sum / agg.retained;
            agg.pa = summarize_ratios(pooled);
        }
        if (agg.failed > 0) {
            report.warnings.push_back(fmt::format("output {}: {} trial(s) failed to fit", name, agg.failed));
        }
        report.outputs.push_back(std::move(agg));
    }
    return report;
}

double top_k_hit_rate(std::span<const TrialResult> results, dataset::Output output,
                      const std::vector<std::string>& expected) {
    int retained = 0;
    int hits = 0;
    const int k = static_cast<int>(expected.size());
    for (const auto& t : results) {
        for (const auto& r : t.outputs) {
            if (r.output != output || !r.ok || !r.retained) continue;
            ++retained;
            bool all = true;
            for (const auto& f : expected) all = all && in_top_k(r, f, k);
            if (all) ++hits;
        }
    }
    return retained == 0 ? 0.0 : static_cast<double>(hits) / retained;
}

}  // namespace wallgp::evaluation
