#include <algorithm>
#include <cmath>
#include <string>

#include "wallgp/error.hpp"
#include "wallgp/gpr.hpp"

namespace wallgp::gpr {

GprModel GprModel::assemble(Matrix training_inputs, Vector training_targets, KernelParams params,
                            transforms::Standardizer standardizer, transforms::TargetTransform target_transform,
                            std::vector<std::string> feature_names, std::string output_name) {
    if (training_inputs.rows() != training_targets.size()) {
        fail(ErrorCode::DimensionMismatch, "GprModel: " + std::to_string(training_inputs.rows()) + " inputs vs " +
                                               std::to_string(training_targets.size()) + " targets");
    }
    if (training_inputs.rows() < 1) fail(ErrorCode::DimensionMismatch, "GprModel: no training rows");
    params.validate(training_inputs.cols());
    if (standardizer.mean.size() != training_inputs.cols() || standardizer.scale.size() != training_inputs.cols()) {
        fail(ErrorCode::DimensionMismatch, "GprModel: standardizer dimension does not match training inputs");
    }
    if (!feature_names.empty() && static_cast<Eigen::Index>(feature_names.size()) != training_inputs.cols()) {
        fail(ErrorCode::DimensionMismatch, "GprModel: feature name count does not match training inputs");
    }

    GprModel model;
    model.inputs_ = std::move(training_inputs);
    model.targets_ = std::move(training_targets);
    model.params_ = std::move(params);
    model.standardizer_ = std::move(standardizer);
    model.target_transform_ = target_transform;
    model.feature_names_ = std::move(feature_names);
    model.output_name_ = std::move(output_name);

    const Matrix k_y = covariance_matrix(model.inputs_, model.params_, true);
    numerics::JitteredFactor factor = numerics::cholesky_with_jitter(k_y);
    model.cholesky_ = std::move(factor.lower);
    model.jitter_ = factor.jitter;
    model.alpha_ = numerics::solve_spd(model.cholesky_, model.targets_);
    return model;
}

KernelParams initial_params(const Vector& y, Eigen::Index dimension) {
    const double mean = y.mean();
    double variance = y.size() > 1 ? (y.array() - mean).square().sum() / static_cast<double>(y.size() - 1) : 1.0;
    if (!(variance > 0.0)) variance = 1.0;
    KernelParams p;
    p.lengthscales = Vector::Ones(dimension);
    p.signal_variance = variance;
    p.noise_variance = 0.1 * variance;
    return p;
}

GprModel fit(const Matrix& x, const Vector& y, const FitConfig& config) {
    if (x.rows() != y.size()) {
        fail(ErrorCode::DimensionMismatch, "fit: " + std::to_string(x.rows()) + " inputs vs " +
                                               std::to_string(y.size()) + " targets");
    }
    if (x.rows() < 2) fail(ErrorCode::DimensionMismatch, "fit: need at least 2 training rows");
    if (!config.feature_names.empty() && static_cast<Eigen::Index>(config.feature_names.size()) != x.cols()) {
        fail(ErrorCode::DimensionMismatch, "fit: feature name count does not match inputs");
    }

    transforms::Standardizer standardizer;
    if (config.standardize_features) {
        standardizer = transforms::standardize_fit(x);
    } else {
        standardizer.mean = Vector::Zero(x.cols());
        standardizer.scale = Vector::Ones(x.cols());
    }
    Matrix inputs = transforms::standardize_apply(standardizer, x);

    const std::span<const double> raw(y.data(), static_cast<std::size_t>(y.size()));
    const transforms::TargetTransform target = transforms::fit_target_transform(raw, config.target);
    Vector latent(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) latent(i) = target.forward(y(i));

    KernelParams params = initial_params(latent, x.cols());
    if (config.optimizer.fixed_noise_variance) params.noise_variance = *config.optimizer.fixed_noise_variance;
    if (config.optimize) params = optimize_hyperparameters(inputs, latent, params, config.optimizer);

    return GprModel::assemble(std::move(inputs), std::move(latent), std::move(params), std::move(standardizer), target,
                              config.feature_names, config.output_name);
}

Prediction predict_latent(const GprModel& model, const Vector& standardized_query) {
    if (standardized_query.size() != model.dimension()) {
        fail(ErrorCode::DimensionMismatch, "predict: query has " + std::to_string(standardized_query.size()) +
                                               " features, model expects " + std::to_string(model.dimension()));
    }
    const Vector k_star = cross_covariance(model.training_inputs(), standardized_query, model.params());
    Prediction p;
    p.mean = k_star.dot(model.alpha());
    const Vector v = model.cholesky().triangularView<Eigen::Lower>().solve(k_star);
    p.variance = std::max(0.0, model.params().signal_variance - v.squaredNorm());
    return p;
}

Prediction predict(const GprModel& model, const Vector& query) {
    const Vector standardized = transforms::standardize_apply_row(model.standardizer(), query);
    const Prediction latent = predict_latent(model, standardized);
    const auto& target = model.target_transform();
    Prediction p;
    p.mean = target.inverse(latent.mean);
    const double slope = target.inverse_slope(latent.mean);
    p.variance = slope * slope * latent.variance;
    return p;
}

std::vector<FeatureRelevance> feature_relevance(const KernelParams& params, const std::vector<std::string>& names) {
    std::vector<FeatureRelevance> out;
    out.reserve(static_cast<std::size_t>(params.lengthscales.size()));
    for (Eigen::Index d = 0; d < params.lengthscales.size(); ++d) {
        FeatureRelevance r;
        r.feature = d;
        r.name = static_cast<std::size_t>(d) < names.size() ? names[static_cast<std::size_t>(d)] : std::string();
        r.relevance = 1.0 / params.lengthscales(d);
        out.push_back(std::move(r));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const FeatureRelevance& a, const FeatureRelevance& b) { return a.relevance > b.relevance; });
    return out;
}

std::vector<FeatureRelevance> feature_relevance(const GprModel& model) {
    return feature_relevance(model.params(), model.feature_names());
}

}  // namespace wallgp::gpr
