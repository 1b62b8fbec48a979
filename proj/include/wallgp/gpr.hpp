#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wallgp/numerics.hpp"
#include "wallgp/transforms.hpp"

namespace wallgp::gpr {

using numerics::Matrix;
using numerics::Vector;

// Squared-exponential ARD hyperparameters.
struct KernelParams {
    double signal_variance = 1.0;
    Vector lengthscales;
    double noise_variance = 0.0;

    Eigen::Index dimension() const { return lengthscales.size(); }
    // Throws DimensionMismatch / InvariantViolation when the parameters are not usable.
    void validate(Eigen::Index expected_dimension) const;
};

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
};

double se_ard_kernel(const Vector& a, const Vector& b, const KernelParams& params);

// K(X, X), plus noise_variance on the diagonal when add_noise is set.
Matrix covariance_matrix(const Matrix& x, const KernelParams& params, bool add_noise);

// k_* between every row of x and the query point.
Vector cross_covariance(const Matrix& x, const Vector& query, const KernelParams& params);

// Gradient entries are ordered (log l_1 .. log l_d, log signal_variance, log noise_variance).
struct LogLikelihood {
    double value = 0.0;
    Vector gradient;
    double jitter = 0.0;
};

LogLikelihood log_marginal_likelihood(const Matrix& x, const Vector& y, const KernelParams& params);

struct OptimizerConfig {
    int max_iterations = 200;
    double gradient_tolerance = 1e-6;
    // Stop when an accepted step improves the objective by less than this, relative to max(1, |f|).
    double function_tolerance = 1e-10;
    int restarts = 5;                  // perturbed starts in addition to the initial point
    double perturbation_decades = 1.0;
    int history = 10;
    std::uint64_t seed = 0;
    std::optional<double> fixed_noise_variance;

    // Box constraints on the hyperparameters themselves (not their logs).
    double min_lengthscale = 1e-3;
    double max_lengthscale = 1e4;
    double min_signal_variance = 1e-6;
    double max_signal_variance = 1e6;
    double min_noise_variance = 1e-8;
    double max_noise_variance = 1e4;
};

struct OptimizationReport {
    KernelParams params;
    double log_likelihood = 0.0;
    double initial_log_likelihood = 0.0;
    int best_start = 0;
    int iterations = 0;   // summed over every start
    int failed_starts = 0;
};

// Maximizes the log marginal likelihood in log-parameter space with a projected
// L-BFGS iteration. Start 0 is `init` itself; the result is never worse than it.
OptimizationReport optimize_hyperparameters_report(const Matrix& x, const Vector& y, const KernelParams& init,
                                                   const OptimizerConfig& config);
KernelParams optimize_hyperparameters(const Matrix& x, const Vector& y, const KernelParams& init,
                                      const OptimizerConfig& config);

struct FitConfig {
    transforms::TargetTransformConfig target;
    OptimizerConfig optimizer;
    bool standardize_features = true;
    bool optimize = true;  // false keeps the initial hyperparameters
    std::vector<std::string> feature_names;
    std::string output_name;
};

class GprModel {
public:
    // Builds the cached factorization for already-transformed training data.
    static GprModel assemble(Matrix training_inputs, Vector training_targets, KernelParams params,
                             transforms::Standardizer standardizer, transforms::TargetTransform target_transform,
                             std::vector<std::string> feature_names = {}, std::string output_name = {});

    const Matrix& training_inputs() const { return inputs_; }
    const Vector& training_targets() const { return targets_; }
    const KernelParams& params() const { return params_; }
    const Matrix& cholesky() const { return cholesky_; }
    const Vector& alpha() const { return alpha_; }
    double jitter() const { return jitter_; }
    const transforms::Standardizer& standardizer() const { return standardizer_; }
    const transforms::TargetTransform& target_transform() const { return target_transform_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::string& output_name() const { return output_name_; }
    Eigen::Index dimension() const { return inputs_.cols(); }

private:
    GprModel() = default;

    Matrix inputs_;
    Vector targets_;
    KernelParams params_;
    Matrix cholesky_;
    Vector alpha_;
    double jitter_ = 0.0;
    transforms::Standardizer standardizer_;
    transforms::TargetTransform target_transform_;
    std::vector<std::string> feature_names_;
    std::string output_name_;
};

// Default starting point: unit lengthscales, signal variance var(y), noise 0.1*var(y).
KernelParams initial_params(const Vector& y, Eigen::Index dimension);

GprModel fit(const Matrix& x, const Vector& y, const FitConfig& config);

// Posterior in the model's latent (standardized, transformed) space.
Prediction predict_latent(const GprModel& model, const Vector& standardized_query);

// Posterior reported in physical units: the inverse output transform of the latent
// mean (a median predictor), with the variance carried through the inverse's slope.
Prediction predict(const GprModel& model, const Vector& query);

struct FeatureRelevance {
    Eigen::Index feature = 0;
    std::string name;
    double relevance = 0.0;  // 1 / lengthscale
};

std::vector<FeatureRelevance> feature_relevance(const GprModel& model);
std::vector<FeatureRelevance> feature_relevance(const KernelParams& params,
                                                const std::vector<std::string>& names = {});

}  // namespace wallgp::gpr
