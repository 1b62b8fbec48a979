#pragma once

#include <span>

#include "wallgp/numerics.hpp"

namespace wallgp::transforms {

using numerics::Matrix;
using numerics::Vector;

inline constexpr double kLambdaMin = -5.0;
inline constexpr double kLambdaMax = 5.0;
// Single global exponent reported for the wall database; kept as an override value.
inline constexpr double kReferenceLambda = -0.3;

struct BoxCoxTransform {
    double lambda = 1.0;
    double shift = 0.0;  // added to y before transforming so every fitted value is > 0
};

// ((y+shift)^lambda - 1)/lambda, or log(y+shift) at lambda == 0.
double boxcox_forward(double y, const BoxCoxTransform& t);
double boxcox_inverse(double z, const BoxCoxTransform& t);
// dy/dz of the inverse at z, used to carry a latent standard deviation into physical units.
double boxcox_inverse_slope(double z, const BoxCoxTransform& t);

// Gaussian log-likelihood of the transformed sample (variance profiled out)
// plus the (lambda - 1) * sum(log(y + shift)) Jacobian.
double profile_log_likelihood(std::span<const double> y, double lambda, double shift);

// Grid search on [-5, 5] step 0.01 followed by golden-section refinement to 1e-4.
BoxCoxTransform fit_lambda(std::span<const double> y);

// Shift rule used by every fitted transform: max(0, 1e-6*range(y) - min(y)).
double boxcox_shift_for(std::span<const double> y);

struct Standardizer {
    Vector mean;
    Vector scale;  // sample standard deviation (n-1); 1 for degenerate columns
};

Standardizer standardize_fit(const Matrix& x);
Matrix standardize_apply(const Standardizer& s, const Matrix& x);
Vector standardize_apply_row(const Standardizer& s, const Vector& row);
Matrix standardize_invert(const Standardizer& s, const Matrix& z);

// Output pipeline applied before GP training: optional Box-Cox, then centering
// and scaling to zero mean and unit variance.
enum class LambdaMode { None, Auto, Fixed };

struct TargetTransformConfig {
    LambdaMode mode = LambdaMode::Auto;
    double fixed_lambda = kReferenceLambda;
};

struct TargetTransform {
    bool boxcox_enabled = false;
    BoxCoxTransform boxcox;
    double center = 0.0;
    double scale = 1.0;

    double forward(double y) const;
    double inverse(double latent) const;
    double inverse_slope(double latent) const;
};

TargetTransform fit_target_transform(std::span<const double> y, const TargetTransformConfig& config);

}  // namespace wallgp::transforms
