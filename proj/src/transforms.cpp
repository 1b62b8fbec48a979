#include "wallgp/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "wallgp/error.hpp"

namespace wallgp::transforms {

namespace {

constexpr double kGridStep = 0.01;
constexpr double kGoldenTolerance = 1e-4;
constexpr double kShiftFraction = 1e-6;
// Smallest admissible lambda*z + 1 when a latent prediction lands outside the inverse's domain.
constexpr double kDomainFloor = 1e-12;

double transform_shifted(double shifted, double lambda) {
    const double log_y = std::log(shifted);
    if (lambda == 0.0) return log_y;
    // expm1 keeps the lambda -> 0 limit continuous.
    return std::expm1(lambda * log_y) / lambda;
}

}  // namespace

double boxcox_forward(double y, const BoxCoxTransform& t) {
    const double shifted = y + t.shift;
    if (!(shifted > 0.0)) {
        fail(ErrorCode::NonPositiveInput, "boxcox_forward: y + shift = " + std::to_string(shifted) + " is not > 0");
    }
    return transform_shifted(shifted, t.lambda);
}

double boxcox_inverse(double z, const BoxCoxTransform& t) {
    if (t.lambda == 0.0) return std::exp(z) - t.shift;
    const double base = t.lambda * z + 1.0;
    if (!(base > 0.0)) {
        fail(ErrorCode::OutOfDomain, "boxcox_inverse: lambda*z + 1 = " + std::to_string(base) + " is not > 0");
    }
    return std::exp(std::log1p(t.lambda * z) / t.lambda) - t.shift;
}

double boxcox_inverse_slope(double z, const BoxCoxTransform& t) {
    if (t.lambda == 0.0) return std::exp(z);
    const double base = t.lambda * z + 1.0;
    if (!(base > 0.0)) {
        fail(ErrorCode::OutOfDomain, "boxcox_inverse_slope: lambda*z + 1 = " + std::to_string(base) + " is not > 0");
    }
    return std::pow(base, 1.0 / t.lambda - 1.0);
}

double profile_log_likelihood(std::span<const double> y, double lambda, double shift) {
    const auto n = static_cast<double>(y.size());
    double mean = 0.0;
    double log_sum = 0.0;
    std::vector<double> z(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double shifted = y[i] + shift;
        if (!(shifted > 0.0)) {
            fail(ErrorCode::NonPositiveInput, "profile_log_likelihood: y + shift must be > 0");
        }
        z[i] = transform_shifted(shifted, lambda);
        mean += z[i];
        log_sum += std::log(shifted);
    }
    mean /= n;
    double ss = 0.0;
    for (double v : z) ss += (v - mean) * (v - mean);
    const double variance = ss / n;
    if (!(variance > 0.0) || !std::isfinite(variance)) return -std::numeric_limits<double>::infinity();
    return -0.5 * n * std::log(variance) + (lambda - 1.0) * log_sum;
}

double boxcox_shift_for(std::span<const double> y) {
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    const double eps = kShiftFraction * (*hi - *lo);
    return std::max(0.0, eps - *lo);
}

BoxCoxTransform fit_lambda(std::span<const double> y) {
    if (y.size() < 3) fail(ErrorCode::DegenerateData, "fit_lambda: need at least 3 values");
    for (double v : y) {
        if (!std::isfinite(v)) fail(ErrorCode::DegenerateData, "fit_lambda: non-finite value");
    }
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    if (*hi == *lo) fail(ErrorCode::DegenerateData, "fit_lambda: constant data");

    const double shift = boxcox_shift_for(y);
    auto objective = [&](double lambda) { return profile_log_likelihood(y, lambda, shift); };

    const int steps = static_cast<int>(std::lround((kLambdaMax - kLambdaMin) / kGridStep));
    double best_lambda = kLambdaMin;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= steps; ++i) {
        const double lambda = kLambdaMin + kGridStep * i;
        const double value = objective(lambda);
        if (value > best_value) {
            best_value = value;
            best_lambda = lambda;
        }
    }

    // Golden-section refinement inside the bracketing grid cells.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::max(kLambdaMin, best_lambda - kGridStep);
    double b = std::min(kLambdaMax, best_lambda + kGridStep);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    while (b - a > kGoldenTolerance) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    const double refined = 0.5 * (a + b);
    if (objective(refined) > best_value) best_lambda = refined;
    return {best_lambda, shift};
}

Standardizer standardize_fit(const Matrix& x) {
    if (x.rows() == 0 || x.cols() == 0) fail(ErrorCode::DimensionMismatch, "standardize_fit: empty matrix");
    Standardizer s;
    s.mean = x.colwise().mean().transpose();
    s.scale = Vector::Ones(x.cols());
    if (x.rows() < 2) return s;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double ss = (x.col(j).array() - s.mean(j)).square().sum();
        const double sd = std::sqrt(ss / static_cast<double>(x.rows() - 1));
        if (sd > 1e-12 * std::max(1.0, std::abs(s.mean(j)))) s.scale(j) = sd;
    }
    return s;
}

Matrix standardize_apply(const Standardizer& s, const Matrix& x) {
    if (x.cols() != s.mean.size()) {
        fail(ErrorCode::DimensionMismatch, "standardize_apply: " + std::to_string(x.cols()) +
                                               " columns, standardizer has " + std::to_string(s.mean.size()));
    }
    return (x.rowwise() - s.mean.transpose()).array().rowwise() / s.scale.transpose().array();
}

Vector standardize_apply_row(const Standardizer& s, const Vector& row) {
    if (row.size() != s.mean.size()) {
        fail(ErrorCode::DimensionMismatch, "standardize_apply_row: " + std::to_string(row.size()) +
                                               " features, standardizer has " + std::to_string(s.mean.size()));
    }
    return (row - s.mean).cwiseQuotient(s.scale);
}

Matrix standardize_invert(const Standardizer& s, const Matrix& z) {
    if (z.cols() != s.mean.size()) {
        fail(ErrorCode::DimensionMismatch, "standardize_invert: " + std::to_string(z.cols()) +
                                               " columns, standardizer has " + std::to_string(s.mean.size()));
    }
    return (z.array().rowwise() * s.scale.transpose().array()).matrix().rowwise() + s.mean.transpose();
}

double TargetTransform::forward(double y) const {
    const double z = boxcox_enabled ? boxcox_forward(y, boxcox) : y;
    return (z - center) / scale;
}

namespace {

double clamp_to_domain(double z, const BoxCoxTransform& t) {
    if (t.lambda == 0.0) return z;
    if (t.lambda * z + 1.0 > kDomainFloor) return z;
    return (kDomainFloor - 1.0) / t.lambda;
}

}  // namespace

double TargetTransform::inverse(double latent) const {
    const double z = latent * scale + center;
    if (!boxcox_enabled) return z;
    return boxcox_inverse(clamp_to_domain(z, boxcox), boxcox);
}

double TargetTransform::inverse_slope(double latent) const {
    const double z = latent * scale + center;
    if (!boxcox_enabled) return scale;
    return scale * boxcox_inverse_slope(clamp_to_domain(z, boxcox), boxcox);
}

TargetTransform fit_target_transform(std::span<const double> y, const TargetTransformConfig& config) {
    if (y.size() < 2) fail(ErrorCode::DegenerateData, "fit_target_transform: need at least 2 targets");
    TargetTransform t;
    switch (config.mode) {
        case LambdaMode::None:
            break;
        case LambdaMode::Auto:
            t.boxcox_enabled = true;
            t.boxcox = fit_lambda(y);
            break;
        case LambdaMode::Fixed:
            if (config.fixed_lambda < kLambdaMin || config.fixed_lambda > kLambdaMax) {
                fail(ErrorCode::ConfigError, "fixed lambda must lie in [-5, 5]");
            }
            t.boxcox_enabled = true;
            t.boxcox = {config.fixed_lambda, boxcox_shift_for(y)};
            break;
    }
    std::vector<double> z(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) z[i] = t.boxcox_enabled ? boxcox_forward(y[i], t.boxcox) : y[i];
    const double mean = std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(z.size());
    double ss = 0.0;
    for (double v : z) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(z.size() - 1));
    t.center = mean;
    t.scale = sd > 1e-12 * std::max(1.0, std::abs(mean)) ? sd : 1.0;
    return t;
}

}  // namespace wallgp::transforms
