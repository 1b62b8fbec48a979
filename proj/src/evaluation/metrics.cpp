#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "wallgp/error.hpp"
#include "wallgp/evaluation.hpp"

namespace wallgp::evaluation {

namespace {

void check_lengths(const Vector& actual, const Vector& predicted, Eigen::Index minimum) {
    if (actual.size() != predicted.size()) {
        fail(ErrorCode::DimensionMismatch,
             fmt::format("{} actual values vs {} predictions", actual.size(), predicted.size()));
    }
    if (actual.size() < minimum) {
        fail(ErrorCode::DimensionMismatch, fmt::format("need at least {} values, got {}", minimum, actual.size()));
    }
}

}  // namespace

double r_squared(const Vector& actual, const Vector& predicted) {
    check_lengths(actual, predicted, 2);
    const double mean = actual.mean();
    const double ss_tot = (actual.array() - mean).square().sum();
    if (!(ss_tot > 0.0)) fail(ErrorCode::DegenerateActuals, "actual values are constant");
    const double ss_res = (actual - predicted).squaredNorm();
    return 1.0 - ss_res / ss_tot;
}

double rel_rmse(const Vector& actual, const Vector& predicted) {
    check_lengths(actual, predicted, 1);
    const double mean = actual.mean();
    if (!(mean > 0.0)) fail(ErrorCode::NonPositiveMean, fmt::format("mean of actual values is {}", mean));
    const double rmse = std::sqrt((actual - predicted).squaredNorm() / static_cast<double>(actual.size()));
    return rmse / mean;
}

std::vector<double> pa_ratios(const Vector& actual, const Vector& predicted) {
    check_lengths(actual, predicted, 1);
    std::vector<double> out(static_cast<std::size_t>(actual.size()));
    for (Eigen::Index i = 0; i < actual.size(); ++i) {
        if (!(actual(i) > 0.0)) {
            fail(ErrorCode::NonPositiveActual, fmt::format("actual value {} at position {} is not positive",
                                                           actual(i), i));
        }
        out[static_cast<std::size_t>(i)] = predicted(i) / actual(i);
    }
    return out;
}

PaStats summarize_ratios(std::span<const double> ratios) {
    PaStats s;
    if (ratios.empty()) {
        s.mean = s.std = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    double sum = 0.0;
    for (double r : ratios) sum += r;
    s.mean = sum / static_cast<double>(ratios.size());
    if (ratios.size() > 1) {
        double ss = 0.0;
        for (double r : ratios) ss += (r - s.mean) * (r - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(ratios.size() - 1));
    }
    return s;
}

PaStats pa_stats(const Vector& actual, const Vector& predicted) {
    const std::vector<double> ratios = pa_ratios(actual, predicted);
    return summarize_ratios(ratios);
}

double median(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

}  // namespace wallgp::evaluation
