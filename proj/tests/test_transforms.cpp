#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "wallgp/error.hpp"
#include "wallgp/transforms.hpp"

using namespace wallgp;
using namespace wallgp::transforms;
using numerics::Matrix;
using numerics::Vector;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a wallgp::Error");
    return ErrorCode::IoError;
}

// Maximized Gaussian log-likelihood including the constant term.
double full_profile(std::span<const double> y, double lambda, double shift) {
    const double n = static_cast<double>(y.size());
    return profile_log_likelihood(y, lambda, shift) - 0.5 * n * (1.0 + std::log(2.0 * std::numbers::pi));
}

}  // namespace

TEST_CASE("forward examples") {
    CHECK(boxcox_forward(2.0, {1.0, 0.0}) == 1.0);
    CHECK(boxcox_forward(std::numbers::e, {0.0, 0.0}) == 1.0);
    const double expected = (std::pow(10.0, -0.3) - 1.0) / -0.3;
    CHECK(boxcox_forward(10.0, {-0.3, 0.0}) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(boxcox_forward(10.0, {-0.3, 0.0}) == doctest::Approx(1.6627).epsilon(1e-4));
    CHECK(boxcox_forward(1.0, {1.0, 1.0}) == 1.0);
}

TEST_CASE("forward rejects non-positive shifted input") {
    CHECK(code_of([] { boxcox_forward(0.0, {0.5, 0.0}); }) == ErrorCode::NonPositiveInput);
    CHECK(code_of([] { boxcox_forward(-2.0, {1.0, 1.0}); }) == ErrorCode::NonPositiveInput);
}

TEST_CASE("inverse examples and domain") {
    CHECK(boxcox_inverse(1.0, {1.0, 0.0}) == 2.0);
    CHECK(boxcox_inverse(0.0, {0.0, 0.0}) == 1.0);
    CHECK(boxcox_inverse(3.0, {1.0, 1.5}) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(code_of([] { boxcox_inverse(-2.0, {0.5, 0.0}); }) == ErrorCode::OutOfDomain);
    CHECK(code_of([] { boxcox_inverse(4.0, {-0.25, 0.0}); }) == ErrorCode::OutOfDomain);
}

TEST_CASE("round trip over 1000 random pairs") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> log_y(std::log(0.01), std::log(1e4));
    const double lambdas[] = {-0.3, 0.0, 0.5, 1.0};
    for (int i = 0; i < 1000; ++i) {
        const double y = std::exp(log_y(rng));
        const BoxCoxTransform t{lambdas[i % 4], 0.0};
        const double back = boxcox_inverse(boxcox_forward(y, t), t);
        CHECK(std::abs(back - y) <= 1e-10 * y);
    }
}

TEST_CASE("inverse slope matches a finite difference of the inverse") {
    for (double lambda : {-0.3, 0.0, 0.5, 2.0}) {
        const BoxCoxTransform t{lambda, 0.0};
        const double z = boxcox_forward(7.0, t);
        const double h = 1e-6;
        const double fd = (boxcox_inverse(z + h, t) - boxcox_inverse(z - h, t)) / (2 * h);
        CHECK(boxcox_inverse_slope(z, t) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("property: forward is strictly increasing for every lambda") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(0.05, 100.0);
    for (double lambda = -5.0; lambda <= 5.0; lambda += 0.5) {
        std::vector<double> ys(50);
        for (auto& y : ys) y = u(rng);
        std::sort(ys.begin(), ys.end());
        for (std::size_t i = 1; i < ys.size(); ++i) {
            if (ys[i] == ys[i - 1]) continue;
            CHECK(boxcox_forward(ys[i], {lambda, 0.0}) > boxcox_forward(ys[i - 1], {lambda, 0.0}));
        }
    }
}

TEST_CASE("property: continuity in lambda at zero") {
    for (double y : {0.01, 0.5, 1.0, 2.0, 37.0, 1e4}) {
        for (double lambda : {1e-8, -1e-8}) {
            CHECK(std::abs(boxcox_forward(y, {lambda, 0.0}) - std::log(y)) < 1e-6);
        }
    }
}

TEST_CASE("fit_lambda recovers zero on log-normal samples") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> nd;
    std::vector<double> y(500);
    for (auto& v : y) v = std::exp(nd(rng));
    const auto t = fit_lambda(y);
    CHECK(t.lambda >= -0.15);
    CHECK(t.lambda <= 0.15);
    CHECK(t.shift == 0.0);
}

TEST_CASE("fit_lambda on Gaussian samples stays near one") {
    std::mt19937_64 rng(24);
    std::normal_distribution<double> nd(10.0, 1.0);
    std::vector<double> y(500);
    for (auto& v : y) v = nd(rng);
    const auto t = fit_lambda(y);
    CHECK(t.lambda >= 0.5);
    CHECK(t.lambda <= 1.5);
}

TEST_CASE("fit_lambda rejects constant data") {
    const std::vector<double> y(10, 3.0);
    CHECK(code_of([&] { fit_lambda(y); }) == ErrorCode::DegenerateData);
}

TEST_CASE("fit_lambda is the grid maximum refined") {
    std::mt19937_64 rng(25);
    std::gamma_distribution<double> gd(2.0, 3.0);
    std::vector<double> y(200);
    for (auto& v : y) v = gd(rng);
    const auto t = fit_lambda(y);
    const double best = profile_log_likelihood(y, t.lambda, t.shift);
    for (double lambda = -5.0; lambda <= 5.0 + 1e-9; lambda += 0.01) {
        CHECK(profile_log_likelihood(y, lambda, t.shift) <= best + 1e-9);
    }
}

TEST_CASE("fit_lambda shifts non-positive data into the domain") {
    std::vector<double> y = {-3.0, -1.0, 0.0, 2.0, 5.0, 9.0};
    const auto t = fit_lambda(y);
    CHECK(t.shift == doctest::Approx(3.0 + 1e-6 * 12.0).epsilon(1e-12));
    for (double v : y) CHECK(v + t.shift > 0.0);
}

TEST_CASE("property: refitting already transformed data barely changes the profile likelihood") {
    for (double source : {-1.0, -0.3, 0.0, 0.5, 1.0, 2.0}) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            std::mt19937_64 rng(seed * 31 + 5);
            std::normal_distribution<double> nd;
            std::vector<double> y(500);
            for (auto& v : y) {
                double g = 0.0;
                do {
                    g = 1.0 + 0.1 * nd(rng);
                } while (source * g + 1.0 <= 0.05);
                v = boxcox_inverse(g, {source, 0.0});
            }
            const auto first = fit_lambda(y);
            std::vector<double> z(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) z[i] = boxcox_forward(y[i], first);
            const auto again = fit_lambda(z);
            const double before = full_profile(z, 1.0, again.shift);
            const double after = full_profile(z, again.lambda, again.shift);
            CHECK(std::abs(after - before) < 0.005 * std::abs(before));
        }
    }
}

TEST_CASE("standardizer examples") {
    Matrix x(3, 2);
    x << 1, 7, 2, 7, 3, 7;
    const auto s = standardize_fit(x);
    CHECK(s.scale(0) == 1.0);
    CHECK(s.scale(1) == 1.0);
    const Matrix z = standardize_apply(s, x);
    CHECK(z(0, 0) == -1.0);
    CHECK(z(1, 0) == 0.0);
    CHECK(z(2, 0) == 1.0);
    CHECK((z.col(1).array() == 0.0).all());
}

TEST_CASE("property: standardized columns have zero mean and unit deviation, and invert") {
    std::mt19937_64 rng(26);
    std::uniform_real_distribution<double> u(-50.0, 300.0);
    Matrix x(40, 5);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 5; ++j) x(i, j) = u(rng) * (j + 1);
    const auto s = standardize_fit(x);
    const Matrix z = standardize_apply(s, x);
    for (int j = 0; j < 5; ++j) {
        const double mean = z.col(j).mean();
        const double sd = std::sqrt((z.col(j).array() - mean).square().sum() / 39.0);
        CHECK(std::abs(mean) < 1e-12);
        CHECK(std::abs(sd - 1.0) < 1e-12);
    }
    const Matrix back = standardize_invert(s, z);
    CHECK((back - x).cwiseAbs().maxCoeff() <= 1e-12 * x.cwiseAbs().maxCoeff());

    const Vector row = standardize_apply_row(s, x.row(3).transpose());
    CHECK((row - z.row(3).transpose()).norm() == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("standardizer rejects mismatched dimensions") {
    const auto s = standardize_fit(Matrix::Random(4, 3));
    CHECK(code_of([&] { standardize_apply(s, Matrix::Random(4, 2)); }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([&] { standardize_invert(s, Matrix::Random(4, 4)); }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([&] { standardize_apply_row(s, Vector::Zero(2)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("target transform centers and scales the transformed targets") {
    const std::vector<double> y = {3.0, 8.0, 20.0, 55.0, 140.0};
    for (auto mode : {LambdaMode::None, LambdaMode::Auto, LambdaMode::Fixed}) {
        const auto t = fit_target_transform(y, {mode, -0.3});
        CHECK(t.boxcox_enabled == (mode != LambdaMode::None));
        double mean = 0.0, ss = 0.0;
        for (double v : y) mean += t.forward(v);
        mean /= 5.0;
        for (double v : y) ss += (t.forward(v) - mean) * (t.forward(v) - mean);
        CHECK(std::abs(mean) < 1e-12);
        CHECK(std::sqrt(ss / 4.0) == doctest::Approx(1.0).epsilon(1e-12));
        for (double v : y) CHECK(t.inverse(t.forward(v)) == doctest::Approx(v).epsilon(1e-12));
    }
    CHECK(fit_target_transform(y, {LambdaMode::Fixed, -0.3}).boxcox.lambda == -0.3);
    CHECK(code_of([&] { fit_target_transform(y, {LambdaMode::Fixed, 7.0}); }) == ErrorCode::ConfigError);
}

TEST_CASE("target transform inverse stays finite outside the Box-Cox domain") {
    const std::vector<double> y = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
    const auto t = fit_target_transform(y, {LambdaMode::Fixed, 0.5});
    const double far_low = t.inverse(-1e6);
    CHECK(std::isfinite(far_low));
    CHECK(far_low >= -t.boxcox.shift);
    CHECK(std::isfinite(t.inverse_slope(-1e6)));
}
