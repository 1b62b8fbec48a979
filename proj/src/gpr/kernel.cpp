#include <cmath>
#include <numbers>
#include <string>

#include "wallgp/error.hpp"
#include "wallgp/gpr.hpp"

namespace wallgp::gpr {

void KernelParams::validate(Eigen::Index expected_dimension) const {
    if (lengthscales.size() != expected_dimension) {
        fail(ErrorCode::DimensionMismatch, "kernel has " + std::to_string(lengthscales.size()) +
                                               " lengthscales, data has " + std::to_string(expected_dimension) +
                                               " features");
    }
    if (!(signal_variance > 0.0) || !std::isfinite(signal_variance)) {
        fail(ErrorCode::InvariantViolation, "signal variance must be finite and > 0");
    }
    if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
        fail(ErrorCode::InvariantViolation, "noise variance must be finite and >= 0");
    }
    for (Eigen::Index d = 0; d < lengthscales.size(); ++d) {
        if (!(lengthscales(d) > 0.0) || !std::isfinite(lengthscales(d))) {
            fail(ErrorCode::InvariantViolation, "lengthscale " + std::to_string(d) + " must be finite and > 0");
        }
    }
}

double se_ard_kernel(const Vector& a, const Vector& b, const KernelParams& params) {
    if (a.size() != b.size() || a.size() != params.lengthscales.size()) {
        fail(ErrorCode::DimensionMismatch, "se_ard_kernel: point dimensions " + std::to_string(a.size()) + "/" +
                                               std::to_string(b.size()) + " vs " +
                                               std::to_string(params.lengthscales.size()) + " lengthscales");
    }
    double r2 = 0.0;
    for (Eigen::Index d = 0; d < a.size(); ++d) {
        const double t = (a(d) - b(d)) / params.lengthscales(d);
        r2 += t * t;
    }
    return params.signal_variance * std::exp(-0.5 * r2);
}

namespace {

void fill_covariance(const Matrix& x, const KernelParams& params, Matrix& k) {
    const auto n = x.rows();
    const Matrix scaled = x * params.lengthscales.cwiseInverse().asDiagonal();
    k.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        k(j, j) = params.signal_variance;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            const double r2 = (scaled.row(i) - scaled.row(j)).squaredNorm();
            const double v = params.signal_variance * std::exp(-0.5 * r2);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
}

// Per-thread n x n buffers for repeated likelihood evaluations.
struct LikelihoodWorkspace {
    Matrix k_signal;
    Matrix k_y;
    Matrix scratch;
    Matrix l_inv;
    Matrix k_inv;
    Matrix m;
    Eigen::LLT<Matrix> llt;
};

thread_local LikelihoodWorkspace workspace;

}  // namespace

Matrix covariance_matrix(const Matrix& x, const KernelParams& params, bool add_noise) {
    if (x.rows() < 1) fail(ErrorCode::DimensionMismatch, "covariance_matrix: no rows");
    params.validate(x.cols());
    Matrix k;
    fill_covariance(x, params, k);
    if (add_noise) k.diagonal().array() += params.noise_variance;
    return k;
}

Vector cross_covariance(const Matrix& x, const Vector& query, const KernelParams& params) {
    if (query.size() != x.cols()) {
        fail(ErrorCode::DimensionMismatch, "cross_covariance: query has " + std::to_string(query.size()) +
                                               " features, training data has " + std::to_string(x.cols()));
    }
    Vector k(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) k(i) = se_ard_kernel(x.row(i).transpose(), query, params);
    return k;
}

LogLikelihood log_marginal_likelihood(const Matrix& x, const Vector& y, const KernelParams& params) {
    const auto n = x.rows();
    const auto dim = x.cols();
    if (y.size() != n) {
        fail(ErrorCode::DimensionMismatch, "log_marginal_likelihood: " + std::to_string(n) + " inputs vs " +
                                               std::to_string(y.size()) + " targets");
    }
    params.validate(dim);

    if (n < 1) fail(ErrorCode::DimensionMismatch, "log_marginal_likelihood: no rows");
    auto& ws = workspace;
    fill_covariance(x, params, ws.k_signal);
    ws.k_y = ws.k_signal;
    ws.k_y.diagonal().array() += params.noise_variance;
    const double jitter = numerics::cholesky_with_jitter(ws.k_y, ws.llt, ws.scratch);
    const auto lower = ws.llt.matrixL();
    const Vector alpha = ws.llt.solve(y);

    // K^-1 = L^-T L^-1, lower triangle only.
    ws.l_inv.setIdentity(n, n);
    lower.solveInPlace(ws.l_inv);
    ws.k_inv.setZero(n, n);
    ws.k_inv.selfadjointView<Eigen::Lower>().rankUpdate(ws.l_inv.transpose());

    double log_det = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) log_det += std::log(ws.llt.matrixLLT()(i, i));

    LogLikelihood out;
    out.jitter = jitter;
    out.value = -0.5 * y.dot(alpha) - log_det - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);

    // dL/dtheta = 0.5 * tr((alpha alpha^T - K^-1) dK/dtheta). With M = W o K_signal,
    // sum_ij M_ij (x_id - x_jd)^2 = 2 sum_i x_id^2 (M 1)_i - 2 x_d^T M x_d.
    Matrix& m = ws.m;
    m.resize(n, n);
    double trace_w = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        trace_w += alpha(j) * alpha(j) - ws.k_inv(j, j);
        for (Eigen::Index i = j; i < n; ++i) {
            const double v = (alpha(i) * alpha(j) - ws.k_inv(i, j)) * ws.k_signal(i, j);
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    const Vector row_sums = m.rowwise().sum();
    const Matrix mx = m * x;
    Vector length_acc(dim);
    for (Eigen::Index d = 0; d < dim; ++d) {
        length_acc(d) = 2.0 * x.col(d).cwiseAbs2().dot(row_sums) - 2.0 * x.col(d).dot(mx.col(d));
    }
    const double signal_acc = m.sum();
    out.gradient.resize(dim + 2);
    for (Eigen::Index d = 0; d < dim; ++d) {
        const double l = params.lengthscales(d);
        out.gradient(d) = 0.5 * length_acc(d) / (l * l);
    }
    out.gradient(dim) = 0.5 * signal_acc;
    out.gradient(dim + 1) = 0.5 * params.noise_variance * trace_w;
    return out;
}

}  // namespace wallgp::gpr
