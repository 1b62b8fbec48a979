#include "wallgp/numerics.hpp"

#include <cmath>
#include <string>

#include "wallgp/error.hpp"

namespace wallgp::numerics {

namespace {

constexpr double kSymmetryTolerance = 1e-9;
constexpr double kJitterStart = 1e-10;
constexpr double kJitterStop = 1e-4;

void require_square(const Matrix& a, const char* what) {
    if (a.rows() == 0 || a.rows() != a.cols()) {
        fail(ErrorCode::DimensionMismatch, std::string(what) + ": expected a non-empty square matrix, got " +
                                               std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

}  // namespace

Matrix cholesky_factor(const Matrix& a) {
    require_square(a, "cholesky_factor");
    if (!a.allFinite()) fail(ErrorCode::NotPositiveDefinite, "cholesky_factor: matrix has non-finite entries");

    const double scale = a.cwiseAbs().maxCoeff();
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTolerance * scale) {
        fail(ErrorCode::DimensionMismatch, "cholesky_factor: matrix is not symmetric (max |A - A^T| = " +
                                               std::to_string(asym) + ")");
    }

    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) {
        fail(ErrorCode::NotPositiveDefinite, "cholesky_factor: non-positive pivot encountered");
    }
    Matrix lower = llt.matrixL();
    // LLT can accept tiny negative-rounding pivots as sqrt(0); treat those as failures too.
    for (Eigen::Index i = 0; i < lower.rows(); ++i) {
        if (!(lower(i, i) > 0.0) || !std::isfinite(lower(i, i))) {
            fail(ErrorCode::NotPositiveDefinite, "cholesky_factor: pivot " + std::to_string(i) + " is not positive");
        }
    }
    return lower;
}

namespace {

// Runs `attempt(jitter)` up the jitter ladder until it succeeds.
template <typename Attempt>
double climb_jitter_ladder(const Matrix& a, Attempt&& attempt) {
    if (attempt(0.0)) return 0.0;
    const double mean_diag = a.diagonal().mean();
    const double base = mean_diag > 0.0 ? mean_diag : 1.0;
    for (double rel = kJitterStart; rel <= kJitterStop * (1.0 + 1e-9); rel *= 10.0) {
        if (attempt(rel * base)) return rel * base;
    }
    fail(ErrorCode::NotPositiveDefinite, "cholesky_with_jitter: factorization failed with jitter up to 1e-4*mean(diag)");
}

bool positive_pivots(const Eigen::LLT<Matrix>& llt) {
    if (llt.info() != Eigen::Success) return false;
    const auto& packed = llt.matrixLLT();
    for (Eigen::Index i = 0; i < packed.rows(); ++i) {
        if (!(packed(i, i) > 0.0) || !std::isfinite(packed(i, i))) return false;
    }
    return true;
}

}  // namespace

JitteredFactor cholesky_with_jitter(const Matrix& a) {
    JitteredFactor out;
    out.jitter = climb_jitter_ladder(a, [&](double jitter) {
        try {
            if (jitter == 0.0) {
                out.lower = cholesky_factor(a);
            } else {
                Matrix shifted = a;
                shifted.diagonal().array() += jitter;
                out.lower = cholesky_factor(shifted);
            }
            return true;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotPositiveDefinite) throw;
            return false;
        }
    });
    return out;
}

double cholesky_with_jitter(const Matrix& a, Eigen::LLT<Matrix>& llt, Matrix& scratch) {
    require_square(a, "cholesky_with_jitter");
    if (!a.allFinite()) fail(ErrorCode::NotPositiveDefinite, "cholesky_with_jitter: matrix has non-finite entries");
    return climb_jitter_ladder(a, [&](double jitter) {
        if (jitter == 0.0) {
            llt.compute(a);
        } else {
            scratch = a;
            scratch.diagonal().array() += jitter;
            llt.compute(scratch);
        }
        return positive_pivots(llt);
    });
}

Vector solve_spd(const Matrix& lower, const Vector& b) {
    require_square(lower, "solve_spd");
    if (b.size() != lower.rows()) {
        fail(ErrorCode::DimensionMismatch, "solve_spd: rhs length " + std::to_string(b.size()) + " != " +
                                               std::to_string(lower.rows()));
    }
    Vector y = lower.triangularView<Eigen::Lower>().solve(b);
    return lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

Matrix solve_spd(const Matrix& lower, const Matrix& b) {
    require_square(lower, "solve_spd");
    if (b.rows() != lower.rows()) {
        fail(ErrorCode::DimensionMismatch, "solve_spd: rhs rows " + std::to_string(b.rows()) + " != " +
                                               std::to_string(lower.rows()));
    }
    Matrix y = lower.triangularView<Eigen::Lower>().solve(b);
    return lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

Matrix inverse_from_factor(const Matrix& lower) {
    require_square(lower, "inverse_from_factor");
    const auto n = lower.rows();
    Matrix linv = Matrix::Identity(n, n);
    lower.triangularView<Eigen::Lower>().solveInPlace(linv);
    // L^-T L^-1 accumulated into one triangle, then mirrored.
    Matrix acc = Matrix::Zero(n, n);
    acc.selfadjointView<Eigen::Lower>().rankUpdate(linv.transpose());
    Matrix inv = acc.selfadjointView<Eigen::Lower>();
    return inv;
}

double log_det_from_factor(const Matrix& lower) {
    require_square(lower, "log_det_from_factor");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < lower.rows(); ++i) {
        const double d = lower(i, i);
        if (!(d > 0.0)) {
            fail(ErrorCode::NonPositiveDiagonal, "log_det_from_factor: L(" + std::to_string(i) + "," +
                                                     std::to_string(i) + ") = " + std::to_string(d));
        }
        sum += std::log(d);
    }
    return 2.0 * sum;
}

}  // namespace wallgp::numerics
