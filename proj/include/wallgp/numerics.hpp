#pragma once

#include <Eigen/Dense>

namespace wallgp::numerics {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
// Throws NotPositiveDefinite when a pivot is not strictly positive and
// DimensionMismatch when `a` is not square or not symmetric to 1e-9 relative.
Matrix cholesky_factor(const Matrix& a);

struct JitteredFactor {
    Matrix lower;
    double jitter = 0.0;  // diagonal term that was added to make the factorization succeed
};

// Retries cholesky_factor with diagonal jitter 1e-10*mean(diag), growing x10
// up to 1e-4*mean(diag). Rethrows NotPositiveDefinite once the ladder is spent.
JitteredFactor cholesky_with_jitter(const Matrix& a);

// Same ladder, factoring into `llt` and using `scratch` for the shifted copy.
// Storage is reused between calls of equal size. `a` is assumed symmetric.
// Returns the jitter that was added.
double cholesky_with_jitter(const Matrix& a, Eigen::LLT<Matrix>& llt, Matrix& scratch);

// Solves (L L^T) x = b.
Vector solve_spd(const Matrix& lower, const Vector& b);
Matrix solve_spd(const Matrix& lower, const Matrix& b);

// (L L^T)^{-1}, symmetric.
Matrix inverse_from_factor(const Matrix& lower);

// 2 * sum(log L_ii).
double log_det_from_factor(const Matrix& lower);

}  // namespace wallgp::numerics
