#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the library's linear algebra; everything is plain loops.

#include <cmath>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "wallgp/dataset.hpp"
#include "wallgp/numerics.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const wallgp::numerics::Matrix& m) {
    Dense d(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    }
    return d;
}

// Laplace expansion along the first row.
inline double cofactor_determinant(const Dense& a) {
    const std::size_t n = a.size();
    if (n == 1) return a[0][0];
    if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
    double det = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        Dense minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<double> row;
            for (std::size_t k = 0; k < n; ++k) {
                if (k != c) row.push_back(a[r][k]);
            }
            minor.push_back(row);
        }
        det += (c % 2 == 0 ? 1.0 : -1.0) * a[0][c] * cofactor_determinant(minor);
    }
    return det;
}

// Gauss-Jordan with partial pivoting.
inline Dense explicit_inverse(Dense a) {
    const std::size_t n = a.size();
    Dense inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        std::swap(inv[col], inv[pivot]);
        const double p = a[col][col];
        for (std::size_t k = 0; k < n; ++k) {
            a[col][k] /= p;
            inv[col][k] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            for (std::size_t k = 0; k < n; ++k) {
                a[r][k] -= f * a[col][k];
                inv[r][k] -= f * inv[col][k];
            }
        }
    }
    return inv;
}

struct GpParams {
    double signal = 1.0;
    std::vector<double> lengthscales;
    double noise = 0.0;
};

inline double se_kernel(const std::vector<double>& a, const std::vector<double>& b, const GpParams& p) {
    double r2 = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) r2 += (a[d] - b[d]) * (a[d] - b[d]) / (p.lengthscales[d] * p.lengthscales[d]);
    return p.signal * std::exp(-0.5 * r2);
}

// Posterior mean and variance from the explicit inverse of K + noise I.
inline std::pair<double, double> brute_posterior(const Dense& x, const std::vector<double>& y, const GpParams& p,
                                                 const std::vector<double>& query) {
    const std::size_t n = x.size();
    Dense k(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) k[i][j] = se_kernel(x[i], x[j], p) + (i == j ? p.noise : 0.0);
    }
    const Dense kinv = explicit_inverse(k);
    std::vector<double> ks(n);
    for (std::size_t i = 0; i < n; ++i) ks[i] = se_kernel(x[i], query, p);
    double mean = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            mean += ks[i] * kinv[i][j] * y[j];
            quad += ks[i] * kinv[i][j] * ks[j];
        }
    }
    return {mean, std::max(0.0, p.signal - quad)};
}

// Log marginal likelihood through the explicit inverse and cofactor determinant (small n only).
inline double brute_lml(const Dense& x, const std::vector<double>& y, const GpParams& p) {
    const std::size_t n = x.size();
    Dense k(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) k[i][j] = se_kernel(x[i], x[j], p) + (i == j ? p.noise : 0.0);
    }
    const Dense kinv = explicit_inverse(k);
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) quad += y[i] * kinv[i][j] * y[j];
    }
    return -0.5 * quad - 0.5 * std::log(cofactor_determinant(k)) -
           0.5 * static_cast<double>(n) * std::log(2.0 * 3.14159265358979323846);
}

// Central differences of `value` over log-parameters ordered (log l_1..log l_d, log signal, log noise).
inline std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& value,
                                              const std::vector<double>& log_params, double step = 1e-6) {
    std::vector<double> g(log_params.size());
    for (std::size_t i = 0; i < log_params.size(); ++i) {
        std::vector<double> plus = log_params;
        std::vector<double> minus = log_params;
        plus[i] += step;
        minus[i] -= step;
        g[i] = (value(plus) - value(minus)) / (2.0 * step);
    }
    return g;
}

// Cyclic displacement-controlled history. Each amplitude is visited with a
// first cycle on the envelope and a repeat cycle at `repeat_factor` of it.
// The negative side follows `negative_scale` times the envelope.
struct LoopSpec {
    std::function<double(double)> envelope;
    std::vector<double> amplitudes;
    int samples_per_quarter = 6;
    double repeat_factor = 0.85;
    double negative_scale = 1.0;
};

inline wallgp::dataset::HysteresisRecord make_loops(const LoopSpec& spec, double wall_height = 2000.0) {
    wallgp::dataset::HysteresisRecord rec;
    rec.wall_height = wall_height;
    rec.samples.push_back({0.0, 0.0});
    auto quarter = [&](double from_d, double to_d, double from_f, double to_f) {
        for (int k = 1; k <= spec.samples_per_quarter; ++k) {
            const double t = static_cast<double>(k) / spec.samples_per_quarter;
            rec.samples.push_back({from_d + t * (to_d - from_d), from_f + t * (to_f - from_f)});
        }
    };
    for (double a : spec.amplitudes) {
        for (int cycle = 0; cycle < 2; ++cycle) {
            const double factor = cycle == 0 ? 1.0 : spec.repeat_factor;
            const double fp = factor * spec.envelope(a);
            const double fn = -factor * spec.negative_scale * spec.envelope(a);
            quarter(0.0, a, 0.0, fp);
            quarter(a, 0.0, fp, 0.0);
            quarter(0.0, -a, 0.0, fn);
            quarter(-a, 0.0, fn, 0.0);
        }
    }
    return rec;
}

inline std::vector<double> amplitude_range(double first, double last, double step) {
    std::vector<double> out;
    for (double a = first; a <= last + 1e-12; a += step) out.push_back(a);
    return out;
}

// k = 100 kN/mm up to a 500 kN plateau.
inline double elastoplastic(double d) { return std::min(100.0 * d, 500.0); }

// k = 100 kN/mm to 400 kN at 4 mm, linear to 600 kN at 10 mm, then linear decay to 300 kN at 30 mm.
inline double decaying(double d) {
    if (d <= 4.0) return 100.0 * d;
    if (d <= 10.0) return 400.0 + (600.0 - 400.0) * (d - 4.0) / 6.0;
    return 600.0 - (600.0 - 300.0) * (d - 10.0) / 20.0;
}

}  // namespace oracle
