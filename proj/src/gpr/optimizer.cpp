#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <string>

#include "wallgp/error.hpp"
#include "wallgp/gpr.hpp"

namespace wallgp::gpr {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 40;
constexpr double kMaxLogStep = 2.0;  // cap on a single trial step in log space (about 7x)

// Packs the free hyperparameters into log space. The noise entry is dropped when it is fixed.
class LogSpace {
public:
    LogSpace(Eigen::Index dimension, const OptimizerConfig& config)
        : dimension_(dimension), fixed_noise_(config.fixed_noise_variance) {
        const Eigen::Index size = free_size();
        lower_.resize(size);
        upper_.resize(size);
        lower_.head(dimension).setConstant(std::log(config.min_lengthscale));
        upper_.head(dimension).setConstant(std::log(config.max_lengthscale));
        lower_(dimension) = std::log(config.min_signal_variance);
        upper_(dimension) = std::log(config.max_signal_variance);
        if (!fixed_noise_) {
            lower_(dimension + 1) = std::log(config.min_noise_variance);
            upper_(dimension + 1) = std::log(config.max_noise_variance);
        }
    }

    Eigen::Index free_size() const { return dimension_ + (fixed_noise_ ? 1 : 2); }

    Vector pack(const KernelParams& p) const {
        Vector theta(free_size());
        theta.head(dimension_) = p.lengthscales.array().log().matrix();
        theta(dimension_) = std::log(p.signal_variance);
        if (!fixed_noise_) theta(dimension_ + 1) = std::log(p.noise_variance);
        return theta;
    }

    KernelParams unpack(const Vector& theta) const {
        KernelParams p;
        p.lengthscales = theta.head(dimension_).array().exp().matrix();
        p.signal_variance = std::exp(theta(dimension_));
        p.noise_variance = fixed_noise_ ? *fixed_noise_ : std::exp(theta(dimension_ + 1));
        return p;
    }

    Vector free_gradient(const Vector& full) const { return full.head(free_size()); }

    Vector clamp(const Vector& theta) const { return theta.cwiseMax(lower_).cwiseMin(upper_); }

    // Zeroes gradient components that point out of the feasible box (minimization sign).
    Vector projected(const Vector& theta, const Vector& grad) const {
        Vector pg = grad;
        for (Eigen::Index i = 0; i < theta.size(); ++i) {
            if (theta(i) <= lower_(i) && grad(i) > 0.0) pg(i) = 0.0;
            if (theta(i) >= upper_(i) && grad(i) < 0.0) pg(i) = 0.0;
        }
        return pg;
    }

private:
    Eigen::Index dimension_;
    std::optional<double> fixed_noise_;
    Vector lower_;
    Vector upper_;
};

struct Evaluation {
    double objective = std::numeric_limits<double>::infinity();  // negative log likelihood
    Vector gradient;
    bool ok = false;
};

class Objective {
public:
    Objective(const Matrix& x, const Vector& y, const LogSpace& space) : x_(x), y_(y), space_(space) {}

    Evaluation operator()(const Vector& theta) const {
        Evaluation e;
        try {
            const LogLikelihood lml = log_marginal_likelihood(x_, y_, space_.unpack(theta));
            if (!std::isfinite(lml.value) || !lml.gradient.allFinite()) return e;
            e.objective = -lml.value;
            e.gradient = -space_.free_gradient(lml.gradient);
            e.ok = true;
        } catch (const Error& err) {
            if (err.code() != ErrorCode::NotPositiveDefinite) throw;
        }
        return e;
    }

private:
    const Matrix& x_;
    const Vector& y_;
    const LogSpace& space_;
};

struct LocalResult {
    Vector theta;
    double objective = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool ok = false;
};

Vector two_loop_direction(const Vector& grad, const std::deque<Vector>& s_hist, const std::deque<Vector>& y_hist) {
    Vector q = grad;
    const auto m = s_hist.size();
    std::vector<double> alpha(m);
    std::vector<double> rho(m);
    for (std::size_t k = m; k-- > 0;) {
        rho[k] = 1.0 / y_hist[k].dot(s_hist[k]);
        alpha[k] = rho[k] * s_hist[k].dot(q);
        q -= alpha[k] * y_hist[k];
    }
    if (m > 0) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t k = 0; k < m; ++k) {
        const double beta = rho[k] * y_hist[k].dot(q);
        q += (alpha[k] - beta) * s_hist[k];
    }
    return -q;
}

LocalResult minimize_from(const Vector& start, const Objective& objective, const LogSpace& space,
                          const OptimizerConfig& config) {
    LocalResult result;
    Vector theta = space.clamp(start);
    Evaluation current = objective(theta);
    if (!current.ok) return result;

    std::deque<Vector> s_hist;
    std::deque<Vector> y_hist;
    int iter = 0;
    for (; iter < config.max_iterations; ++iter) {
        const Vector pg = space.projected(theta, current.gradient);
        if (pg.norm() < config.gradient_tolerance) break;

        Vector direction = two_loop_direction(pg, s_hist, y_hist);
        for (Eigen::Index i = 0; i < pg.size(); ++i) {
            if (pg(i) == 0.0) direction(i) = 0.0;
        }
        if (!(direction.dot(pg) < 0.0)) {
            s_hist.clear();
            y_hist.clear();
            direction = -pg;
        }

        double step = std::min(1.0, kMaxLogStep / direction.cwiseAbs().maxCoeff());
        Vector trial_theta;
        Evaluation trial;
        bool accepted = false;
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            trial_theta = space.clamp(theta + step * direction);
            trial = objective(trial_theta);
            if (trial.ok && trial.objective <= current.objective + kArmijo * current.gradient.dot(trial_theta - theta)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (s_hist.empty()) break;
            s_hist.clear();
            y_hist.clear();
            continue;
        }

        const Vector s = trial_theta - theta;
        const Vector yk = trial.gradient - current.gradient;
        const double improvement = current.objective - trial.objective;
        if (s.dot(yk) > 1e-10 * s.norm() * yk.norm()) {
            s_hist.push_back(s);
            y_hist.push_back(yk);
            if (static_cast<int>(s_hist.size()) > config.history) {
                s_hist.pop_front();
                y_hist.pop_front();
            }
        }
        theta = trial_theta;
        current = std::move(trial);
        if (improvement <= config.function_tolerance * std::max(1.0, std::abs(current.objective))) {
            ++iter;
            break;
        }
    }
    result.theta = theta;
    result.objective = current.objective;
    result.iterations = iter;
    result.ok = true;
    return result;
}

}  // namespace

OptimizationReport optimize_hyperparameters_report(const Matrix& x, const Vector& y, const KernelParams& init,
                                                   const OptimizerConfig& config) {
    if (x.rows() != y.size()) {
        fail(ErrorCode::DimensionMismatch, "optimize_hyperparameters: " + std::to_string(x.rows()) + " inputs vs " +
                                               std::to_string(y.size()) + " targets");
    }
    KernelParams start = init;
    if (config.fixed_noise_variance) start.noise_variance = *config.fixed_noise_variance;
    start.validate(x.cols());
    if (!config.fixed_noise_variance && !(start.noise_variance > 0.0)) {
        fail(ErrorCode::InvariantViolation, "optimize_hyperparameters: free noise variance must start > 0");
    }

    const LogSpace space(x.cols(), config);
    const Objective objective(x, y, space);
    const Vector theta0 = space.pack(start);

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> perturb(-config.perturbation_decades * std::log(10.0),
                                                   config.perturbation_decades * std::log(10.0));

    OptimizationReport report;
    const Evaluation initial = objective(theta0);
    report.initial_log_likelihood = initial.ok ? -initial.objective : -std::numeric_limits<double>::infinity();

    bool have_best = false;
    double best_objective = std::numeric_limits<double>::infinity();
    Vector best_theta;
    for (int start_index = 0; start_index <= config.restarts; ++start_index) {
        Vector theta = theta0;
        if (start_index > 0) {
            for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) += perturb(rng);
        }
        const LocalResult local = minimize_from(theta, objective, space, config);
        report.iterations += local.iterations;
        if (!local.ok) {
            ++report.failed_starts;
            continue;
        }
        // Later starts must beat the incumbent by more than round-off to replace it.
        if (!have_best || local.objective < best_objective - 1e-9 * std::max(1.0, std::abs(best_objective))) {
            have_best = true;
            best_objective = local.objective;
            best_theta = local.theta;
            report.best_start = start_index;
        }
    }
    if (!have_best) {
        fail(ErrorCode::OptimizationDiverged, "every optimizer start failed to produce a finite likelihood");
    }
    report.params = space.unpack(best_theta);
    report.log_likelihood = -best_objective;
    return report;
}

KernelParams optimize_hyperparameters(const Matrix& x, const Vector& y, const KernelParams& init,
                                      const OptimizerConfig& config) {
    return optimize_hyperparameters_report(x, y, init, config).params;
}

}  // namespace wallgp::gpr
