#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "wallgp/error.hpp"
#include "wallgp/evaluation.hpp"

namespace wallgp::evaluation {

namespace {

constexpr std::size_t kMinSpecimens = 20;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(splitmix64(base) ^ a) ^ b);
}

SplitPlan make_splits(const std::vector<std::string>& ids, std::uint64_t seed, int trials, double fraction) {
    if (ids.size() < kMinSpecimens) {
        fail(ErrorCode::TooFewSpecimens,
             fmt::format("{} specimens in scope, need at least {}", ids.size(), kMinSpecimens));
    }
    if (trials < 1) fail(ErrorCode::ConfigError, fmt::format("trial count must be >= 1, got {}", trials));
    if (!(fraction > 0.0 && fraction < 1.0)) {
        fail(ErrorCode::ConfigError, fmt::format("train fraction must lie in (0, 1), got {}", fraction));
    }
    const std::size_t n = ids.size();
    const auto n_train = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
    if (n_train < 2 || n_train >= n) {
        fail(ErrorCode::ConfigError, fmt::format("train fraction {} leaves {} of {} specimens for training",
                                                 fraction, n_train, n));
    }

    SplitPlan plan;
    plan.seed = seed;
    plan.trial_count = trials;
    plan.train_fraction = fraction;
    plan.ids = ids;
    plan.trials.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        // Fisher-Yates with an explicit draw.
        for (std::size_t i = n - 1; i > 0; --i) {
            const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
            std::swap(order[i], order[j]);
        }
        TrialSplit split;
        split.train.assign(order.begin(), order.begin() + static_cast<long>(n_train));
        split.test.assign(order.begin() + static_cast<long>(n_train), order.end());
        std::sort(split.train.begin(), split.train.end());
        std::sort(split.test.begin(), split.test.end());
        plan.trials.push_back(std::move(split));
    }
    return plan;
}

}  // namespace wallgp::evaluation
