#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "wallgp/dataset.hpp"
#include "wallgp/error.hpp"

namespace wallgp::dataset {

namespace {

constexpr std::size_t kMinSamples = 20;

// Linear interpolation on an envelope that implicitly starts at the origin.
double interpolate(const Envelope& e, double d) {
    double d0 = 0.0;
    double f0 = 0.0;
    for (std::size_t i = 0; i < e.displacement.size(); ++i) {
        const double d1 = e.displacement[i];
        const double f1 = e.force[i];
        if (d <= d1) {
            if (d1 == d0) return f1;
            return f0 + (f1 - f0) * (d - d0) / (d1 - d0);
        }
        d0 = d1;
        f0 = f1;
    }
    return f0;
}

bool displacement_is_monotone(const std::vector<HysteresisSample>& samples) {
    bool increasing = true;
    bool decreasing = true;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].displacement < samples[i - 1].displacement) increasing = false;
        if (samples[i].displacement > samples[i - 1].displacement) decreasing = false;
    }
    return increasing || decreasing;
}

// First displacement (walking outward from the origin) at which the envelope reaches `target` force.
double displacement_at_force(const Envelope& e, double target) {
    double d0 = 0.0;
    double f0 = 0.0;
    for (std::size_t i = 0; i < e.displacement.size(); ++i) {
        const double d1 = e.displacement[i];
        const double f1 = e.force[i];
        if (f1 >= target) {
            if (f1 == f0) return d1;
            return d0 + (d1 - d0) * (target - f0) / (f1 - f0);
        }
        d0 = d1;
        f0 = f1;
    }
    return e.displacement.back();
}

}  // namespace

Envelope direction_envelope(const HysteresisRecord& record, int direction, const ExtractionConfig& config) {
    const double sign = direction >= 0 ? 1.0 : -1.0;
    Envelope env;
    double running_peak = 0.0;
    const auto& s = record.samples;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!(sign * s[i].displacement > 0.0)) {
            ++i;
            continue;
        }
        // One excursion: a maximal run on this side of zero displacement.
        std::size_t peak = i;
        std::size_t j = i;
        while (j < s.size() && sign * s[j].displacement > 0.0) {
            if (sign * s[j].displacement > sign * s[peak].displacement) peak = j;
            ++j;
        }
        const double amplitude = sign * s[peak].displacement;
        if (amplitude > running_peak * (1.0 + config.new_amplitude_tolerance)) {
            env.displacement.push_back(amplitude);
            env.force.push_back(sign * s[peak].force);
            running_peak = amplitude;
        }
        i = j;
    }
    return env;
}

Envelope averaged_envelope(const HysteresisRecord& record, const ExtractionConfig& config) {
    if (record.samples.size() < kMinSamples) {
        fail(ErrorCode::TooFewCycles, fmt::format("record has {} samples, need at least {}", record.samples.size(),
                                                  kMinSamples));
    }
    if (displacement_is_monotone(record.samples)) {
        fail(ErrorCode::NoPeak, "displacement history is monotone; no cyclic excursions to build an envelope from");
    }
    const Envelope pos = direction_envelope(record, +1, config);
    const Envelope neg = direction_envelope(record, -1, config);
    if (pos.displacement.empty() || neg.displacement.empty()) {
        fail(ErrorCode::TooFewCycles, "record needs excursions in both loading directions");
    }
    const double limit = std::min(pos.displacement.back(), neg.displacement.back());
    std::vector<double> grid;
    for (double d : pos.displacement) {
        if (d <= limit) grid.push_back(d);
    }
    for (double d : neg.displacement) {
        if (d <= limit) grid.push_back(d);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    Envelope avg;
    for (double d : grid) {
        avg.displacement.push_back(d);
        avg.force.push_back(0.5 * (interpolate(pos, d) + interpolate(neg, d)));
    }
    return avg;
}

BackbonePoints backbone_from_envelope(const Envelope& env, double wall_height, const ExtractionConfig& config) {
    const std::size_t n = env.displacement.size();
    if (n < 2) fail(ErrorCode::TooFewCycles, fmt::format("envelope has {} points, need at least 2", n));

    const std::size_t peak = static_cast<std::size_t>(
        std::distance(env.force.begin(), std::max_element(env.force.begin(), env.force.end())));
    BackbonePoints b;
    b.wall_height = wall_height;
    b.v_max = env.force[peak];
    b.delta_max = env.displacement[peak];
    if (!(b.v_max > 0.0)) fail(ErrorCode::NoPeak, "envelope never carries a positive force");

    // Ultimate point: first post-peak crossing of ultimate_force_ratio * Vmax.
    const double residual = config.ultimate_force_ratio * b.v_max;
    b.delta_u = env.displacement.back();
    b.v_u = env.force.back();
    for (std::size_t j = peak + 1; j < n; ++j) {
        if (env.force[j] < residual) {
            const double d0 = env.displacement[j - 1];
            const double f0 = env.force[j - 1];
            b.delta_u = d0 + (env.displacement[j] - d0) * (f0 - residual) / (f0 - env.force[j]);
            b.v_u = residual;
            break;
        }
    }

    // Envelope truncated at the peak, for the yield idealization.
    Envelope pre;
    pre.displacement.assign(env.displacement.begin(), env.displacement.begin() + static_cast<long>(peak) + 1);
    pre.force.assign(env.force.begin(), env.force.begin() + static_cast<long>(peak) + 1);

    if (config.yield == YieldStrategy::EquivalentEnergy) {
        const double d_elastic = displacement_at_force(pre, config.elastic_secant_fraction * b.v_max);
        const double k_elastic = config.elastic_secant_fraction * b.v_max / d_elastic;
        double area = 0.0;
        double d0 = 0.0;
        double f0 = 0.0;
        for (std::size_t i = 0; i < pre.displacement.size(); ++i) {
            area += 0.5 * (f0 + pre.force[i]) * (pre.displacement[i] - d0);
            d0 = pre.displacement[i];
            f0 = pre.force[i];
        }
        // Elastic-perfectly-plastic curve of stiffness k_elastic ending at delta_max with equal area.
        const double dm = b.delta_max;
        const double disc = std::max(0.0, dm * dm - 2.0 * area / k_elastic);
        b.v_y = std::min(b.v_max, k_elastic * (dm - std::sqrt(disc)));
        b.delta_y = b.v_y / k_elastic;
    } else {
        b.v_y = config.yield_secant_fraction * b.v_max;
        b.delta_y = displacement_at_force(pre, b.v_y);
    }

    // Initial tangent: least-squares slope through the origin over the leading window.
    const double window = config.initial_stiffness_window * env.displacement.back();
    double sdf = 0.0;
    double sdd = 0.0;
    for (std::size_t i = 0; i < n && (i == 0 || env.displacement[i] <= window); ++i) {
        sdf += env.displacement[i] * env.force[i];
        sdd += env.displacement[i] * env.displacement[i];
    }
    const double k_initial = sdf / sdd;
    const double k_crack = config.cracking_stiffness_ratio * k_initial;

    // Cracking: first point where the secant stiffness falls below k_crack.
    b.v_cr = b.v_y;
    double d_prev = 0.0;
    double f_prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d1 = env.displacement[i];
        const double f1 = env.force[i];
        if (f1 < k_crack * d1) {
            if (i == 0) {
                b.v_cr = f1;
            } else {
                // On the segment, f(d) = f_prev + m (d - d_prev) meets k_crack * d.
                const double m = (f1 - f_prev) / (d1 - d_prev);
                const double d_cross = (f_prev - m * d_prev) / (k_crack - m);
                b.v_cr = f_prev + m * (d_cross - d_prev);
            }
            break;
        }
        d_prev = d1;
        f_prev = f1;
    }
    b.v_cr = std::min(b.v_cr, b.v_y);

    if (auto violations = b.invariant_violations(); !violations.empty()) {
        fail(ErrorCode::NoPeak, "extracted backbone is inconsistent: " + violations.front());
    }
    return b;
}

BackbonePoints extract_backbone(const HysteresisRecord& record, const ExtractionConfig& config) {
    return backbone_from_envelope(averaged_envelope(record, config), record.wall_height, config);
}

}  // namespace wallgp::dataset
