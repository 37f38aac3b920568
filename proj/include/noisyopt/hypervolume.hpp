#pragma once

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include "noisyopt/problems.hpp"

namespace noisyopt {

struct HypervolumeConfig {
    BiObjectiveValue reference;
    Sense sense1 = Sense::maximize;
    Sense sense2 = Sense::maximize;
};

namespace detail {

// gain over the reference in the optimization direction; <= 0 means the
// point does not improve on the reference in that objective
inline double gain(double value, double ref, Sense sense) {
    return sense == Sense::maximize ? value - ref : ref - value;
}

} // namespace detail

// Volume of the box spanned by one point and the reference; 0 unless the
// point improves on the reference in both objectives.
inline double individual_hypervolume(const BiObjectiveValue& p, const HypervolumeConfig& cfg) {
    const double u1 = detail::gain(p.f1, cfg.reference.f1, cfg.sense1);
    const double u2 = detail::gain(p.f2, cfg.reference.f2, cfg.sense2);
    if (u1 <= 0.0 || u2 <= 0.0)
        return 0.0;
    return u1 * u2;
}

// Dimension-sweep hypervolume for two objectives: sort by the first gain
// coordinate descending and accumulate the staircase area; dominated points
// contribute nothing.
inline double hypervolume_2d(std::span<const BiObjectiveValue> points,
                             const HypervolumeConfig& cfg) {
    std::vector<std::pair<double, double>> gains;
    gains.reserve(points.size());
    for (const auto& p : points) {
        const double u1 = detail::gain(p.f1, cfg.reference.f1, cfg.sense1);
        const double u2 = detail::gain(p.f2, cfg.reference.f2, cfg.sense2);
        if (u1 > 0.0 && u2 > 0.0)
            gains.emplace_back(u1, u2);
    }
    std::sort(gains.begin(), gains.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second > b.second;
    });
    double volume = 0.0;
    double covered_u2 = 0.0;
    for (const auto& [u1, u2] : gains)
        if (u2 > covered_u2) {
            volume += u1 * (u2 - covered_u2);
            covered_u2 = u2;
        }
    return volume;
}

inline double hypervolume_2d(const std::vector<BiObjectiveValue>& points,
                             const HypervolumeConfig& cfg) {
    return hypervolume_2d(std::span<const BiObjectiveValue>(points), cfg);
}

} // namespace noisyopt
