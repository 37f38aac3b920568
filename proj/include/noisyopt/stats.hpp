#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace noisyopt {

inline double mean(std::span<const double> xs) {
    if (xs.empty())
        throw std::invalid_argument("mean: empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// sd/sqrt(n) with the n-1 sample standard deviation; 0 for a single value
inline double stderr_of_mean(std::span<const double> xs) {
    if (xs.empty())
        throw std::invalid_argument("stderr_of_mean: empty sample");
    if (xs.size() == 1)
        return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs)
        ss += (x - m) * (x - m);
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    return sd / std::sqrt(static_cast<double>(xs.size()));
}

// value as a fraction of the best solution ever encountered for the instance
inline double scaled_fitness(double value, double best_known) {
    if (best_known == 0.0)
        throw std::invalid_argument("scaled_fitness: best_known must be nonzero");
    return value / best_known;
}

struct UTestResult {
    double u1 = 0.0;
    double u2 = 0.0;
    double p_two_sided = 1.0;
    bool significant_at_5pct = false;
};

namespace detail {

// midranks of the pooled sample, parallel to the sorted order
inline std::vector<double> midranks(const std::vector<double>& sorted) {
    std::vector<double> ranks(sorted.size());
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i])
            ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0; // average of ranks i+1..j+1
        for (std::size_t k = i; k <= j; ++k)
            ranks[k] = r;
        i = j + 1;
    }
    return ranks;
}

inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

} // namespace detail

enum class UTestMethod { auto_select, exact, normal };

// Mann-Whitney U with midrank tie handling. Exact p by enumeration over all
// group assignments when n1+n2 <= 12; otherwise the normal approximation with
// tie and continuity corrections. Two-sided throughout.
inline UTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                                  UTestMethod method = UTestMethod::auto_select) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("mann_whitney_u: empty sample");
    const std::size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;

    std::vector<std::pair<double, int>> pooled;
    pooled.reserve(n);
    for (double x : a)
        pooled.emplace_back(x, 0);
    for (double x : b)
        pooled.emplace_back(x, 1);
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });

    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i)
        values[i] = pooled[i].first;
    const std::vector<double> ranks = detail::midranks(values);

    double r1 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (pooled[i].second == 0)
            r1 += ranks[i];

    UTestResult res;
    res.u1 = r1 - static_cast<double>(n1) * static_cast<double>(n1 + 1) / 2.0;
    res.u2 = static_cast<double>(n1) * static_cast<double>(n2) - res.u1;

    const bool use_exact =
        method == UTestMethod::exact || (method == UTestMethod::auto_select && n <= 12);
    if (use_exact && n > 24)
        throw std::invalid_argument("mann_whitney_u: exact enumeration limited to n1+n2 <= 24");

    if (use_exact) {
        // enumerate every assignment of n1 pooled positions to group a;
        // two-sided p = P(|U - n1 n2 / 2| >= |u_obs - n1 n2 / 2|), which with
        // ties is the swap-symmetric definition
        const double mu = static_cast<double>(n1) * static_cast<double>(n2) / 2.0;
        const double threshold = std::abs(res.u1 - mu) - 1e-9;
        std::uint64_t total = 0, extreme = 0;
        const double base = static_cast<double>(n1) * static_cast<double>(n1 + 1) / 2.0;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            if (std::popcount(mask) != static_cast<int>(n1))
                continue;
            ++total;
            double rsum = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1u << i))
                    rsum += ranks[i];
            if (std::abs(rsum - base - mu) >= threshold)
                ++extreme;
        }
        res.p_two_sided =
            std::min(1.0, static_cast<double>(extreme) / static_cast<double>(total));
    } else {
        const double mu = static_cast<double>(n1) * static_cast<double>(n2) / 2.0;
        double tie_sum = 0.0;
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && values[j + 1] == values[i])
                ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_sum += t * t * t - t;
            i = j + 1;
        }
        const double nn = static_cast<double>(n);
        const double var = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                           ((nn + 1.0) - tie_sum / (nn * (nn - 1.0)));
        if (var <= 0.0) {
            res.p_two_sided = 1.0; // all pooled values identical
        } else {
            const double num = std::max(0.0, std::abs(res.u1 - mu) - 0.5);
            const double z = num / std::sqrt(var);
            res.p_two_sided = std::min(1.0, 2.0 * detail::normal_sf(z));
        }
    }
    res.significant_at_5pct = res.p_two_sided < 0.05;
    return res;
}

} // namespace noisyopt
