#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "noisyopt/bitstring.hpp"
#include "noisyopt/rng.hpp"

namespace noisyopt {

enum class Sense { maximize, minimize };

// ---------------------------------------------------------------------------
// Instance types
// ---------------------------------------------------------------------------

// n positive weights; OneMax is the unit-weight special case.
struct LinearInstance {
    std::vector<std::int64_t> weights;

    std::size_t dimension() const { return weights.size(); }
    std::int64_t weight_sum() const {
        return std::accumulate(weights.begin(), weights.end(), std::int64_t{0});
    }
    bool operator==(const LinearInstance&) const = default;
};

struct SubsetSumInstance {
    std::vector<std::int64_t> weights;
    std::int64_t target = 0;

    std::size_t dimension() const { return weights.size(); }
    bool operator==(const SubsetSumInstance&) const = default;
};

struct KnapsackInstance {
    std::vector<std::int64_t> weights;
    std::vector<std::int64_t> profits;
    std::int64_t capacity = 0;

    std::size_t dimension() const { return weights.size(); }
    bool operator==(const KnapsackInstance&) const = default;
};

// m elements, n candidate subsets; membership(i,j) == 1 iff subset j covers
// element i. Row-major m x n.
struct SetCoverInstance {
    std::size_t elements = 0;
    std::size_t subsets = 0;
    std::vector<std::uint8_t> membership;

    std::size_t dimension() const { return subsets; }
    bool operator==(const SetCoverInstance&) const = default;

    bool covers(std::size_t element, std::size_t subset) const {
        return membership[element * subsets + subset] != 0;
    }
};

struct COCZInstance {
    std::size_t n = 0;
    std::size_t m = 0; // split point, 1 <= m <= n

    bool operator==(const COCZInstance&) const = default;
};

struct BiObjectiveValue {
    double f1 = 0.0;
    double f2 = 0.0;

    bool operator==(const BiObjectiveValue&) const = default;
};

// ---------------------------------------------------------------------------
// Noiseless evaluators (pure)
// ---------------------------------------------------------------------------

inline std::int64_t eval_onemax(const Bitstring& x) {
    return static_cast<std::int64_t>(x.count_ones());
}

inline std::int64_t eval_weighted_linear(const LinearInstance& inst, const Bitstring& x) {
    if (x.size() != inst.weights.size())
        throw std::invalid_argument("eval_weighted_linear: length mismatch");
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i])
            sum += inst.weights[i];
    return sum;
}

inline std::int64_t eval_subset_sum(const SubsetSumInstance& inst, const Bitstring& x) {
    if (x.size() != inst.weights.size())
        throw std::invalid_argument("eval_subset_sum: length mismatch");
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i])
            sum += inst.weights[i];
    return std::abs(inst.target - sum);
}

inline std::int64_t eval_knapsack(const KnapsackInstance& inst, const Bitstring& x) {
    if (x.size() != inst.weights.size())
        throw std::invalid_argument("eval_knapsack: length mismatch");
    std::int64_t weight = 0, profit = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) {
            weight += inst.weights[i];
            profit += inst.profits[i];
        }
    return weight <= inst.capacity ? profit : inst.capacity - weight;
}

struct SetCoverEval {
    std::int64_t sets_used = 0;
    std::int64_t uncovered = 0;

    bool feasible() const { return uncovered == 0; }
    bool operator==(const SetCoverEval&) const = default;
};

// Per-subset element lists, precomputed once per instance so evaluation is
// linear in the number of 1-entries actually selected.
class SetCoverIndex {
public:
    explicit SetCoverIndex(const SetCoverInstance& inst) : inst_(&inst) {
        covered_.resize(inst.subsets);
        for (std::size_t j = 0; j < inst.subsets; ++j)
            for (std::size_t i = 0; i < inst.elements; ++i)
                if (inst.covers(i, j))
                    covered_[j].push_back(static_cast<std::uint32_t>(i));
    }

    const SetCoverInstance& instance() const { return *inst_; }

    void coverage(const Bitstring& x, std::vector<std::int32_t>& counts) const {
        if (x.size() != inst_->subsets)
            throw std::invalid_argument("setcover: length mismatch");
        counts.assign(inst_->elements, 0);
        for (std::size_t j = 0; j < x.size(); ++j)
            if (x[j])
                for (std::uint32_t i : covered_[j])
                    ++counts[i];
    }

private:
    const SetCoverInstance* inst_;
    std::vector<std::vector<std::uint32_t>> covered_;
};

// Per-element coverage multiplicities; scratch may be reused across calls.
inline void setcover_coverage(const SetCoverInstance& inst, const Bitstring& x,
                              std::vector<std::int32_t>& counts) {
    if (x.size() != inst.subsets)
        throw std::invalid_argument("setcover: length mismatch");
    counts.assign(inst.elements, 0);
    for (std::size_t i = 0; i < inst.elements; ++i)
        for (std::size_t j = 0; j < inst.subsets; ++j)
            counts[i] += x[j] && inst.covers(i, j);
}

inline SetCoverEval eval_setcover(const SetCoverInstance& inst, const Bitstring& x) {
    std::vector<std::int32_t> counts;
    setcover_coverage(inst, x, counts);
    SetCoverEval r;
    r.sets_used = static_cast<std::int64_t>(x.count_ones());
    for (std::int32_t c : counts)
        r.uncovered += c == 0;
    return r;
}

// sets_used + penalty * uncovered. Coverage shortfall per element is 0 or 1,
// so the uncovered count equals the sum of max{0, 1 - coverage} terms.
inline double eval_penalty_setcover(const SetCoverInstance& inst, double penalty,
                                    const Bitstring& x) {
    if (!(penalty > 0.0))
        throw std::invalid_argument("eval_penalty_setcover: penalty must be positive");
    const SetCoverEval e = eval_setcover(inst, x);
    return static_cast<double>(e.sets_used) + penalty * static_cast<double>(e.uncovered);
}

// Any feasible solution (cost <= n) strictly beats any infeasible one.
inline double default_setcover_penalty(const SetCoverInstance& inst) {
    return static_cast<double>(inst.subsets + 1);
}

// f1 counts ones everywhere; f2 counts ones in the first m positions plus
// zeros in the rest. Both maximized.
inline BiObjectiveValue eval_cocz(const COCZInstance& inst, const Bitstring& x) {
    if (x.size() != inst.n)
        throw std::invalid_argument("eval_cocz: length mismatch");
    if (inst.m < 1 || inst.m > inst.n)
        throw std::invalid_argument("eval_cocz: split point out of range");
    std::int64_t ones = 0, head_ones = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) {
            ++ones;
            head_ones += i < inst.m;
        }
    const std::int64_t tail_zeros =
        static_cast<std::int64_t>(inst.n - inst.m) - (ones - head_ones);
    return {static_cast<double>(ones), static_cast<double>(head_ones + tail_zeros)};
}

// The n-m+1 distinct objective vectors of the optimal strings 1^m *^(n-m):
// {(m+k, n-k) : k = 0..n-m}.
inline std::vector<BiObjectiveValue> cocz_true_front(const COCZInstance& inst) {
    std::vector<BiObjectiveValue> front;
    front.reserve(inst.n - inst.m + 1);
    for (std::size_t k = 0; k <= inst.n - inst.m; ++k)
        front.push_back({static_cast<double>(inst.m + k), static_cast<double>(inst.n - k)});
    return front;
}

// ---------------------------------------------------------------------------
// Instance generators
// ---------------------------------------------------------------------------

inline constexpr std::int64_t kMinWeight = 1;
inline constexpr std::int64_t kMaxWeight = 100;

template <UniformRng Rng>
std::vector<std::int64_t> random_weights(std::size_t n, Rng& rng) {
    std::vector<std::int64_t> w(n);
    for (auto& v : w)
        v = kMinWeight + static_cast<std::int64_t>(
                             rng.next_below(static_cast<std::uint64_t>(kMaxWeight - kMinWeight + 1)));
    return w;
}

template <UniformRng Rng>
LinearInstance gen_linear_instance(std::size_t n, Rng& rng) {
    if (n == 0)
        throw std::invalid_argument("gen_linear_instance: n must be positive");
    return {random_weights(n, rng)};
}

inline LinearInstance onemax_instance(std::size_t n) {
    return {std::vector<std::int64_t>(n, 1)};
}

inline std::int64_t two_thirds_of_sum(const std::vector<std::int64_t>& w) {
    const std::int64_t sum = std::accumulate(w.begin(), w.end(), std::int64_t{0});
    return 2 * sum / 3; // floor for non-negative sums
}

template <UniformRng Rng>
SubsetSumInstance gen_subsetsum_instance(std::size_t n, Rng& rng) {
    if (n == 0)
        throw std::invalid_argument("gen_subsetsum_instance: n must be positive");
    SubsetSumInstance inst{random_weights(n, rng), 0};
    inst.target = two_thirds_of_sum(inst.weights);
    return inst;
}

template <UniformRng Rng>
KnapsackInstance gen_knapsack_instance(std::size_t n, Rng& rng) {
    if (n == 0)
        throw std::invalid_argument("gen_knapsack_instance: n must be positive");
    KnapsackInstance inst;
    inst.weights = random_weights(n, rng);
    inst.profits = random_weights(n, rng);
    inst.capacity = two_thirds_of_sum(inst.weights);
    return inst;
}

// Membership probability that makes a full cover exist with probability
// 1 - delta: p = 1 - (1 - (1 - delta)^(1/m))^(1/n).
inline double setcover_fill_probability(std::size_t m, std::size_t n, double delta) {
    if (m == 0 || n == 0)
        throw std::invalid_argument("setcover_fill_probability: m, n must be positive");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("setcover_fill_probability: delta must lie in (0,1)");
    const double inner = 1.0 - std::pow(1.0 - delta, 1.0 / static_cast<double>(m));
    return 1.0 - std::pow(inner, 1.0 / static_cast<double>(n));
}

// Degenerate instances (an uncoverable element, probability <= delta) are
// kept, matching the generative process exactly.
template <UniformRng Rng>
SetCoverInstance gen_setcover_instance(std::size_t m, std::size_t n, double delta, Rng& rng) {
    const double p = setcover_fill_probability(m, n, delta);
    SetCoverInstance inst;
    inst.elements = m;
    inst.subsets = n;
    inst.membership.resize(m * n);
    for (auto& a : inst.membership)
        a = rng.next_bernoulli(p) ? 1 : 0;
    return inst;
}

} // namespace noisyopt
