#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "noisyopt/noise.hpp"
#include "noisyopt/problems.hpp"
#include "noisyopt/rng.hpp"

namespace noisyopt {

// Constraint-first ordering for (cost, violation) pairs, both minimized:
// fewer violated constraints always wins, cost breaks ties. Returns <0 when a
// is preferred, >0 when b is preferred, 0 when indistinguishable.
inline int lexicographic_compare(const NoisyConstrainedEval& a, const NoisyConstrainedEval& b) {
    if (a.violations != b.violations)
        return a.violations < b.violations ? -1 : 1;
    if (a.cost != b.cost)
        return a.cost < b.cost ? -1 : 1;
    return 0;
}

// ---------------------------------------------------------------------------
// Single-objective tasks
//
// A task bundles one run's counted noisy evaluator with the noiseless
// best-so-far observer. The observer sees the true value of every evaluated
// string without consuming budget; algorithms only ever rank noisy scores.
// ---------------------------------------------------------------------------

template <typename Eval>
class ScalarTask {
public:
    using Score = double;

    ScalarTask(Eval eval, std::size_t dimension, Sense sense,
               std::optional<double> optimum = std::nullopt)
        : eval_(std::move(eval)), dim_(dimension), sense_(sense), optimum_(optimum) {}

    Score evaluate(const Bitstring& x) {
        const auto [noisy, truth] = eval_.evaluate_traced(x);
        if (!best_ || truly_better(truth, *best_)) {
            best_ = truth;
            evals_to_best_ = evaluations();
        }
        return noisy;
    }

    bool better(Score a, Score b) const {
        return sense_ == Sense::maximize ? a > b : a < b;
    }
    bool at_least_as_good(Score a, Score b) const {
        return sense_ == Sense::maximize ? a >= b : a <= b;
    }

    std::size_t dimension() const { return dim_; }
    Sense sense() const { return sense_; }
    std::uint64_t evaluations() const { return eval_.counter().count(); }

    std::optional<double> best_true_fitness() const { return best_; }
    std::optional<double> best_feasible_cost() const { return std::nullopt; }
    std::uint64_t evals_to_best() const { return evals_to_best_; }
    double trace_value() const { return best_ ? *best_ : std::nan(""); }

    bool optimum_found() const { return optimum_ && best_ && *best_ == *optimum_; }
    std::optional<double> optimum() const { return optimum_; }

    Eval& evaluator() { return eval_; }

private:
    bool truly_better(double a, double b) const {
        return sense_ == Sense::maximize ? a > b : a < b;
    }

    Eval eval_;
    std::size_t dim_;
    Sense sense_;
    std::optional<double> optimum_;
    std::optional<double> best_;
    std::uint64_t evals_to_best_ = 0;
};

// Penalty SetCover: scalar minimization of cost + penalty * uncovered, with
// an additional observer for the best truly feasible cover cost, which is
// what the formulation comparisons report.
class PenaltySetCoverTask {
public:
    using Score = double;

    PenaltySetCoverTask(const SetCoverIndex& index, double penalty, NoiseModel noise,
                        RngStream noise_stream)
        : index_(&index), penalty_(penalty), noise_(noise), rng_(noise_stream),
          dim_(index.instance().subsets) {
        if (!(penalty > 0.0))
            throw std::invalid_argument("PenaltySetCoverTask: penalty must be positive");
    }

    Score evaluate(const Bitstring& x) {
        counter_.tick();
        index_->coverage(x, scratch_);
        std::int64_t uncovered = 0;
        for (std::int32_t c : scratch_)
            uncovered += c == 0;
        const double cost = static_cast<double>(x.count_ones());
        const double truth = cost + penalty_ * static_cast<double>(uncovered);
        if (!best_ || truth < *best_) {
            best_ = truth;
            evals_to_best_ = evaluations();
        }
        if (uncovered == 0 && (!best_feasible_ || cost < *best_feasible_))
            best_feasible_ = cost;
        return truth + rng_.next_gaussian(noise_.sigma);
    }

    bool better(Score a, Score b) const { return a < b; }
    bool at_least_as_good(Score a, Score b) const { return a <= b; }

    std::size_t dimension() const { return dim_; }
    Sense sense() const { return Sense::minimize; }
    std::uint64_t evaluations() const { return counter_.count(); }

    std::optional<double> best_true_fitness() const { return best_; }
    std::optional<double> best_feasible_cost() const { return best_feasible_; }
    std::uint64_t evals_to_best() const { return evals_to_best_; }
    double trace_value() const { return best_ ? *best_ : std::nan(""); }

    bool optimum_found() const { return false; }
    std::optional<double> optimum() const { return std::nullopt; }

private:
    const SetCoverIndex* index_;
    double penalty_;
    NoiseModel noise_;
    RngStream rng_;
    EvaluationCounter counter_;
    std::size_t dim_;
    mutable std::vector<std::int32_t> scratch_;
    std::optional<double> best_;
    std::optional<double> best_feasible_;
    std::uint64_t evals_to_best_ = 0;
};

// Constrained SetCover: noisy scores are (cost, violation) pairs compared
// lexicographically; the observer tracks the true evaluation the same way
// and reports the best truly feasible cost found.
class ConstrainedSetCoverTask {
public:
    using Score = NoisyConstrainedEval;

    ConstrainedSetCoverTask(const SetCoverIndex& index, NoiseModel noise, RngStream noise_stream)
        : eval_(index, noise, noise_stream), dim_(index.instance().subsets) {}

    Score evaluate(const Bitstring& x) {
        const auto [noisy, truth] = eval_.evaluate_traced(x);
        if (!best_ || truly_better(truth, *best_)) {
            best_ = truth;
            evals_to_best_ = evaluations();
        }
        return noisy;
    }

    bool better(const Score& a, const Score& b) const { return lexicographic_compare(a, b) < 0; }
    bool at_least_as_good(const Score& a, const Score& b) const {
        return lexicographic_compare(a, b) <= 0;
    }

    std::size_t dimension() const { return dim_; }
    Sense sense() const { return Sense::minimize; }
    std::uint64_t evaluations() const { return eval_.counter().count(); }

    std::optional<double> best_true_fitness() const { return std::nullopt; }
    std::optional<double> best_feasible_cost() const {
        if (best_ && best_->feasible())
            return static_cast<double>(best_->sets_used);
        return std::nullopt;
    }
    std::uint64_t evals_to_best() const { return evals_to_best_; }
    double trace_value() const {
        const auto c = best_feasible_cost();
        return c ? *c : std::nan("");
    }

    bool optimum_found() const { return false; } // true optimum unknown in general
    std::optional<double> optimum() const { return std::nullopt; }

    NoisyConstrainedSetCover& evaluator() { return eval_; }

private:
    static bool truly_better(const SetCoverEval& a, const SetCoverEval& b) {
        if ((a.uncovered == 0) != (b.uncovered == 0))
            return a.uncovered == 0;
        if (a.uncovered == 0)
            return a.sets_used < b.sets_used;
        return a.uncovered != b.uncovered ? a.uncovered < b.uncovered
                                          : a.sets_used < b.sets_used;
    }

    NoisyConstrainedSetCover eval_;
    std::size_t dim_;
    std::optional<SetCoverEval> best_;
    std::uint64_t evals_to_best_ = 0;
};

// ---------------------------------------------------------------------------
// Bi-objective tasks
// ---------------------------------------------------------------------------

template <typename F>
class BiObjectiveTask {
public:
    using Score = BiObjectiveValue;

    BiObjectiveTask(F noiseless, std::size_t dimension, Sense sense1, Sense sense2,
                    BiObjectiveValue reference, NoiseModel noise, RngStream noise_stream,
                    bool track_feasible_cost = false)
        : eval_(std::move(noiseless), noise, noise_stream), dim_(dimension),
          sense1_(sense1), sense2_(sense2), reference_(reference),
          track_feasible_(track_feasible_cost) {}

    Score evaluate(const Bitstring& x) {
        const auto [noisy, truth] = eval_.evaluate_traced(x);
        if (track_feasible_ && truth.f2 == 0.0)
            if (!best_feasible_ || truth.f1 < *best_feasible_) {
                best_feasible_ = truth.f1;
                evals_to_best_ = evaluations();
            }
        return noisy;
    }

    // Noiseless observer used to score population snapshots; not counted.
    BiObjectiveValue true_objectives(const Bitstring& x) const { return eval_.noiseless(x); }

    std::size_t dimension() const { return dim_; }
    Sense sense1() const { return sense1_; }
    Sense sense2() const { return sense2_; }
    BiObjectiveValue reference() const { return reference_; }
    std::uint64_t evaluations() const { return eval_.counter().count(); }

    std::optional<double> best_feasible_cost() const { return best_feasible_; }
    std::uint64_t evals_to_best() const { return evals_to_best_; }

    CountedNoisyVector<F>& evaluator() { return eval_; }

private:
    CountedNoisyVector<F> eval_;
    std::size_t dim_;
    Sense sense1_, sense2_;
    BiObjectiveValue reference_;
    bool track_feasible_;
    std::optional<double> best_feasible_;
    std::uint64_t evals_to_best_ = 0;
};

// ---------------------------------------------------------------------------
// Problem functors and task factories
// ---------------------------------------------------------------------------

struct OneMaxFn {
    double operator()(const Bitstring& x) const {
        return static_cast<double>(eval_onemax(x));
    }
};

struct WeightedLinearFn {
    const LinearInstance* inst;
    double operator()(const Bitstring& x) const {
        return static_cast<double>(eval_weighted_linear(*inst, x));
    }
};

struct SubsetSumFn {
    const SubsetSumInstance* inst;
    double operator()(const Bitstring& x) const {
        return static_cast<double>(eval_subset_sum(*inst, x));
    }
};

struct KnapsackFn {
    const KnapsackInstance* inst;
    double operator()(const Bitstring& x) const {
        return static_cast<double>(eval_knapsack(*inst, x));
    }
};

struct PenaltySetCoverFn {
    const SetCoverIndex* index;
    double penalty;
    mutable std::vector<std::int32_t> scratch;

    double operator()(const Bitstring& x) const {
        index->coverage(x, scratch);
        std::int64_t uncovered = 0;
        for (std::int32_t c : scratch)
            uncovered += c == 0;
        return static_cast<double>(x.count_ones()) + penalty * static_cast<double>(uncovered);
    }
};

struct CoczFn {
    COCZInstance inst;
    BiObjectiveValue operator()(const Bitstring& x) const { return eval_cocz(inst, x); }
};

// Objectives: (sets used, uncovered elements), both minimized.
struct MoSetCoverFn {
    const SetCoverIndex* index;
    mutable std::vector<std::int32_t> scratch;

    BiObjectiveValue operator()(const Bitstring& x) const {
        index->coverage(x, scratch);
        std::int64_t uncovered = 0;
        for (std::int32_t c : scratch)
            uncovered += c == 0;
        return {static_cast<double>(x.count_ones()), static_cast<double>(uncovered)};
    }
};

using OneMaxTask = ScalarTask<CountedNoisyScalar<OneMaxFn>>;
using WeightedLinearTask = ScalarTask<CountedNoisyScalar<WeightedLinearFn>>;
using SubsetSumTask = ScalarTask<CountedNoisyScalar<SubsetSumFn>>;
using KnapsackV1Task = ScalarTask<CountedNoisyScalar<KnapsackFn>>;
using KnapsackV2Task = ScalarTask<NoisyKnapsackV2>;
using CoczTask = BiObjectiveTask<CoczFn>;
using MoSetCoverTask = BiObjectiveTask<MoSetCoverFn>;

inline OneMaxTask make_onemax_task(std::size_t n, double sigma, RngStream noise_stream) {
    return {CountedNoisyScalar<OneMaxFn>(OneMaxFn{}, make_noise(sigma), noise_stream), n,
            Sense::maximize, static_cast<double>(n)};
}

inline WeightedLinearTask make_weighted_linear_task(const LinearInstance& inst, double sigma,
                                                    RngStream noise_stream) {
    return {CountedNoisyScalar<WeightedLinearFn>(WeightedLinearFn{&inst}, make_noise(sigma),
                                                 noise_stream),
            inst.dimension(), Sense::maximize, static_cast<double>(inst.weight_sum())};
}

inline SubsetSumTask make_subsetsum_task(const SubsetSumInstance& inst, double sigma,
                                         RngStream noise_stream) {
    return {CountedNoisyScalar<SubsetSumFn>(SubsetSumFn{&inst}, make_noise(sigma), noise_stream),
            inst.dimension(), Sense::minimize, 0.0};
}

inline KnapsackV1Task make_knapsack_v1_task(const KnapsackInstance& inst, double sigma,
                                            RngStream noise_stream) {
    return {CountedNoisyScalar<KnapsackFn>(KnapsackFn{&inst}, make_noise(sigma), noise_stream),
            inst.dimension(), Sense::maximize, std::nullopt};
}

inline KnapsackV2Task make_knapsack_v2_task(const KnapsackInstance& inst, double sigma,
                                            RngStream noise_stream) {
    return {NoisyKnapsackV2(inst, make_noise(sigma), noise_stream), inst.dimension(),
            Sense::maximize, std::nullopt};
}

inline PenaltySetCoverTask make_penalty_setcover_task(const SetCoverIndex& index, double penalty,
                                                      double sigma, RngStream noise_stream) {
    return {index, penalty, make_noise(sigma), noise_stream};
}

inline ConstrainedSetCoverTask make_constrained_setcover_task(const SetCoverIndex& index,
                                                              double sigma,
                                                              RngStream noise_stream) {
    return {index, make_noise(sigma), noise_stream};
}

inline CoczTask make_cocz_task(const COCZInstance& inst, double sigma, RngStream noise_stream) {
    // maximization with non-negative objectives: origin as reference point
    return {CoczFn{inst}, inst.n,           Sense::maximize, Sense::maximize,
            BiObjectiveValue{0.0, 0.0},     make_noise(sigma), noise_stream,
            false};
}

inline MoSetCoverTask make_mo_setcover_task(const SetCoverIndex& index, double sigma,
                                            RngStream noise_stream) {
    const auto& inst = index.instance();
    // minimization: reference at the worst attainable point (n sets, m uncovered)
    return {MoSetCoverFn{&index, {}},
            inst.subsets,
            Sense::minimize,
            Sense::minimize,
            BiObjectiveValue{static_cast<double>(inst.subsets), static_cast<double>(inst.elements)},
            make_noise(sigma),
            noise_stream,
            true};
}

} // namespace noisyopt
