#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "noisyopt/evaluation.hpp"
#include "noisyopt/problems.hpp"
#include "noisyopt/rng.hpp"

namespace noisyopt {

// Additive posterior Gaussian noise N(0, sigma), drawn fresh at every
// evaluation. sigma == 0 makes every noisy evaluator return the noiseless
// value exactly.
struct NoiseModel {
    double sigma = 0.0;
};

inline NoiseModel make_noise(double sigma) {
    if (!(sigma >= 0.0))
        throw std::invalid_argument("NoiseModel: sigma must be non-negative");
    return {sigma};
}

// Noiseless value plus one fresh N(0, sigma) draw; one counter tick per call.
// F is any pure functor Bitstring -> double. evaluate_traced also reports the
// noiseless value of the same call, for best-so-far observers.
template <typename F>
class CountedNoisyScalar {
public:
    CountedNoisyScalar(F noiseless, NoiseModel noise, RngStream noise_stream)
        : f_(std::move(noiseless)), noise_(noise), rng_(noise_stream) {}

    std::pair<double, double> evaluate_traced(const Bitstring& x) {
        counter_.tick();
        const double v = f_(x);
        return {v + rng_.next_gaussian(noise_.sigma), v};
    }

    double operator()(const Bitstring& x) { return evaluate_traced(x).first; }

    double noiseless(const Bitstring& x) const { return f_(x); }
    double sigma() const { return noise_.sigma; }
    const EvaluationCounter& counter() const { return counter_; }
    RngStream& noise_stream() { return rng_; }

private:
    F f_;
    NoiseModel noise_;
    RngStream rng_;
    EvaluationCounter counter_;
};

// Knapsack with noisy constraint judgement: the weight receives one noise
// draw when checked against the capacity, and that same value reports the
// excess on the infeasible branch. The feasible branch draws separately for
// the profit. Draw order within a call: weight noise first, then profit.
class NoisyKnapsackV2 {
public:
    NoisyKnapsackV2(const KnapsackInstance& inst, NoiseModel noise, RngStream noise_stream)
        : inst_(&inst), noise_(noise), rng_(noise_stream) {}

    std::pair<double, double> evaluate_traced(const Bitstring& x) {
        counter_.tick();
        std::int64_t weight = 0, profit = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i]) {
                weight += inst_->weights[i];
                profit += inst_->profits[i];
            }
        const double capacity = static_cast<double>(inst_->capacity);
        const double truth = weight <= inst_->capacity
                                 ? static_cast<double>(profit)
                                 : capacity - static_cast<double>(weight);
        const double noisy_weight =
            static_cast<double>(weight) + rng_.next_gaussian(noise_.sigma);
        const double noisy = noisy_weight <= capacity
                                 ? static_cast<double>(profit) + rng_.next_gaussian(noise_.sigma)
                                 : capacity - noisy_weight;
        return {noisy, truth};
    }

    double operator()(const Bitstring& x) { return evaluate_traced(x).first; }

    double noiseless(const Bitstring& x) const {
        return static_cast<double>(eval_knapsack(*inst_, x));
    }
    double sigma() const { return noise_.sigma; }
    const KnapsackInstance& instance() const { return *inst_; }
    const EvaluationCounter& counter() const { return counter_; }
    RngStream& noise_stream() { return rng_; }

private:
    const KnapsackInstance* inst_;
    NoiseModel noise_;
    RngStream rng_;
    EvaluationCounter counter_;
};

// Bi-objective evaluation with an independent fresh draw per objective and
// one counter tick per vector evaluation. Draw order: f1 noise, then f2.
template <typename F>
class CountedNoisyVector {
public:
    CountedNoisyVector(F noiseless, NoiseModel noise, RngStream noise_stream)
        : f_(std::move(noiseless)), noise_(noise), rng_(noise_stream) {}

    std::pair<BiObjectiveValue, BiObjectiveValue> evaluate_traced(const Bitstring& x) {
        counter_.tick();
        const BiObjectiveValue truth = f_(x);
        BiObjectiveValue noisy = truth;
        noisy.f1 += rng_.next_gaussian(noise_.sigma);
        noisy.f2 += rng_.next_gaussian(noise_.sigma);
        return {noisy, truth};
    }

    BiObjectiveValue operator()(const Bitstring& x) { return evaluate_traced(x).first; }

    BiObjectiveValue noiseless(const Bitstring& x) const { return f_(x); }
    double sigma() const { return noise_.sigma; }
    const EvaluationCounter& counter() const { return counter_; }
    RngStream& noise_stream() { return rng_; }

private:
    F f_;
    NoiseModel noise_;
    RngStream rng_;
    EvaluationCounter counter_;
};

struct NoisyConstrainedEval {
    double cost = 0.0;
    std::int64_t violations = 0;
};

// SetCover with noisy constraint checks: the cost gets one draw, then every
// element's coverage gets an independent draw before comparison against 1.
// Draw order within a call: cost first, then constraints in element order.
class NoisyConstrainedSetCover {
public:
    NoisyConstrainedSetCover(const SetCoverIndex& index, NoiseModel noise, RngStream noise_stream)
        : index_(&index), noise_(noise), rng_(noise_stream) {}

    std::pair<NoisyConstrainedEval, SetCoverEval> evaluate_traced(const Bitstring& x) {
        counter_.tick();
        index_->coverage(x, counts_);
        SetCoverEval truth;
        truth.sets_used = static_cast<std::int64_t>(x.count_ones());
        NoisyConstrainedEval noisy;
        noisy.cost = static_cast<double>(truth.sets_used) + rng_.next_gaussian(noise_.sigma);
        for (std::int32_t c : counts_) {
            truth.uncovered += c == 0;
            noisy.violations += static_cast<double>(c) + rng_.next_gaussian(noise_.sigma) < 1.0;
        }
        return {noisy, truth};
    }

    NoisyConstrainedEval operator()(const Bitstring& x) { return evaluate_traced(x).first; }

    SetCoverEval noiseless(const Bitstring& x) const {
        return eval_setcover(index_->instance(), x);
    }
    double sigma() const { return noise_.sigma; }
    const SetCoverIndex& index() const { return *index_; }
    const EvaluationCounter& counter() const { return counter_; }
    RngStream& noise_stream() { return rng_; }

private:
    const SetCoverIndex* index_;
    NoiseModel noise_;
    RngStream rng_;
    EvaluationCounter counter_;
    std::vector<std::int32_t> counts_;
};

} // namespace noisyopt
