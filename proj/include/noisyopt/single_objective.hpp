#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "noisyopt/bitstring.hpp"
#include "noisyopt/rng.hpp"

namespace noisyopt {

enum class MarginMode { off, clamp };

enum class SingleObjAlgorithm { one_plus_one_ea, mutation_population, cga, pbil, umda, pcea };

inline const char* to_string(SingleObjAlgorithm a) {
    switch (a) {
    case SingleObjAlgorithm::one_plus_one_ea: return "one-plus-one-ea";
    case SingleObjAlgorithm::mutation_population: return "mutation-population";
    case SingleObjAlgorithm::cga: return "cga";
    case SingleObjAlgorithm::pbil: return "pbil";
    case SingleObjAlgorithm::umda: return "umda";
    case SingleObjAlgorithm::pcea: return "pcea";
    }
    return "?";
}

struct SingleObjConfig {
    SingleObjAlgorithm algorithm = SingleObjAlgorithm::umda;
    std::size_t lambda = 0;      // offspring / population size
    std::size_t mu = 0;          // selected size for truncation selection
    double mutation_rate = 0.0;  // chi/n, already divided by n
    double cga_step = 1.0;       // K
    double pbil_rate = 0.1;      // rho
    MarginMode margin = MarginMode::off;
};

inline std::size_t round_up_even(double x) {
    auto v = static_cast<std::size_t>(std::ceil(x));
    v += v % 2;
    return std::max<std::size_t>(v, 2);
}

// Mutation-Population constants: lambda = b sigma^2 ln n, chi = a/(3 sigma).
// b must be large enough that the non-elitist ratchet holds; b = 4 is the
// smallest power of two at which the noiseless OneMax n=50 acceptance run
// succeeds on every seed.
inline constexpr double kMutPopA = 1.0;
inline constexpr double kMutPopB = 4.0;

// Parameterizations used throughout the experiments (natural logarithms,
// sizes rounded up, to even where pairing or halving requires it):
//   (1+1)-EA             mutation rate 1/n
//   Mutation-Population  lambda = b sigma^2 ln n, rate (a/(3 sigma))/n
//   cGA                  K = 7 sigma^2 sqrt(n) ln n
//   PBIL                 lambda = 10n, mu = lambda/2, rho = 0.1
//   UMDA                 lambda = 20 sqrt(n) ln n, mu = lambda/2
//   PCEA                 population 10 sqrt(n) ln n
// sigma = 0 falls back to the sigma-free factors of the same formulas.
inline SingleObjConfig default_single_config(SingleObjAlgorithm alg, std::size_t n,
                                             double sigma) {
    if (n < 1)
        throw std::invalid_argument("default_single_config: n must be positive");
    const double nn = static_cast<double>(n);
    const double ln_n = std::log(nn);
    const double s2 = sigma > 0.0 ? sigma * sigma : 1.0;
    SingleObjConfig cfg;
    cfg.algorithm = alg;
    switch (alg) {
    case SingleObjAlgorithm::one_plus_one_ea:
        cfg.mutation_rate = 1.0 / nn;
        break;
    case SingleObjAlgorithm::mutation_population:
        cfg.lambda = std::max<std::size_t>(
            2, static_cast<std::size_t>(std::ceil(kMutPopB * s2 * ln_n)));
        cfg.mutation_rate = (sigma > 0.0 ? kMutPopA / (3.0 * sigma) : 1.0) / nn;
        break;
    case SingleObjAlgorithm::cga:
        cfg.cga_step = std::max(1.0, 7.0 * s2 * std::sqrt(nn) * ln_n);
        break;
    case SingleObjAlgorithm::pbil:
        cfg.lambda = 10 * n;
        cfg.mu = cfg.lambda / 2;
        cfg.pbil_rate = 0.1;
        break;
    case SingleObjAlgorithm::umda:
        cfg.lambda = round_up_even(20.0 * std::sqrt(nn) * ln_n);
        cfg.mu = cfg.lambda / 2;
        break;
    case SingleObjAlgorithm::pcea:
        cfg.lambda = round_up_even(10.0 * std::sqrt(nn) * ln_n);
        break;
    }
    return cfg;
}

struct TracePoint {
    std::uint64_t evals = 0;
    double value = 0.0; // best-so-far metric; NaN until defined
};

struct RunResult {
    std::optional<double> best_true_fitness;
    std::optional<double> best_feasible_cost;
    std::uint64_t evals_to_best = 0;
    std::uint64_t evals_used = 0;
    std::uint64_t generations = 0;
    bool converged = false;
    bool optimum_found = false;
    bool timed_out = false;
    std::vector<TracePoint> trace;
};

// Wall-clock guard checked at generation boundaries.
struct RunGuard {
    std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();

    static RunGuard after(std::chrono::milliseconds budget) {
        return {std::chrono::steady_clock::now() + budget};
    }
    bool expired() const {
        return deadline != std::chrono::steady_clock::time_point::max() &&
               std::chrono::steady_clock::now() >= deadline;
    }
};

inline constexpr std::uint64_t kConvergenceEvalCap = 1'000'000;

namespace detail {

template <typename Task>
void finish_run(RunResult& r, const Task& task) {
    r.best_true_fitness = task.best_true_fitness();
    r.best_feasible_cost = task.best_feasible_cost();
    r.evals_to_best = task.evals_to_best();
    r.evals_used = task.evaluations();
    r.optimum_found = task.optimum_found();
    r.trace.push_back({task.evaluations(), task.trace_value()});
}

template <typename Task>
void checkpoint(RunResult& r, const Task& task) {
    r.trace.push_back({task.evaluations(), task.trace_value()});
}

// Sample one string from a per-bit frequency vector; one Bernoulli per bit.
template <UniformRng Rng>
Bitstring sample_bitstring(const std::vector<double>& probs, Rng& rng) {
    Bitstring x(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i)
        x.set(i, rng.next_bernoulli(probs[i]));
    return x;
}

inline void apply_margins(std::vector<double>& probs, MarginMode margin) {
    const double n = static_cast<double>(probs.size());
    const double lo = margin == MarginMode::clamp ? 1.0 / n : 0.0;
    const double hi = margin == MarginMode::clamp ? 1.0 - 1.0 / n : 1.0;
    for (double& p : probs)
        p = std::clamp(p, lo, hi);
}

inline bool frequencies_converged(const std::vector<double>& probs) {
    return std::all_of(probs.begin(), probs.end(),
                       [](double p) { return p == 0.0 || p == 1.0; });
}

} // namespace detail

// Exact per-position one-frequencies of a set of strings (count / size).
inline std::vector<double> fit_frequency_vector(const std::vector<Bitstring>& strings) {
    if (strings.empty())
        throw std::invalid_argument("fit_frequency_vector: empty selection");
    std::vector<double> probs(strings.front().size(), 0.0);
    for (const Bitstring& s : strings)
        for (std::size_t i = 0; i < probs.size(); ++i)
            probs[i] += s[i];
    for (double& p : probs)
        p /= static_cast<double>(strings.size());
    return probs;
}

// PBIL update: probs <- (1-rho) probs + rho * frequencies(selected).
// rho = 1 degenerates to the UMDA refit.
inline void pbil_update(std::vector<double>& probs, const std::vector<double>& freq, double rho) {
    if (!(rho > 0.0 && rho <= 1.0))
        throw std::invalid_argument("pbil_update: rho must lie in (0,1]");
    for (std::size_t i = 0; i < probs.size(); ++i)
        probs[i] = (1.0 - rho) * probs[i] + rho * freq[i];
}

// cGA step: every position where the two samples differ moves 1/K toward the
// winner's bit; agreeing positions are untouched.
inline void cga_step_update(std::vector<double>& freq, const Bitstring& a, const Bitstring& b,
                            const Bitstring& winner, double step) {
    for (std::size_t i = 0; i < freq.size(); ++i)
        if (a[i] != b[i])
            freq[i] += winner[i] ? step : -step;
}

// ---------------------------------------------------------------------------
// Algorithms. All respect the evaluation budget exactly: a final partial
// generation still evaluates (and the observer still sees) as many offspring
// as the remaining budget allows, but triggers no further model update.
// ---------------------------------------------------------------------------

// Randomised hill-climber. Each iteration mutates at rate 1/n (configurable),
// freshly evaluates offspring then parent (2 ticks), and keeps the offspring
// unless it scores strictly worse.
template <typename Task, typename Rng>
RunResult run_one_plus_one_ea(Task& task, const SingleObjConfig& cfg, std::uint64_t budget,
                              Rng& rng, const RunGuard& guard = {}) {
    if (budget < 1)
        throw std::invalid_argument("run_one_plus_one_ea: budget must be positive");
    RunResult result;
    Bitstring x = random_bitstring(task.dimension(), rng);
    const double rate =
        cfg.mutation_rate > 0.0 ? cfg.mutation_rate : 1.0 / static_cast<double>(task.dimension());

    while (task.evaluations() < budget && !task.optimum_found()) {
        if (result.generations % 128 == 0 && guard.expired()) {
            result.timed_out = true;
            break;
        }
        const Bitstring y = bitwise_mutate(x, rate, rng);
        const auto score_y = task.evaluate(y);
        if (task.optimum_found() || task.evaluations() >= budget) {
            ++result.generations;
            break;
        }
        const auto score_x = task.evaluate(x);
        if (task.at_least_as_good(score_y, score_x))
            x = y;
        ++result.generations;
        if (result.generations % 100 == 0)
            detail::checkpoint(result, task);
    }
    detail::finish_run(result, task);
    return result;
}

// Non-elitist generational EA: each offspring is bred by a binary tournament
// on the stored noisy scores of the current population, then bit-flip
// mutation. The whole population is replaced every generation.
template <typename Task, typename Rng>
RunResult run_mutation_population(Task& task, const SingleObjConfig& cfg, std::uint64_t budget,
                                  Rng& rng, const RunGuard& guard = {}) {
    const std::size_t lambda = cfg.lambda;
    if (lambda < 2)
        throw std::invalid_argument("run_mutation_population: lambda must be >= 2");
    if (budget < lambda)
        throw std::invalid_argument("run_mutation_population: budget below one generation");
    RunResult result;
    using Score = typename Task::Score;

    std::vector<Bitstring> pop;
    std::vector<Score> scores;
    pop.reserve(lambda);
    scores.reserve(lambda);
    for (std::size_t i = 0; i < lambda; ++i) {
        pop.push_back(random_bitstring(task.dimension(), rng));
        scores.push_back(task.evaluate(pop.back()));
        if (task.optimum_found())
            break;
    }
    ++result.generations;
    detail::checkpoint(result, task);

    std::vector<Bitstring> next;
    std::vector<Score> next_scores;
    while (task.evaluations() < budget && !task.optimum_found()) {
        if (guard.expired()) {
            result.timed_out = true;
            break;
        }
        next.clear();
        next_scores.clear();
        bool partial = false;
        for (std::size_t i = 0; i < lambda; ++i) {
            if (task.evaluations() >= budget) {
                partial = true;
                break;
            }
            const std::size_t a = rng.next_below(lambda);
            const std::size_t b = rng.next_below(lambda);
            const std::size_t winner = task.better(scores[b], scores[a]) ? b : a;
            next.push_back(bitwise_mutate(pop[winner], cfg.mutation_rate, rng));
            next_scores.push_back(task.evaluate(next.back()));
            if (task.optimum_found()) {
                partial = true;
                break;
            }
        }
        ++result.generations;
        if (partial)
            break;
        pop.swap(next);
        scores.swap(next_scores);
        detail::checkpoint(result, task);
    }
    detail::finish_run(result, task);
    return result;
}

// Compact GA: two samples from the frequency vector per step, each frequency
// at a differing position moves 1/K toward the winner's bit.
template <typename Task, typename Rng>
RunResult run_cga(Task& task, const SingleObjConfig& cfg, std::uint64_t budget, Rng& rng,
                  const RunGuard& guard = {}) {
    if (cfg.cga_step < 1.0)
        throw std::invalid_argument("run_cga: K must be >= 1");
    RunResult result;
    const std::size_t n = task.dimension();
    std::vector<double> freq(n, 0.5);
    const double step = 1.0 / cfg.cga_step;

    while (task.evaluations() < budget && !task.optimum_found()) {
        if (result.generations % 128 == 0 && guard.expired()) {
            result.timed_out = true;
            break;
        }
        const Bitstring a = detail::sample_bitstring(freq, rng);
        const auto score_a = task.evaluate(a);
        if (task.optimum_found() || task.evaluations() >= budget) {
            ++result.generations;
            break;
        }
        const Bitstring b = detail::sample_bitstring(freq, rng);
        const auto score_b = task.evaluate(b);
        const bool b_wins = task.better(score_b, score_a);
        cga_step_update(freq, a, b, b_wins ? b : a, step);
        detail::apply_margins(freq, cfg.margin);
        ++result.generations;
        if (result.generations % 100 == 0)
            detail::checkpoint(result, task);
        if (cfg.margin == MarginMode::off && detail::frequencies_converged(freq)) {
            result.converged = true;
            break;
        }
    }
    detail::finish_run(result, task);
    return result;
}

namespace detail {

// Indices of the population ordered best-first by noisy score (stable).
template <typename Task, typename Score>
std::vector<std::size_t> rank_by_score(const Task& task, const std::vector<Score>& scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return task.better(scores[a], scores[b]);
    });
    return order;
}

// Shared generational loop of the two model-building EDAs; Update refits the
// frequency vector from the selected individuals.
template <typename Task, typename Rng, typename Update>
RunResult run_eda(Task& task, const SingleObjConfig& cfg, std::uint64_t budget, Rng& rng,
                  const RunGuard& guard, Update&& update) {
    const std::size_t lambda = cfg.lambda;
    const std::size_t mu = cfg.mu;
    if (lambda < 2 || lambda % 2 != 0)
        throw std::invalid_argument("run_eda: lambda must be even and >= 2");
    if (mu < 1 || mu > lambda)
        throw std::invalid_argument("run_eda: mu must lie in [1, lambda]");
    RunResult result;
    using Score = typename Task::Score;
    const std::size_t n = task.dimension();
    std::vector<double> probs(n, 0.5);

    std::vector<Bitstring> pop;
    std::vector<Score> scores;
    std::vector<Bitstring> selected;
    while (task.evaluations() < budget && !task.optimum_found()) {
        if (guard.expired()) {
            result.timed_out = true;
            break;
        }
        pop.clear();
        scores.clear();
        bool partial = false;
        for (std::size_t i = 0; i < lambda; ++i) {
            if (task.evaluations() >= budget) {
                partial = true;
                break;
            }
            pop.push_back(detail::sample_bitstring(probs, rng));
            scores.push_back(task.evaluate(pop.back()));
            if (task.optimum_found()) {
                partial = true;
                break;
            }
        }
        ++result.generations;
        if (partial)
            break;

        const std::vector<std::size_t> order = rank_by_score(task, scores);
        selected.clear();
        for (std::size_t i = 0; i < mu; ++i)
            selected.push_back(pop[order[i]]);
        update(probs, selected);
        detail::apply_margins(probs, cfg.margin);
        detail::checkpoint(result, task);
        if (cfg.margin == MarginMode::off && detail::frequencies_converged(probs)) {
            result.converged = true;
            break;
        }
    }
    detail::finish_run(result, task);
    return result;
}

} // namespace detail

// PBIL: learning-rate blend toward the frequencies of the best mu samples.
template <typename Task, typename Rng>
RunResult run_pbil(Task& task, const SingleObjConfig& cfg, std::uint64_t budget, Rng& rng,
                   const RunGuard& guard = {}) {
    return detail::run_eda(task, cfg, budget, rng, guard,
                           [&](std::vector<double>& probs, const std::vector<Bitstring>& sel) {
                               pbil_update(probs, fit_frequency_vector(sel), cfg.pbil_rate);
                           });
}

// UMDA: truncation selection, then the frequency vector is set to the exact
// bit frequencies of the best mu samples.
template <typename Task, typename Rng>
RunResult run_umda(Task& task, const SingleObjConfig& cfg, std::uint64_t budget, Rng& rng,
                   const RunGuard& guard = {}) {
    return detail::run_eda(task, cfg, budget, rng, guard,
                           [](std::vector<double>& probs, const std::vector<Bitstring>& sel) {
                               probs = fit_frequency_vector(sel);
                           });
}

// Paired-Crossover EA: the population is randomly paired; each pair runs
// uniform crossover twice and each child pair holds a noisy tournament,
// keeping the population size constant (4 evaluations, 2 survivors per pair).
template <typename Task, typename Rng>
RunResult run_pcea(Task& task, const SingleObjConfig& cfg, std::uint64_t budget, Rng& rng,
                   const RunGuard& guard = {}) {
    const std::size_t pop_size = cfg.lambda;
    if (pop_size < 2 || pop_size % 2 != 0)
        throw std::invalid_argument("run_pcea: population size must be even and >= 2");
    RunResult result;
    const std::size_t n = task.dimension();

    std::vector<Bitstring> pop;
    pop.reserve(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i)
        pop.push_back(random_bitstring(n, rng));

    std::vector<std::size_t> order(pop_size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<Bitstring> next;
    next.reserve(pop_size);

    while (task.evaluations() < budget && !task.optimum_found()) {
        if (guard.expired()) {
            result.timed_out = true;
            break;
        }
        if (std::all_of(pop.begin(), pop.end(), [&](const Bitstring& s) { return s == pop[0]; })) {
            result.converged = true;
            break;
        }
        // random pairing via Fisher-Yates
        for (std::size_t i = pop_size - 1; i > 0; --i)
            std::swap(order[i], order[rng.next_below(i + 1)]);

        next.clear();
        bool partial = false;
        for (std::size_t p = 0; p + 1 < pop_size && !partial; p += 2) {
            const Bitstring& u = pop[order[p]];
            const Bitstring& v = pop[order[p + 1]];
            for (int event = 0; event < 2 && !partial; ++event) {
                auto [c1, c2] = uniform_crossover_pair(u, v, rng);
                if (task.evaluations() >= budget) {
                    partial = true;
                    break;
                }
                const auto s1 = task.evaluate(c1);
                if (task.optimum_found() || task.evaluations() >= budget) {
                    partial = true;
                    break;
                }
                const auto s2 = task.evaluate(c2);
                if (task.optimum_found())
                    partial = true;
                next.push_back(task.better(s2, s1) ? std::move(c2) : std::move(c1));
            }
        }
        ++result.generations;
        if (partial)
            break;
        pop.swap(next);
        detail::checkpoint(result, task);
    }
    detail::finish_run(result, task);
    return result;
}

template <typename Task, typename Rng>
RunResult run_single_objective(Task& task, const SingleObjConfig& cfg, std::uint64_t budget,
                               Rng& rng, const RunGuard& guard = {}) {
    switch (cfg.algorithm) {
    case SingleObjAlgorithm::one_plus_one_ea:
        return run_one_plus_one_ea(task, cfg, budget, rng, guard);
    case SingleObjAlgorithm::mutation_population:
        return run_mutation_population(task, cfg, budget, rng, guard);
    case SingleObjAlgorithm::cga:
        return run_cga(task, cfg, budget, rng, guard);
    case SingleObjAlgorithm::pbil:
        return run_pbil(task, cfg, budget, rng, guard);
    case SingleObjAlgorithm::umda:
        return run_umda(task, cfg, budget, rng, guard);
    case SingleObjAlgorithm::pcea:
        return run_pcea(task, cfg, budget, rng, guard);
    }
    throw std::invalid_argument("run_single_objective: unknown algorithm");
}

} // namespace noisyopt
