#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "noisyopt/bitstring.hpp"
#include "noisyopt/clustering.hpp"
#include "noisyopt/dominance.hpp"
#include "noisyopt/hypervolume.hpp"
#include "noisyopt/single_objective.hpp"

namespace noisyopt {

enum class MoAlgorithm { semo, nsga2, moumda };

enum class MoUmdaVariant { plain, no_duplicates, kmeans, hac, archive, hco };

inline const char* to_string(MoUmdaVariant v) {
    switch (v) {
    case MoUmdaVariant::plain: return "moumda";
    case MoUmdaVariant::no_duplicates: return "moumda-nodup";
    case MoUmdaVariant::kmeans: return "moumda-kmeans";
    case MoUmdaVariant::hac: return "moumda-hac";
    case MoUmdaVariant::archive: return "moumda-archive";
    case MoUmdaVariant::hco: return "moumda-hco";
    }
    return "?";
}

struct MoConfig {
    std::size_t lambda = 0;           // generation size (moUMDA), parent size (NSGA-II)
    std::size_t mu = 0;               // selected size, lambda/2
    double crossover_prob = 0.9;      // NSGA-II
    double mutation_rate = 0.0;       // NSGA-II; 0 means 1/n
    std::size_t nodup_retries = 100;  // per-slot resampling cap
    MoUmdaVariant variant = MoUmdaVariant::plain;
};

// moUMDA: lambda = 20 sqrt(n) ln n, mu = lambda/2
inline MoConfig default_moumda_config(std::size_t n, MoUmdaVariant variant) {
    MoConfig cfg;
    cfg.lambda = round_up_even(20.0 * std::sqrt(static_cast<double>(n)) *
                               std::log(static_cast<double>(n)));
    cfg.mu = cfg.lambda / 2;
    cfg.variant = variant;
    return cfg;
}

// NSGA-II: parent population 10 sqrt(n) ln n
inline MoConfig default_nsga2_config(std::size_t n) {
    MoConfig cfg;
    cfg.lambda = round_up_even(10.0 * std::sqrt(static_cast<double>(n)) *
                               std::log(static_cast<double>(n)));
    cfg.mu = cfg.lambda / 2;
    return cfg;
}

struct MoRunResult {
    double best_hypervolume = 0.0;
    std::optional<double> best_feasible_cost;
    std::uint64_t evals_to_best = 0;
    std::uint64_t evals_used = 0;
    std::uint64_t generations = 0;
    std::size_t final_population = 0;
    bool timed_out = false;
    std::vector<TracePoint> trace;                   // (evals, best-so-far population hypervolume)
    std::vector<BiObjectiveValue> final_true_values; // noiseless objectives of the last population
};

// Winner of an hco tournament between two noisy objective vectors: dominance
// decides outright; otherwise the string whose addition gives the population
// built so far the better hypervolume wins (first wins exact ties). With an
// empty population this reduces to comparing single-point volumes against the
// reference. hv_consulted reports whether the tie-break was needed.
inline bool hco_prefers_first(const BiObjectiveValue& a, const BiObjectiveValue& b,
                              std::span<const BiObjectiveValue> population,
                              const DominanceRelation& dom, const HypervolumeConfig& hv_cfg,
                              bool* hv_consulted = nullptr) {
    if (hv_consulted)
        *hv_consulted = false;
    if (dom.dominates(a, b))
        return true;
    if (dom.dominates(b, a))
        return false;
    if (hv_consulted)
        *hv_consulted = true;
    std::vector<BiObjectiveValue> pool(population.begin(), population.end());
    pool.push_back(a);
    const double hv_a = hypervolume_2d(pool, hv_cfg);
    pool.back() = b;
    const double hv_b = hypervolume_2d(pool, hv_cfg);
    return hv_a >= hv_b;
}

// Per-cluster frequency vectors with sampling quotas; the state of the
// clustering moUMDA variants.
struct ClusteredModel {
    std::vector<std::vector<double>> frequencies;
    std::vector<std::size_t> quotas;

    static ClusteredModel initial(std::size_t k, std::size_t n, std::size_t mu) {
        if (k == 0 || k > mu)
            throw std::invalid_argument("ClusteredModel: need 1 <= k <= mu");
        ClusteredModel m;
        m.frequencies.assign(k, std::vector<double>(n, 0.5));
        m.quotas.assign(k, mu / k);
        for (std::size_t i = 0; i < mu % k; ++i)
            ++m.quotas[i];
        return m;
    }

    std::size_t cluster_count() const { return frequencies.size(); }

    // Re-cluster the selected individuals in objective space and refit one
    // frequency vector per cluster; quotas become the cluster sizes. Empty
    // clusters keep their previous vector and get quota zero.
    template <UniformRng Rng>
    void refit(const std::vector<Bitstring>& selected,
               const std::vector<BiObjectiveValue>& values, bool use_kmeans, Rng& rng) {
        if (selected.empty() || selected.size() != values.size())
            throw std::invalid_argument("ClusteredModel::refit: bad selection");
        std::vector<Point2> points(values.size());
        for (std::size_t i = 0; i < values.size(); ++i)
            points[i] = {values[i].f1, values[i].f2};
        const std::size_t k_eff = std::min(cluster_count(), points.size());
        const std::vector<std::size_t> labels = use_kmeans
                                                    ? kmeans_clusters(points, k_eff, rng)
                                                    : single_linkage_clusters(points, k_eff);
        std::vector<std::vector<Bitstring>> groups(cluster_count());
        for (std::size_t i = 0; i < selected.size(); ++i)
            groups[labels[i]].push_back(selected[i]);
        for (std::size_t c = 0; c < cluster_count(); ++c) {
            quotas[c] = groups[c].size();
            if (!groups[c].empty())
                frequencies[c] = fit_frequency_vector(groups[c]);
        }
    }
};

namespace detail {

// Ranks and crowding of a pool of objective vectors, as NSGA-II uses them.
struct RankedPool {
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> rank;     // front index per point
    std::vector<double> crowding;      // within-front crowding distance
};

inline RankedPool rank_pool(std::span<const BiObjectiveValue> values,
                            const DominanceRelation& dom) {
    RankedPool pool;
    pool.fronts = non_dominated_sort(values, dom);
    pool.rank.assign(values.size(), 0);
    pool.crowding.assign(values.size(), 0.0);
    std::vector<BiObjectiveValue> members;
    for (std::size_t f = 0; f < pool.fronts.size(); ++f) {
        members.clear();
        for (std::size_t idx : pool.fronts[f]) {
            pool.rank[idx] = f;
            members.push_back(values[idx]);
        }
        const std::vector<double> cd = crowding_distance(members);
        for (std::size_t k = 0; k < pool.fronts[f].size(); ++k)
            pool.crowding[pool.fronts[f][k]] = cd[k];
    }
    return pool;
}

// best mu indices by (front rank, crowding distance), deterministic ties
inline std::vector<std::size_t> select_by_rank_crowding(const RankedPool& pool, std::size_t mu) {
    std::vector<std::size_t> chosen;
    chosen.reserve(mu);
    for (const auto& front : pool.fronts) {
        if (chosen.size() >= mu)
            break;
        if (chosen.size() + front.size() <= mu) {
            chosen.insert(chosen.end(), front.begin(), front.end());
        } else {
            std::vector<std::size_t> rest = front;
            std::sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
                if (pool.crowding[a] != pool.crowding[b])
                    return pool.crowding[a] > pool.crowding[b];
                return a < b;
            });
            rest.resize(mu - chosen.size());
            chosen.insert(chosen.end(), rest.begin(), rest.end());
        }
    }
    return chosen;
}

template <typename Task>
HypervolumeConfig hv_config(const Task& task) {
    return {task.reference(), task.sense1(), task.sense2()};
}

// population hypervolume under the noiseless observer
template <typename Task>
double population_hypervolume(const Task& task, const std::vector<Bitstring>& pop) {
    std::vector<BiObjectiveValue> values;
    values.reserve(pop.size());
    for (const Bitstring& x : pop)
        values.push_back(task.true_objectives(x));
    return hypervolume_2d(values, hv_config(task));
}

template <typename Task>
void mo_checkpoint(MoRunResult& r, const Task& task, const std::vector<Bitstring>& pop) {
    const double hv = population_hypervolume(task, pop);
    r.best_hypervolume = std::max(r.best_hypervolume, hv);
    r.trace.push_back({task.evaluations(), r.best_hypervolume});
}

template <typename Task>
void mo_finish(MoRunResult& r, const Task& task, const std::vector<Bitstring>& population) {
    r.best_feasible_cost = task.best_feasible_cost();
    r.evals_to_best = task.evals_to_best();
    r.evals_used = task.evaluations();
    r.final_population = population.size();
    r.final_true_values.clear();
    r.final_true_values.reserve(population.size());
    for (const Bitstring& x : population)
        r.final_true_values.push_back(task.true_objectives(x));
}

} // namespace detail

// SEMO: one-bit-mutation hill climber over an archive of non-dominated
// solutions. The challenger's fresh noisy objectives are compared against the
// stored values of the archive members.
template <typename Task, typename Rng>
MoRunResult run_semo(Task& task, std::uint64_t budget, Rng& rng, const RunGuard& guard = {}) {
    if (budget < 1)
        throw std::invalid_argument("run_semo: budget must be positive");
    MoRunResult result;
    const DominanceRelation dom{task.sense1(), task.sense2()};
    ParetoArchive archive(dom);

    const Bitstring x0 = random_bitstring(task.dimension(), rng);
    archive.try_insert(x0, task.evaluate(x0));

    std::vector<Bitstring> pop;
    const auto snapshot = [&] {
        pop.clear();
        for (const auto& e : archive.entries())
            pop.push_back(e.solution);
        detail::mo_checkpoint(result, task, pop);
    };
    snapshot();

    std::uint64_t iter = 0;
    while (task.evaluations() < budget) {
        if (iter % 128 == 0 && guard.expired()) {
            result.timed_out = true;
            break;
        }
        const auto& entries = archive.entries();
        const Bitstring& parent = entries[rng.next_below(entries.size())].solution;
        Bitstring y = one_bit_mutate(parent, rng);
        const BiObjectiveValue v = task.evaluate(y);
        archive.try_insert(std::move(y), v);
        ++iter;
        if (iter % 100 == 0 || task.evaluations() >= budget)
            snapshot();
    }
    result.generations = iter;
    pop.clear();
    for (const auto& e : archive.entries())
        pop.push_back(e.solution);
    detail::mo_finish(result, task, pop);
    return result;
}

// NSGA-II with binary strings: binary tournaments on (rank, crowding),
// uniform crossover and 1/n bit-flip mutation; parents and offspring compete
// for the best half. Parents keep the noisy objective values they were first
// evaluated with; only offspring cost budget.
template <typename Task, typename Rng>
MoRunResult run_nsga2(Task& task, const MoConfig& cfg, std::uint64_t budget, Rng& rng,
                      const RunGuard& guard = {}) {
    const std::size_t parents = cfg.lambda;
    if (parents < 2 || parents % 2 != 0)
        throw std::invalid_argument("run_nsga2: parent size must be even and >= 2");
    MoRunResult result;
    const std::size_t n = task.dimension();
    const double mutation_rate =
        cfg.mutation_rate > 0.0 ? cfg.mutation_rate : 1.0 / static_cast<double>(n);
    const DominanceRelation dom{task.sense1(), task.sense2()};

    std::vector<Bitstring> pop;
    std::vector<BiObjectiveValue> values;
    pop.reserve(2 * parents);
    values.reserve(2 * parents);
    for (std::size_t i = 0; i < parents && task.evaluations() < budget; ++i) {
        pop.push_back(random_bitstring(n, rng));
        values.push_back(task.evaluate(pop.back()));
    }
    ++result.generations;
    detail::RankedPool ranked = detail::rank_pool(values, dom);
    detail::mo_checkpoint(result, task, pop);

    const auto tournament = [&](std::size_t bound) -> std::size_t {
        const std::size_t a = rng.next_below(bound);
        const std::size_t b = rng.next_below(bound);
        if (ranked.rank[a] != ranked.rank[b])
            return ranked.rank[a] < ranked.rank[b] ? a : b;
        return ranked.crowding[b] > ranked.crowding[a] ? b : a;
    };

    while (task.evaluations() < budget) {
        if (guard.expired()) {
            result.timed_out = true;
            break;
        }
        const std::size_t parent_count = pop.size();
        bool partial = false;
        while (pop.size() < 2 * parent_count && !partial) {
            const Bitstring& a = pop[tournament(parent_count)];
            const Bitstring& b = pop[tournament(parent_count)];
            Bitstring c1 = a, c2 = b;
            if (rng.next_bernoulli(cfg.crossover_prob))
                std::tie(c1, c2) = uniform_crossover_pair(a, b, rng);
            c1 = bitwise_mutate(c1, mutation_rate, rng);
            c2 = bitwise_mutate(c2, mutation_rate, rng);
            for (auto* child : {&c1, &c2}) {
                if (task.evaluations() >= budget) {
                    partial = true;
                    break;
                }
                values.push_back(task.evaluate(*child));
                pop.push_back(std::move(*child));
            }
        }
        ++result.generations;
        if (partial)
            break;

        detail::RankedPool combined = detail::rank_pool(values, dom);
        const std::vector<std::size_t> keep =
            detail::select_by_rank_crowding(combined, parent_count);
        std::vector<Bitstring> next_pop;
        std::vector<BiObjectiveValue> next_values;
        next_pop.reserve(2 * parent_count);
        next_values.reserve(2 * parent_count);
        detail::RankedPool next_ranked;
        next_ranked.rank.reserve(keep.size());
        next_ranked.crowding.reserve(keep.size());
        for (std::size_t idx : keep) {
            next_pop.push_back(std::move(pop[idx]));
            next_values.push_back(values[idx]);
            next_ranked.rank.push_back(combined.rank[idx]);
            next_ranked.crowding.push_back(combined.crowding[idx]);
        }
        pop = std::move(next_pop);
        values = std::move(next_values);
        ranked = std::move(next_ranked);
        detail::mo_checkpoint(result, task, pop);
    }
    if (pop.size() > parents)
        pop.erase(pop.begin() + static_cast<std::ptrdiff_t>(parents), pop.end());
    detail::mo_finish(result, task, pop);
    return result;
}

namespace detail {

// one generation's sample for a moUMDA variant, duplicate-aware if asked
template <typename Rng>
void generate_population(std::vector<Bitstring>& out, const std::vector<double>& probs,
                         std::size_t count, bool no_duplicates, std::size_t retry_cap,
                         Rng& rng) {
    std::unordered_set<Bitstring, BitstringHash> seen;
    if (no_duplicates)
        for (const Bitstring& s : out)
            seen.insert(s);
    for (std::size_t i = 0; i < count; ++i) {
        Bitstring s = sample_bitstring(probs, rng);
        if (no_duplicates) {
            std::size_t attempts = 0;
            while (seen.contains(s) && attempts < retry_cap) {
                s = sample_bitstring(probs, rng);
                ++attempts;
            }
            seen.insert(s); // after the cap a duplicate is admitted
        }
        out.push_back(std::move(s));
    }
}

} // namespace detail

// The moUMDA family: sample from per-bit frequencies, select by non-dominated
// sorting and crowding over the sample pooled with the previous selected set
// (environmental selection implemented identically to NSGA-II), refit the
// model from the survivors. Variants alter the sampling (no duplicates,
// hypervolume pair tournaments), the model (per-cluster vectors), or the
// refit source (Pareto archive).
template <typename Task, typename Rng>
MoRunResult run_moumda(Task& task, const MoConfig& cfg, std::uint64_t budget, Rng& rng,
                       const RunGuard& guard = {}) {
    const std::size_t lambda = cfg.lambda;
    const std::size_t mu = cfg.mu;
    if (lambda < 2 || mu < 1 || mu > lambda)
        throw std::invalid_argument("run_moumda: need lambda >= 2 and 1 <= mu <= lambda");
    MoRunResult result;
    const std::size_t n = task.dimension();
    const DominanceRelation dom{task.sense1(), task.sense2()};
    const HypervolumeConfig hv_cfg = detail::hv_config(task);
    const double margin_threshold =
        std::sqrt(static_cast<double>(n)) * std::log(static_cast<double>(n));

    const bool clustered =
        cfg.variant == MoUmdaVariant::kmeans || cfg.variant == MoUmdaVariant::hac;
    const std::size_t k = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(mu)))));

    std::vector<double> model(n, 0.5);
    ClusteredModel cmodel = clustered ? ClusteredModel::initial(k, n, mu) : ClusteredModel{};
    ParetoArchive archive(dom);

    // selected set carried across generations; members keep the noisy values
    // they entered the pool with
    std::vector<Bitstring> selected;
    std::vector<BiObjectiveValue> selected_values;

    std::vector<Bitstring> pool;
    std::vector<BiObjectiveValue> pool_values;
    std::vector<ParetoArchive::Entry> batch;

    while (task.evaluations() < budget) {
        if (guard.expired()) {
            result.timed_out = true;
            break;
        }
        // the archive variant's persistence lives in the archive itself; the
        // others pool the previous selected set with the fresh sample
        if (cfg.variant == MoUmdaVariant::archive) {
            pool.clear();
            pool_values.clear();
        } else {
            pool = selected;
            pool_values = selected_values;
        }
        bool partial = false;

        if (cfg.variant == MoUmdaVariant::hco) {
            // paired sampling; dominance decides a pair, otherwise the
            // candidate adding more hypervolume to the current pool
            for (std::size_t t = 0; t < mu && !partial; ++t) {
                if (task.evaluations() >= budget) {
                    partial = true;
                    break;
                }
                Bitstring x = detail::sample_bitstring(model, rng);
                const BiObjectiveValue vx = task.evaluate(x);
                if (task.evaluations() >= budget) {
                    partial = true;
                    break;
                }
                Bitstring y = detail::sample_bitstring(model, rng);
                const BiObjectiveValue vy = task.evaluate(y);
                const bool x_wins = hco_prefers_first(vx, vy, pool_values, dom, hv_cfg);
                pool.push_back(x_wins ? std::move(x) : std::move(y));
                pool_values.push_back(x_wins ? vx : vy);
            }
        } else if (clustered) {
            for (std::size_t c = 0; c < k && !partial; ++c) {
                const std::size_t want = 2 * cmodel.quotas[c];
                for (std::size_t i = 0; i < want; ++i) {
                    if (task.evaluations() >= budget) {
                        partial = true;
                        break;
                    }
                    pool.push_back(detail::sample_bitstring(cmodel.frequencies[c], rng));
                    pool_values.push_back(task.evaluate(pool.back()));
                }
            }
        } else {
            std::vector<Bitstring> generation;
            detail::generate_population(generation, model, lambda,
                                        cfg.variant == MoUmdaVariant::no_duplicates,
                                        cfg.nodup_retries, rng);
            for (Bitstring& s : generation) {
                if (task.evaluations() >= budget) {
                    partial = true;
                    break;
                }
                pool.push_back(std::move(s));
                pool_values.push_back(task.evaluate(pool.back()));
            }
        }
        ++result.generations;
        if (partial)
            break;

        const detail::RankedPool ranked = detail::rank_pool(pool_values, dom);
        const std::vector<std::size_t> keep = detail::select_by_rank_crowding(ranked, mu);
        std::vector<Bitstring> next;
        std::vector<BiObjectiveValue> next_values;
        next.reserve(mu);
        next_values.reserve(mu);
        for (std::size_t idx : keep) {
            next.push_back(std::move(pool[idx]));
            next_values.push_back(pool_values[idx]);
        }
        selected = std::move(next);
        selected_values = std::move(next_values);

        if (cfg.variant == MoUmdaVariant::archive) {
            batch.clear();
            for (std::size_t i = 0; i < selected.size(); ++i)
                batch.push_back({selected[i], selected_values[i]});
            archive.merge(batch);
            std::vector<Bitstring> members;
            members.reserve(archive.size());
            for (const auto& e : archive.entries())
                members.push_back(e.solution);
            model = fit_frequency_vector(members);
            if (static_cast<double>(members.size()) < margin_threshold)
                detail::apply_margins(model, MarginMode::clamp);
            // the archive is this variant's population, as in the hill climber
            detail::mo_checkpoint(result, task, members);
        } else if (clustered) {
            cmodel.refit(selected, selected_values, cfg.variant == MoUmdaVariant::kmeans, rng);
            detail::mo_checkpoint(result, task, selected);
        } else {
            model = fit_frequency_vector(selected);
            detail::mo_checkpoint(result, task, selected);
        }
    }
    if (cfg.variant == MoUmdaVariant::archive) {
        std::vector<Bitstring> members;
        members.reserve(archive.size());
        for (const auto& e : archive.entries())
            members.push_back(e.solution);
        detail::mo_finish(result, task, members);
    } else {
        detail::mo_finish(result, task, selected);
    }
    return result;
}

} // namespace noisyopt
