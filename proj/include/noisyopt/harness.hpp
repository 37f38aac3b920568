#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <variant>
#include <vector>

#include "noisyopt/csv.hpp"
#include "noisyopt/instance_io.hpp"
#include "noisyopt/multi_objective.hpp"
#include "noisyopt/single_objective.hpp"
#include "noisyopt/stats.hpp"
#include "noisyopt/tasks.hpp"

namespace noisyopt {

enum class ProblemFamily {
    onemax,
    linear,
    subsetsum,
    knapsack_v1,
    knapsack_v2,
    setcover_constrained,
    setcover_penalty,
    cocz,
    mo_setcover
};

inline const char* to_string(ProblemFamily f) {
    switch (f) {
    case ProblemFamily::onemax: return "onemax";
    case ProblemFamily::linear: return "linear";
    case ProblemFamily::subsetsum: return "subsetsum";
    case ProblemFamily::knapsack_v1: return "knapsack-v1";
    case ProblemFamily::knapsack_v2: return "knapsack-v2";
    case ProblemFamily::setcover_constrained: return "setcover-constrained";
    case ProblemFamily::setcover_penalty: return "setcover-penalty";
    case ProblemFamily::cocz: return "cocz";
    case ProblemFamily::mo_setcover: return "mo-setcover";
    }
    return "?";
}

inline ProblemFamily problem_family_from(const std::string& s) {
    static const std::map<std::string, ProblemFamily> names{
        {"onemax", ProblemFamily::onemax},
        {"linear", ProblemFamily::linear},
        {"subsetsum", ProblemFamily::subsetsum},
        {"knapsack-v1", ProblemFamily::knapsack_v1},
        {"knapsack-v2", ProblemFamily::knapsack_v2},
        {"setcover-constrained", ProblemFamily::setcover_constrained},
        {"setcover-penalty", ProblemFamily::setcover_penalty},
        {"cocz", ProblemFamily::cocz},
        {"mo-setcover", ProblemFamily::mo_setcover}};
    const auto it = names.find(s);
    if (it == names.end())
        throw std::invalid_argument("unknown problem family: " + s);
    return it->second;
}

// Interpretation of the sigma list: absolute values, or per-instance
// multiples of sqrt(n), mean weight, or sqrt of the weight sum.
enum class SigmaMode { absolute, sqrt_n, mean_weight, sqrt_sum_weight };

inline const char* to_string(SigmaMode m) {
    switch (m) {
    case SigmaMode::absolute: return "absolute";
    case SigmaMode::sqrt_n: return "sqrt-n";
    case SigmaMode::mean_weight: return "mean-weight";
    case SigmaMode::sqrt_sum_weight: return "sqrt-sum-weight";
    }
    return "?";
}

inline SigmaMode sigma_mode_from(const std::string& s) {
    if (s == "absolute")
        return SigmaMode::absolute;
    if (s == "sqrt-n")
        return SigmaMode::sqrt_n;
    if (s == "mean-weight")
        return SigmaMode::mean_weight;
    if (s == "sqrt-sum-weight")
        return SigmaMode::sqrt_sum_weight;
    throw std::invalid_argument("unknown sigma mode: " + s);
}

enum class BudgetRule { fixed, pcea_calibrated, until_convergence };

inline const char* to_string(BudgetRule r) {
    switch (r) {
    case BudgetRule::fixed: return "fixed";
    case BudgetRule::pcea_calibrated: return "pcea-calibrated";
    case BudgetRule::until_convergence: return "until-convergence";
    }
    return "?";
}

inline BudgetRule budget_rule_from(const std::string& s) {
    if (s == "fixed")
        return BudgetRule::fixed;
    if (s == "pcea-calibrated")
        return BudgetRule::pcea_calibrated;
    if (s == "until-convergence")
        return BudgetRule::until_convergence;
    throw std::invalid_argument("unknown budget rule: " + s);
}

struct ExperimentSpec {
    std::string name = "custom";
    ProblemFamily family = ProblemFamily::onemax;
    std::vector<std::size_t> sizes;
    std::size_t elements = 100;     // m for the set cover families
    std::size_t cocz_split = 0;     // 0 means n/2
    std::size_t instances_per_size = 1;
    std::vector<double> sigmas{0.0};
    SigmaMode sigma_mode = SigmaMode::absolute;
    std::vector<std::string> algorithms;
    std::size_t replications = 1;
    BudgetRule budget_rule = BudgetRule::fixed;
    std::uint64_t budget = 0;
    std::vector<std::uint64_t> per_sigma_budgets; // overrides budget when non-empty
    std::uint64_t hard_cap = kConvergenceEvalCap;
    std::size_t calibration_reps = 100;
    double delta = 0.001;
    double penalty = 0.0; // 0 selects the n+1 default
    std::uint64_t master_seed = 1;
    std::chrono::milliseconds wall_guard{600000};
    std::size_t workers = 0; // 0 means hardware concurrency
    bool margin_clamp = false;
    bool record_traces = false;
};

struct ExperimentResults {
    std::vector<ResultRow> rows;
    std::vector<ResultRow> traces;
    std::vector<std::pair<std::string, StoredInstance>> instances; // (stem, instance)
};

namespace detail {

inline bool is_mo_family(ProblemFamily f) {
    return f == ProblemFamily::cocz || f == ProblemFamily::mo_setcover;
}

inline bool is_single_algorithm(const std::string& name) {
    return name == "one-plus-one-ea" || name == "mutation-population" || name == "cga" ||
           name == "pbil" || name == "umda" || name == "pcea";
}

inline bool is_mo_algorithm(const std::string& name) {
    return name == "semo" || name == "nsga2" || name == "moumda" || name == "moumda-nodup" ||
           name == "moumda-kmeans" || name == "moumda-hac" || name == "moumda-archive" ||
           name == "moumda-hco";
}

inline SingleObjAlgorithm single_algorithm_from(const std::string& name) {
    if (name == "one-plus-one-ea")
        return SingleObjAlgorithm::one_plus_one_ea;
    if (name == "mutation-population")
        return SingleObjAlgorithm::mutation_population;
    if (name == "cga")
        return SingleObjAlgorithm::cga;
    if (name == "pbil")
        return SingleObjAlgorithm::pbil;
    if (name == "umda")
        return SingleObjAlgorithm::umda;
    if (name == "pcea")
        return SingleObjAlgorithm::pcea;
    throw std::invalid_argument("unknown single-objective algorithm: " + name);
}

inline MoUmdaVariant moumda_variant_from(const std::string& name) {
    if (name == "moumda")
        return MoUmdaVariant::plain;
    if (name == "moumda-nodup")
        return MoUmdaVariant::no_duplicates;
    if (name == "moumda-kmeans")
        return MoUmdaVariant::kmeans;
    if (name == "moumda-hac")
        return MoUmdaVariant::hac;
    if (name == "moumda-archive")
        return MoUmdaVariant::archive;
    if (name == "moumda-hco")
        return MoUmdaVariant::hco;
    throw std::invalid_argument("unknown moumda variant: " + name);
}

// run index components hashed into one substream id
inline std::uint64_t run_stream_id(std::size_t size_i, std::size_t inst_i, std::size_t sigma_i,
                                   std::size_t alg_i, std::size_t rep) {
    return (static_cast<std::uint64_t>(size_i) << 48) ^
           (static_cast<std::uint64_t>(inst_i) << 40) ^
           (static_cast<std::uint64_t>(sigma_i) << 32) ^
           (static_cast<std::uint64_t>(alg_i) << 24) ^ static_cast<std::uint64_t>(rep);
}

inline void parallel_for(std::size_t count, std::size_t workers,
                         const std::function<void(std::size_t)>& fn) {
    if (workers == 0)
        workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w)
        threads.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try {
                    fn(i);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto& t : threads)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace detail

// Resolve a spec-level sigma multiplier into the absolute noise level used
// for one instance.
inline double resolve_sigma(double sigma, SigmaMode mode, std::size_t n,
                            const std::vector<std::int64_t>& weights) {
    switch (mode) {
    case SigmaMode::absolute:
        return sigma;
    case SigmaMode::sqrt_n:
        return sigma * std::sqrt(static_cast<double>(n));
    case SigmaMode::mean_weight: {
        if (weights.empty())
            throw std::invalid_argument("resolve_sigma: mean-weight mode needs weights");
        double sum = 0;
        for (auto w : weights)
            sum += static_cast<double>(w);
        return sigma * (sum / static_cast<double>(weights.size()));
    }
    case SigmaMode::sqrt_sum_weight: {
        if (weights.empty())
            throw std::invalid_argument("resolve_sigma: sqrt-sum-weight mode needs weights");
        double sum = 0;
        for (auto w : weights)
            sum += static_cast<double>(w);
        return sigma * std::sqrt(sum);
    }
    }
    throw std::invalid_argument("resolve_sigma: bad mode");
}

// PCEA-to-optimum calibration: the budget every algorithm receives is twice
// the mean number of evaluations PCEA needs to first evaluate an optimal
// solution. More than 10% failures within the evaluation cap is an error.
template <typename TaskFactory>
std::uint64_t calibrate_budget(TaskFactory&& make_task, std::size_t n, std::size_t reps,
                               RngStream rng, std::uint64_t cap = kConvergenceEvalCap) {
    if (reps < 30)
        throw std::invalid_argument("calibrate_budget: need at least 30 repetitions");
    const SingleObjConfig cfg = default_single_config(SingleObjAlgorithm::pcea, n, 0.0);
    std::size_t failures = 0;
    double total = 0.0;
    std::size_t successes = 0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
        auto task = make_task(rng.substream(2 * rep));
        RngStream alg_rng = rng.substream(2 * rep + 1);
        const RunResult r = run_pcea(task, cfg, cap, alg_rng);
        if (r.optimum_found) {
            total += static_cast<double>(r.evals_to_best);
            ++successes;
        } else {
            ++failures;
        }
    }
    if (failures * 10 > reps)
        throw std::runtime_error("calibrate_budget: PCEA failed to reach the optimum in more "
                                 "than 10% of calibration runs");
    return static_cast<std::uint64_t>(std::llround(2.0 * total / static_cast<double>(successes)));
}

namespace detail {

struct PreparedInstance {
    std::string stem;
    StoredInstance stored;
    std::size_t n = 0;
};

inline std::vector<PreparedInstance> materialize_instances(const ExperimentSpec& spec) {
    std::vector<PreparedInstance> out;
    RngStream root(spec.master_seed);
    RngStream gen_root = root.substream(0xA11CE);
    for (std::size_t size_i = 0; size_i < spec.sizes.size(); ++size_i) {
        const std::size_t n = spec.sizes[size_i];
        for (std::size_t inst_i = 0; inst_i < spec.instances_per_size; ++inst_i) {
            RngStream gen = gen_root.substream(size_i).substream(inst_i);
            PreparedInstance p;
            p.n = n;
            p.stem = std::string(to_string(spec.family)) + "-n" + std::to_string(n) + "-i" +
                     std::to_string(inst_i);
            p.stored.seed = gen.key();
            switch (spec.family) {
            case ProblemFamily::onemax:
                p.stored.problem = "linear";
                p.stored.instance = onemax_instance(n);
                break;
            case ProblemFamily::linear:
                p.stored.problem = "linear";
                p.stored.instance = gen_linear_instance(n, gen);
                break;
            case ProblemFamily::subsetsum:
                p.stored.problem = "subsetsum";
                p.stored.instance = gen_subsetsum_instance(n, gen);
                break;
            case ProblemFamily::knapsack_v1:
            case ProblemFamily::knapsack_v2:
                p.stored.problem = "knapsack";
                p.stored.instance = gen_knapsack_instance(n, gen);
                break;
            case ProblemFamily::setcover_constrained:
            case ProblemFamily::setcover_penalty:
            case ProblemFamily::mo_setcover:
                p.stored.problem = "setcover";
                p.stored.instance = gen_setcover_instance(spec.elements, n, spec.delta, gen);
                break;
            case ProblemFamily::cocz:
                p.stored.problem = "cocz";
                p.stored.instance =
                    COCZInstance{n, spec.cocz_split == 0 ? n / 2 : spec.cocz_split};
                break;
            }
            out.push_back(std::move(p));
        }
    }
    return out;
}

inline const std::vector<std::int64_t>& instance_weights(const StoredInstance& st) {
    static const std::vector<std::int64_t> empty;
    if (const auto* li = std::get_if<LinearInstance>(&st.instance))
        return li->weights;
    if (const auto* ss = std::get_if<SubsetSumInstance>(&st.instance))
        return ss->weights;
    if (const auto* kp = std::get_if<KnapsackInstance>(&st.instance))
        return kp->weights;
    return empty;
}

struct RunOutput {
    ResultRow row;
    std::vector<ResultRow> traces;
};

// Execute one seeded run of one algorithm on one prepared instance.
inline RunOutput execute_run(const ExperimentSpec& spec, const PreparedInstance& inst,
                             const SetCoverIndex* index, std::size_t sigma_i, double sigma_abs,
                             const std::string& algorithm, std::uint64_t budget,
                             RngStream run_stream, const std::string& run_id) {
    RunOutput out;
    ResultRow& row = out.row;
    row.run_id = run_id;
    row.algorithm = algorithm;
    row.problem = to_string(spec.family);
    row.n = inst.n;
    row.sigma = spec.sigmas[sigma_i];
    row.seed = run_stream.key();
    row.instance = inst.stem;
    row.status = "ok";
    if (spec.family == ProblemFamily::setcover_constrained ||
        spec.family == ProblemFamily::setcover_penalty ||
        spec.family == ProblemFamily::mo_setcover)
        row.m = spec.elements;
    if (spec.family == ProblemFamily::cocz)
        row.m = spec.cocz_split == 0 ? inst.n / 2 : spec.cocz_split;

    RngStream alg_rng = run_stream.substream(0);
    const RngStream noise_rng = run_stream.substream(1);
    const RunGuard guard = RunGuard::after(spec.wall_guard);

    const auto started = std::chrono::steady_clock::now();

    const auto fill_single = [&](const RunResult& r) {
        row.evals_used = r.evals_used;
        row.evals_to_best = r.evals_to_best;
        row.best_true_fitness = r.best_true_fitness;
        row.best_feasible_cost = r.best_feasible_cost;
        if (r.timed_out)
            row.status = "timeout";
        if (spec.record_traces)
            for (const TracePoint& tp : r.trace) {
                ResultRow t = row;
                t.evals_used = tp.evals;
                t.best_true_fitness.reset();
                t.best_feasible_cost.reset();
                if (!std::isnan(tp.value))
                    t.best_true_fitness = tp.value;
                out.traces.push_back(std::move(t));
            }
    };
    const auto fill_mo = [&](const MoRunResult& r) {
        row.evals_used = r.evals_used;
        row.evals_to_best = r.evals_to_best;
        row.hypervolume = r.best_hypervolume;
        row.best_feasible_cost = r.best_feasible_cost;
        if (r.timed_out)
            row.status = "timeout";
        if (spec.record_traces)
            for (const TracePoint& tp : r.trace) {
                ResultRow t = row;
                t.evals_used = tp.evals;
                t.best_feasible_cost.reset();
                t.hypervolume = tp.value;
                out.traces.push_back(std::move(t));
            }
    };

    const auto run_single = [&](auto& task) {
        const SingleObjConfig base =
            default_single_config(single_algorithm_from(algorithm), inst.n, sigma_abs);
        SingleObjConfig cfg = base;
        if (spec.margin_clamp)
            cfg.margin = MarginMode::clamp;
        fill_single(run_single_objective(task, cfg, budget, alg_rng, guard));
    };

    switch (spec.family) {
    case ProblemFamily::onemax: {
        auto task = make_onemax_task(inst.n, sigma_abs, noise_rng);
        run_single(task);
        break;
    }
    case ProblemFamily::linear: {
        auto task = make_weighted_linear_task(std::get<LinearInstance>(inst.stored.instance),
                                              sigma_abs, noise_rng);
        run_single(task);
        break;
    }
    case ProblemFamily::subsetsum: {
        auto task = make_subsetsum_task(std::get<SubsetSumInstance>(inst.stored.instance),
                                        sigma_abs, noise_rng);
        run_single(task);
        break;
    }
    case ProblemFamily::knapsack_v1: {
        auto task = make_knapsack_v1_task(std::get<KnapsackInstance>(inst.stored.instance),
                                          sigma_abs, noise_rng);
        run_single(task);
        break;
    }
    case ProblemFamily::knapsack_v2: {
        auto task = make_knapsack_v2_task(std::get<KnapsackInstance>(inst.stored.instance),
                                          sigma_abs, noise_rng);
        run_single(task);
        break;
    }
    case ProblemFamily::setcover_constrained: {
        auto task = make_constrained_setcover_task(*index, sigma_abs, noise_rng);
        run_single(task);
        break;
    }
    case ProblemFamily::setcover_penalty: {
        const double penalty =
            spec.penalty > 0.0 ? spec.penalty : default_setcover_penalty(index->instance());
        auto task = make_penalty_setcover_task(*index, penalty, sigma_abs, noise_rng);
        run_single(task);
        break;
    }
    case ProblemFamily::cocz: {
        const COCZInstance& cz = std::get<COCZInstance>(inst.stored.instance);
        auto task = make_cocz_task(cz, sigma_abs, noise_rng);
        if (algorithm == "semo")
            fill_mo(run_semo(task, budget, alg_rng, guard));
        else if (algorithm == "nsga2")
            fill_mo(run_nsga2(task, default_nsga2_config(inst.n), budget, alg_rng, guard));
        else
            fill_mo(run_moumda(task,
                               default_moumda_config(inst.n, moumda_variant_from(algorithm)),
                               budget, alg_rng, guard));
        break;
    }
    case ProblemFamily::mo_setcover: {
        auto task = make_mo_setcover_task(*index, sigma_abs, noise_rng);
        if (algorithm == "semo")
            fill_mo(run_semo(task, budget, alg_rng, guard));
        else if (algorithm == "nsga2")
            fill_mo(run_nsga2(task, default_nsga2_config(inst.n), budget, alg_rng, guard));
        else
            fill_mo(run_moumda(task,
                               default_moumda_config(inst.n, moumda_variant_from(algorithm)),
                               budget, alg_rng, guard));
        break;
    }
    }

    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            started)
                      .count();
    return out;
}

} // namespace detail

inline void validate_spec(const ExperimentSpec& spec) {
    if (spec.replications < 1)
        throw std::invalid_argument("spec: replications must be >= 1");
    if (spec.sizes.empty())
        throw std::invalid_argument("spec: at least one problem size required");
    if (spec.instances_per_size < 1)
        throw std::invalid_argument("spec: instances_per_size must be >= 1");
    if (spec.sigmas.empty())
        throw std::invalid_argument("spec: sigma list must not be empty");
    for (double s : spec.sigmas)
        if (!(s >= 0.0))
            throw std::invalid_argument("spec: sigma values must be non-negative");
    if (spec.algorithms.empty())
        throw std::invalid_argument("spec: algorithm list must not be empty");
    if (!spec.per_sigma_budgets.empty() && spec.per_sigma_budgets.size() != spec.sigmas.size())
        throw std::invalid_argument("spec: per-sigma budget list must match the sigma list");
    if (spec.budget_rule == BudgetRule::fixed && spec.budget == 0 &&
        spec.per_sigma_budgets.empty())
        throw std::invalid_argument("spec: fixed budget rule needs a budget");
    const bool mo = detail::is_mo_family(spec.family);
    for (const auto& alg : spec.algorithms) {
        if (mo && !detail::is_mo_algorithm(alg))
            throw std::invalid_argument("spec: '" + alg +
                                        "' is not a multi-objective algorithm");
        if (!mo && !detail::is_single_algorithm(alg))
            throw std::invalid_argument("spec: '" + alg +
                                        "' is not a single-objective algorithm");
    }
}

// Execute every (instance, sigma, algorithm, replication) combination of the
// spec. Deterministic for a fixed master seed: every run derives its streams
// from the run coordinates alone, and rows come back in enumeration order
// regardless of worker scheduling.
inline ExperimentResults run_experiment(const ExperimentSpec& spec) {
    validate_spec(spec);
    ExperimentResults results;
    const std::vector<detail::PreparedInstance> instances = detail::materialize_instances(spec);
    for (const auto& p : instances)
        results.instances.push_back({p.stem, p.stored});

    // one index per set cover instance, shared read-only by all runs on it
    std::vector<std::unique_ptr<SetCoverIndex>> indices(instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i)
        if (const auto* sc = std::get_if<SetCoverInstance>(&instances[i].stored.instance))
            indices[i] = std::make_unique<SetCoverIndex>(*sc);

    struct RunPlan {
        std::size_t inst_idx, sigma_i, alg_i, rep;
        double sigma_abs;
        std::uint64_t budget;
        std::string run_id;
        RngStream stream;
    };

    RngStream root(spec.master_seed);
    RngStream run_root = root.substream(0x5EED);
    std::vector<RunPlan> plans;

    const auto plan_runs = [&](std::size_t inst_idx, std::size_t sigma_i, std::size_t alg_i,
                               std::uint64_t budget) {
        const auto& inst = instances[inst_idx];
        const std::size_t size_i = inst_idx / spec.instances_per_size;
        const std::size_t inst_i = inst_idx % spec.instances_per_size;
        const double sigma_abs = resolve_sigma(spec.sigmas[sigma_i], spec.sigma_mode, inst.n,
                                               detail::instance_weights(inst.stored));
        for (std::size_t rep = 0; rep < spec.replications; ++rep) {
            RunPlan p;
            p.inst_idx = inst_idx;
            p.sigma_i = sigma_i;
            p.alg_i = alg_i;
            p.rep = rep;
            p.sigma_abs = sigma_abs;
            p.budget = budget;
            p.run_id = spec.name + "/" + inst.stem + "/s" + std::to_string(sigma_i) + "/" +
                       spec.algorithms[alg_i] + "/r" + std::to_string(rep);
            p.stream =
                run_root.substream(detail::run_stream_id(size_i, inst_i, sigma_i, alg_i, rep));
            plans.push_back(std::move(p));
        }
    };

    if (spec.budget_rule == BudgetRule::pcea_calibrated) {
        // two-phase protocol: PCEA runs to convergence set the budget every
        // other algorithm receives on that instance and noise level
        for (std::size_t inst_idx = 0; inst_idx < instances.size(); ++inst_idx)
            for (std::size_t sigma_i = 0; sigma_i < spec.sigmas.size(); ++sigma_i)
                for (std::size_t alg_i = 0; alg_i < spec.algorithms.size(); ++alg_i)
                    if (spec.algorithms[alg_i] == "pcea")
                        plan_runs(inst_idx, sigma_i, alg_i, spec.hard_cap);
        std::vector<detail::RunOutput> pcea_outputs(plans.size());
        detail::parallel_for(plans.size(), spec.workers, [&](std::size_t i) {
            const RunPlan& p = plans[i];
            pcea_outputs[i] =
                detail::execute_run(spec, instances[p.inst_idx], indices[p.inst_idx].get(),
                                    p.sigma_i, p.sigma_abs, "pcea", p.budget, p.stream, p.run_id);
        });
        // mean PCEA evaluations per (instance, sigma)
        std::map<std::pair<std::size_t, std::size_t>, std::pair<double, std::size_t>> means;
        for (std::size_t i = 0; i < plans.size(); ++i) {
            auto& acc = means[{plans[i].inst_idx, plans[i].sigma_i}];
            acc.first += static_cast<double>(pcea_outputs[i].row.evals_used);
            acc.second += 1;
        }
        for (auto& out : pcea_outputs) {
            results.rows.push_back(std::move(out.row));
            for (auto& t : out.traces)
                results.traces.push_back(std::move(t));
        }
        plans.clear();
        for (std::size_t inst_idx = 0; inst_idx < instances.size(); ++inst_idx)
            for (std::size_t sigma_i = 0; sigma_i < spec.sigmas.size(); ++sigma_i) {
                const auto& acc = means.at({inst_idx, sigma_i});
                const auto budget = static_cast<std::uint64_t>(
                    std::llround(2.0 * acc.first / static_cast<double>(acc.second)));
                for (std::size_t alg_i = 0; alg_i < spec.algorithms.size(); ++alg_i)
                    if (spec.algorithms[alg_i] != "pcea")
                        plan_runs(inst_idx, sigma_i, alg_i, budget);
            }
    } else {
        for (std::size_t inst_idx = 0; inst_idx < instances.size(); ++inst_idx)
            for (std::size_t sigma_i = 0; sigma_i < spec.sigmas.size(); ++sigma_i) {
                std::uint64_t budget = spec.budget;
                if (!spec.per_sigma_budgets.empty())
                    budget = spec.per_sigma_budgets[sigma_i];
                if (spec.budget_rule == BudgetRule::until_convergence)
                    budget = spec.hard_cap;
                for (std::size_t alg_i = 0; alg_i < spec.algorithms.size(); ++alg_i)
                    plan_runs(inst_idx, sigma_i, alg_i, budget);
            }
    }

    std::vector<detail::RunOutput> outputs(plans.size());
    detail::parallel_for(plans.size(), spec.workers, [&](std::size_t i) {
        const RunPlan& p = plans[i];
        outputs[i] = detail::execute_run(spec, instances[p.inst_idx], indices[p.inst_idx].get(),
                                         p.sigma_i, p.sigma_abs, spec.algorithms[p.alg_i],
                                         p.budget, p.stream, p.run_id);
    });
    for (auto& out : outputs) {
        results.rows.push_back(std::move(out.row));
        for (auto& t : out.traces)
            results.traces.push_back(std::move(t));
    }
    return results;
}

// One U-test per (problem, n, sigma) stratum comparing two algorithms on a
// row metric. Strata missing either side are skipped.
struct StratumTest {
    std::string problem;
    std::size_t n = 0;
    double sigma = 0.0;
    std::size_t count_a = 0, count_b = 0;
    UTestResult test;
};

inline double metric_value(const ResultRow& row, const std::string& metric) {
    if (metric == "evals")
        return static_cast<double>(row.evals_to_best);
    if (metric == "fitness")
        return row.best_true_fitness ? *row.best_true_fitness
                                     : std::numeric_limits<double>::quiet_NaN();
    if (metric == "feasible-cost")
        return row.best_feasible_cost ? *row.best_feasible_cost
                                      : std::numeric_limits<double>::quiet_NaN();
    if (metric == "hypervolume")
        return row.hypervolume ? *row.hypervolume : std::numeric_limits<double>::quiet_NaN();
    throw std::invalid_argument("unknown metric: " + metric);
}

inline std::vector<StratumTest> significance_report(const std::vector<ResultRow>& rows,
                                                    const std::string& alg_a,
                                                    const std::string& alg_b,
                                                    const std::string& metric) {
    std::map<std::tuple<std::string, std::size_t, double>,
             std::pair<std::vector<double>, std::vector<double>>>
        strata;
    for (const ResultRow& row : rows) {
        if (row.algorithm != alg_a && row.algorithm != alg_b)
            continue;
        const double v = metric_value(row, metric);
        if (std::isnan(v))
            continue;
        auto& bucket = strata[{row.problem, row.n, row.sigma}];
        (row.algorithm == alg_a ? bucket.first : bucket.second).push_back(v);
    }
    std::vector<StratumTest> out;
    for (const auto& [key, samples] : strata) {
        if (samples.first.empty() || samples.second.empty())
            continue; // skipped stratum: one side has no data
        StratumTest st;
        st.problem = std::get<0>(key);
        st.n = std::get<1>(key);
        st.sigma = std::get<2>(key);
        st.count_a = samples.first.size();
        st.count_b = samples.second.size();
        st.test = mann_whitney_u(samples.first, samples.second);
        out.push_back(std::move(st));
    }
    return out;
}

} // namespace noisyopt
