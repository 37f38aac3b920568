#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "noisyopt/config_file.hpp"
#include "noisyopt/harness.hpp"

namespace noisyopt {

// Evaluation budgets for the noisy OneMax runs, sigma = 1..10 (twice the
// mean PCEA time to optimum, measured once and then fixed).
inline const std::vector<std::uint64_t> kOneMaxBudgets{
    38392, 41066, 44477, 50728, 56851, 64079, 70736, 79034, 86078, 93638};

// Budgets for the noisy WeightedLinear runs, sigma = (1..10) x sqrt(sum w).
inline const std::vector<std::uint64_t> kWeightedLinearBudgets{
    47096, 46801, 47704, 48350, 48682, 49954, 50876, 51429, 52794, 53310};

inline std::vector<std::string> all_single_algorithms() {
    return {"one-plus-one-ea", "mutation-population", "cga", "pbil", "umda", "pcea"};
}

inline std::vector<std::string> all_mo_algorithms() {
    return {"semo",          "nsga2",         "moumda",        "moumda-nodup",
            "moumda-kmeans", "moumda-hac",    "moumda-archive", "moumda-hco"};
}

inline std::vector<std::string> suite_names() {
    return {"fig1-onemax",           "fig3-linear",        "fig5-subsetsum",
            "fig6-knapsack-v1",      "fig8-knapsack-v2",   "fig10-setcover-constrained",
            "fig11-setcover-penalty", "fig8mo-cocz",        "fig9mo-mosetcover"};
}

// Fully parameterized experiment specs, one per figure of the study.
inline ExperimentSpec suite(const std::string& name) {
    ExperimentSpec spec;
    spec.name = name;
    if (name == "fig1-onemax") {
        spec.family = ProblemFamily::onemax;
        spec.sizes = {100};
        spec.sigmas = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        spec.sigma_mode = SigmaMode::absolute;
        spec.algorithms = all_single_algorithms();
        spec.replications = 100;
        spec.budget_rule = BudgetRule::fixed;
        spec.per_sigma_budgets = kOneMaxBudgets;
    } else if (name == "fig3-linear") {
        spec.family = ProblemFamily::linear;
        spec.sizes = {100};
        spec.sigmas = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        spec.sigma_mode = SigmaMode::sqrt_sum_weight;
        spec.algorithms = all_single_algorithms();
        spec.replications = 100;
        spec.budget_rule = BudgetRule::fixed;
        spec.per_sigma_budgets = kWeightedLinearBudgets;
    } else if (name == "fig5-subsetsum") {
        spec.family = ProblemFamily::subsetsum;
        spec.sizes = {50, 100, 150, 200};
        spec.instances_per_size = 10;
        spec.sigmas = {5, 10, 15, 20};
        spec.sigma_mode = SigmaMode::mean_weight;
        spec.algorithms = {"umda", "pcea"};
        spec.replications = 100;
        spec.budget_rule = BudgetRule::until_convergence;
    } else if (name == "fig6-knapsack-v1" || name == "fig8-knapsack-v2") {
        spec.family = name == "fig6-knapsack-v1" ? ProblemFamily::knapsack_v1
                                                 : ProblemFamily::knapsack_v2;
        spec.sizes = {50, 100, 150, 200};
        spec.instances_per_size = 10;
        spec.sigmas = {5, 10, 15, 20};
        spec.sigma_mode = SigmaMode::mean_weight;
        spec.algorithms = {"umda", "pcea"};
        spec.replications = 100;
        spec.budget_rule = BudgetRule::pcea_calibrated;
    } else if (name == "fig10-setcover-constrained" || name == "fig11-setcover-penalty") {
        spec.family = name == "fig10-setcover-constrained"
                          ? ProblemFamily::setcover_constrained
                          : ProblemFamily::setcover_penalty;
        spec.sizes = {50, 100, 150, 200};
        spec.elements = 100;
        spec.instances_per_size = 1;
        spec.sigmas = {0, 0.5, 1, 2, 4};
        spec.sigma_mode = SigmaMode::absolute;
        spec.algorithms = {"umda", "pcea"};
        spec.replications = 30;
        spec.budget_rule = BudgetRule::fixed;
        spec.budget = 50000;
        spec.margin_clamp = true;
    } else if (name == "fig8mo-cocz") {
        spec.family = ProblemFamily::cocz;
        spec.sizes = {30};
        spec.cocz_split = 15;
        spec.sigmas = {0, 1, 3, 5, 7, 9, 11, 13, 15};
        spec.sigma_mode = SigmaMode::absolute;
        spec.algorithms = all_mo_algorithms();
        spec.replications = 30;
        spec.budget_rule = BudgetRule::fixed;
        spec.budget = 50000;
    } else if (name == "fig9mo-mosetcover") {
        spec.family = ProblemFamily::mo_setcover;
        spec.sizes = {50, 100, 150, 200};
        spec.elements = 100;
        spec.instances_per_size = 1;
        spec.sigmas = {0, 0.5, 1, 2, 4};
        spec.sigma_mode = SigmaMode::absolute;
        spec.algorithms = {"nsga2", "moumda-nodup", "moumda-kmeans"};
        spec.replications = 30;
        spec.budget_rule = BudgetRule::fixed;
        spec.budget = 50000;
    } else {
        throw std::invalid_argument("unknown suite: " + name);
    }
    return spec;
}

// Build an experiment spec from a key-value config file. `suite` seeds the
// defaults when present; any explicit key overrides it.
inline ExperimentSpec spec_from_config(const KeyValueConfig& cfg) {
    ExperimentSpec spec;
    if (cfg.has("suite"))
        spec = suite(cfg.get_string("suite"));
    if (cfg.has("name"))
        spec.name = cfg.get_string("name");
    if (cfg.has("problem"))
        spec.family = problem_family_from(cfg.get_string("problem"));
    if (cfg.has("n"))
        spec.sizes = cfg.get_size_list("n");
    if (cfg.has("m"))
        spec.elements = static_cast<std::size_t>(cfg.get_u64("m"));
    if (cfg.has("split"))
        spec.cocz_split = static_cast<std::size_t>(cfg.get_u64("split"));
    if (cfg.has("instances"))
        spec.instances_per_size = static_cast<std::size_t>(cfg.get_u64("instances"));
    if (cfg.has("sigma"))
        spec.sigmas = cfg.get_double_list("sigma");
    if (cfg.has("sigma-mode"))
        spec.sigma_mode = sigma_mode_from(cfg.get_string("sigma-mode"));
    if (cfg.has("algorithms"))
        spec.algorithms = cfg.get_list("algorithms");
    if (cfg.has("reps"))
        spec.replications = static_cast<std::size_t>(cfg.get_u64("reps"));
    if (cfg.has("budget-rule"))
        spec.budget_rule = budget_rule_from(cfg.get_string("budget-rule"));
    if (cfg.has("budget"))
        spec.budget = cfg.get_u64("budget");
    if (cfg.has("budgets")) {
        spec.per_sigma_budgets.clear();
        for (const auto& b : cfg.get_list("budgets"))
            spec.per_sigma_budgets.push_back(std::stoull(b));
    }
    if (cfg.has("hard-cap"))
        spec.hard_cap = cfg.get_u64("hard-cap");
    if (cfg.has("calibration-reps"))
        spec.calibration_reps = static_cast<std::size_t>(cfg.get_u64("calibration-reps"));
    if (cfg.has("delta"))
        spec.delta = cfg.get_double("delta");
    if (cfg.has("penalty"))
        spec.penalty = cfg.get_double("penalty");
    if (cfg.has("seed"))
        spec.master_seed = cfg.get_u64("seed");
    if (cfg.has("margin-clamp"))
        spec.margin_clamp = cfg.get_string("margin-clamp") == "true";
    if (cfg.has("workers"))
        spec.workers = static_cast<std::size_t>(cfg.get_u64("workers"));
    if (cfg.has("guard-ms"))
        spec.wall_guard = std::chrono::milliseconds(cfg.get_u64("guard-ms"));
    if (cfg.has("traces"))
        spec.record_traces = cfg.get_string("traces") == "true";
    validate_spec(spec);
    return spec;
}

} // namespace noisyopt
