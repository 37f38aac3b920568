#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "noisyopt/config_file.hpp"
#include "noisyopt/harness.hpp"
#include "noisyopt/plot.hpp"
#include "noisyopt/suites.hpp"

using namespace noisyopt;

namespace {

ExperimentSpec tiny_spec() {
    ExperimentSpec spec;
    spec.name = "tiny";
    spec.family = ProblemFamily::onemax;
    spec.sizes = {16};
    spec.sigmas = {0.0, 2.0};
    spec.algorithms = {"umda", "one-plus-one-ea"};
    spec.replications = 3;
    spec.budget_rule = BudgetRule::fixed;
    spec.budget = 2000;
    spec.master_seed = 77;
    return spec;
}

} // namespace

TEST_CASE("spec validation", "[harness]") {
    ExperimentSpec spec = tiny_spec();
    spec.replications = 0;
    REQUIRE_THROWS_AS(validate_spec(spec), std::invalid_argument);

    spec = tiny_spec();
    spec.algorithms = {"semo"}; // multi-objective algorithm on a scalar family
    REQUIRE_THROWS_AS(validate_spec(spec), std::invalid_argument);

    spec = tiny_spec();
    spec.family = ProblemFamily::cocz;
    spec.algorithms = {"umda"};
    REQUIRE_THROWS_AS(validate_spec(spec), std::invalid_argument);

    spec = tiny_spec();
    spec.budget = 0;
    REQUIRE_THROWS_AS(validate_spec(spec), std::invalid_argument);

    spec = tiny_spec();
    spec.sigmas = {-1.0};
    REQUIRE_THROWS_AS(validate_spec(spec), std::invalid_argument);
}

TEST_CASE("experiments are deterministic and complete", "[harness]") {
    const ExperimentSpec spec = tiny_spec();
    const ExperimentResults a = run_experiment(spec);
    const ExperimentResults b = run_experiment(spec);
    REQUIRE(a.rows.size() == 2 * 2 * 3); // sigmas x algorithms x replications

    // byte-identical CSV apart from the wall-clock column
    auto strip_wall = [](std::vector<ResultRow> rows) {
        for (auto& r : rows)
            r.wall_ms = 0.0;
        return rows;
    };
    std::ostringstream csv_a, csv_b;
    write_results(strip_wall(a.rows), csv_a);
    write_results(strip_wall(b.rows), csv_b);
    REQUIRE(csv_a.str() == csv_b.str());

    for (const auto& row : a.rows) {
        REQUIRE(row.evals_used <= spec.budget);
        REQUIRE(row.evals_to_best <= row.evals_used);
        REQUIRE(row.status == "ok");
        REQUIRE(row.best_true_fitness.has_value());
        REQUIRE_FALSE(row.m.has_value());
        REQUIRE_FALSE(row.hypervolume.has_value());
    }
    // instances persisted alongside results
    REQUIRE(a.instances.size() == 1);
    REQUIRE(a.instances[0].first == "onemax-n16-i0");
}

TEST_CASE("different master seeds give different runs", "[harness]") {
    ExperimentSpec spec = tiny_spec();
    const auto a = run_experiment(spec);
    spec.master_seed = 78;
    const auto b = run_experiment(spec);
    bool any_difference = false;
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        any_difference = any_difference || a.rows[i].evals_to_best != b.rows[i].evals_to_best ||
                         a.rows[i].seed != b.rows[i].seed;
    REQUIRE(any_difference);
}

TEST_CASE("sigma resolution modes", "[harness]") {
    const std::vector<std::int64_t> weights{10, 20, 30, 40}; // sum 100, mean 25
    REQUIRE(resolve_sigma(2.0, SigmaMode::absolute, 4, weights) == 2.0);
    REQUIRE(resolve_sigma(2.0, SigmaMode::sqrt_n, 4, weights) == 4.0);
    REQUIRE(resolve_sigma(2.0, SigmaMode::mean_weight, 4, weights) == 50.0);
    REQUIRE(resolve_sigma(2.0, SigmaMode::sqrt_sum_weight, 4, weights) == 20.0);
    REQUIRE_THROWS_AS(resolve_sigma(1.0, SigmaMode::mean_weight, 4, {}), std::invalid_argument);
}

TEST_CASE("mo families produce hypervolume rows", "[harness]") {
    ExperimentSpec spec;
    spec.name = "tiny-mo";
    spec.family = ProblemFamily::cocz;
    spec.sizes = {12};
    spec.cocz_split = 6;
    spec.sigmas = {0.0};
    spec.algorithms = {"semo", "nsga2", "moumda-nodup"};
    spec.replications = 2;
    spec.budget = 4000;
    spec.master_seed = 5;
    const auto results = run_experiment(spec);
    REQUIRE(results.rows.size() == 6);
    for (const auto& row : results.rows) {
        REQUIRE(row.hypervolume.has_value());
        REQUIRE(*row.hypervolume > 0.0);
        REQUIRE(row.m == 6);
        REQUIRE_FALSE(row.best_true_fitness.has_value());
    }
}

TEST_CASE("pcea-calibrated budgets give non-pcea algorithms twice the mean", "[harness]") {
    ExperimentSpec spec;
    spec.name = "tiny-calibrated";
    spec.family = ProblemFamily::subsetsum;
    spec.sizes = {12};
    spec.sigmas = {1.0};
    spec.sigma_mode = SigmaMode::absolute;
    spec.algorithms = {"umda", "pcea"};
    spec.replications = 4;
    spec.budget_rule = BudgetRule::pcea_calibrated;
    spec.hard_cap = 20000;
    spec.master_seed = 9;
    const auto results = run_experiment(spec);
    REQUIRE(results.rows.size() == 8);
    double pcea_mean = 0;
    std::size_t pcea_count = 0;
    for (const auto& row : results.rows)
        if (row.algorithm == "pcea") {
            pcea_mean += static_cast<double>(row.evals_used);
            ++pcea_count;
        }
    pcea_mean /= static_cast<double>(pcea_count);
    const auto budget = static_cast<std::uint64_t>(std::llround(2.0 * pcea_mean));
    for (const auto& row : results.rows)
        if (row.algorithm == "umda")
            REQUIRE(row.evals_used <= budget);
}

TEST_CASE("calibrate_budget returns twice the mean pcea runtime", "[harness][slow]") {
    const std::uint64_t budget = calibrate_budget(
        [&](RngStream noise) { return make_onemax_task(30, 1.0, noise); }, 30, 30,
        RngStream(123));
    REQUIRE(budget > 1000);
    REQUIRE(budget < 100000);
    // deterministic for a fixed stream
    const std::uint64_t again = calibrate_budget(
        [&](RngStream noise) { return make_onemax_task(30, 1.0, noise); }, 30, 30,
        RngStream(123));
    REQUIRE(budget == again);
    REQUIRE_THROWS_AS(calibrate_budget([&](RngStream noise) { return make_onemax_task(30, 1.0, noise); },
                                       30, 10, RngStream(1)),
                      std::invalid_argument);
}

TEST_CASE("suite definitions match the protocol", "[harness]") {
    const ExperimentSpec onemax = suite("fig1-onemax");
    REQUIRE(onemax.sigmas == std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    REQUIRE(onemax.sizes == std::vector<std::size_t>{100});
    REQUIRE(onemax.replications == 100);
    REQUIRE(onemax.per_sigma_budgets == kOneMaxBudgets);
    REQUIRE(onemax.algorithms.size() == 6);

    const ExperimentSpec cocz = suite("fig8mo-cocz");
    REQUIRE(cocz.budget == 50000);
    REQUIRE(cocz.replications == 30);
    REQUIRE(cocz.sigmas == std::vector<double>{0, 1, 3, 5, 7, 9, 11, 13, 15});
    REQUIRE(cocz.algorithms.size() == 8);

    const ExperimentSpec sc = suite("fig10-setcover-constrained");
    REQUIRE(sc.elements == 100);
    REQUIRE(sc.sizes == std::vector<std::size_t>{50, 100, 150, 200});
    REQUIRE(sc.budget == 50000);
    REQUIRE(sc.margin_clamp);

    const ExperimentSpec ss = suite("fig5-subsetsum");
    REQUIRE(ss.sigma_mode == SigmaMode::mean_weight);
    REQUIRE(ss.sigmas == std::vector<double>{5, 10, 15, 20});
    REQUIRE(ss.instances_per_size == 10);

    REQUIRE_THROWS_AS(suite("nonexistent"), std::invalid_argument);
}

TEST_CASE("significance report strata", "[harness]") {
    std::vector<ResultRow> rows;
    const auto push = [&](const std::string& alg, double sigma, double fitness) {
        ResultRow r;
        r.run_id = "x";
        r.algorithm = alg;
        r.problem = "onemax";
        r.n = 100;
        r.sigma = sigma;
        r.best_true_fitness = fitness;
        r.status = "ok";
        rows.push_back(r);
    };
    // identical groups: not significant
    for (int i = 0; i < 20; ++i) {
        push("umda", 1.0, 90 + i % 5);
        push("cga", 1.0, 90 + i % 5);
    }
    // strongly shifted groups: significant
    for (int i = 0; i < 20; ++i) {
        push("umda", 2.0, 100 - i % 3);
        push("cga", 2.0, 50 + i % 3);
    }
    const auto report = significance_report(rows, "umda", "cga", "fitness");
    REQUIRE(report.size() == 2);
    REQUIRE_FALSE(report[0].test.significant_at_5pct);
    REQUIRE(report[1].test.significant_at_5pct);

    // a stratum with one empty side is skipped
    push("umda", 3.0, 42);
    const auto partial = significance_report(rows, "umda", "cga", "fitness");
    REQUIRE(partial.size() == 2);
}

TEST_CASE("key-value config parsing", "[harness]") {
    std::istringstream in("# comment line is ignored\n"
                          "problem = subsetsum\n"
                          "n = 50, 100\n"
                          "sigma = 5, 10\n"
                          "reps = 7\n"
                          "guard-ms = 120000\n");
    const auto cfg = KeyValueConfig::parse(in);
    REQUIRE(cfg.get_string("problem") == "subsetsum");
    REQUIRE(cfg.get_size_list("n") == std::vector<std::size_t>{50, 100});
    REQUIRE(cfg.get_double_list("sigma") == std::vector<double>{5, 10});
    REQUIRE(cfg.get_u64("reps") == 7);
    REQUIRE(cfg.get_u64("missing", 3) == 3);
    REQUIRE_THROWS(cfg.get_string("missing"));

    std::istringstream dup("a = 1\na = 2\n");
    REQUIRE_THROWS(KeyValueConfig::parse(dup));
    std::istringstream bad("just some text\n");
    REQUIRE_THROWS(KeyValueConfig::parse(bad));
}

TEST_CASE("timeouts are recorded, not dropped", "[harness]") {
    ExperimentSpec spec = tiny_spec();
    spec.sizes = {500};       // large enough that the optimum is out of reach
    spec.sigmas = {20.0};
    spec.algorithms = {"one-plus-one-ea"};
    spec.replications = 1;
    spec.budget = 50'000'000; // far more work than the guard allows
    spec.wall_guard = std::chrono::milliseconds(1);
    const auto results = run_experiment(spec);
    REQUIRE(results.rows.size() == 1);
    REQUIRE(results.rows[0].status == "timeout");
}
