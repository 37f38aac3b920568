#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "noisyopt/harness.hpp"
#include "noisyopt/instance_io.hpp"
#include "noisyopt/plot.hpp"
#include "noisyopt/suites.hpp"

namespace fs = std::filesystem;
using namespace noisyopt;

namespace {

void write_outputs(const ExperimentResults& results, const std::string& out_dir,
                   bool with_traces) {
    fs::create_directories(out_dir);
    fs::create_directories(fs::path(out_dir) / "instances");
    for (const auto& [stem, stored] : results.instances)
        save_instance((fs::path(out_dir) / "instances" / (stem + ".txt")).string(), stored);
    const std::string results_path = (fs::path(out_dir) / "results.csv").string();
    write_results(results.rows, results_path);
    std::cout << "wrote " << results.rows.size() << " rows to " << results_path << '\n';
    if (with_traces && !results.traces.empty()) {
        const std::string traces_path = (fs::path(out_dir) / "traces.csv").string();
        write_results(results.traces, traces_path);
        std::cout << "wrote " << results.traces.size() << " trace rows to " << traces_path
                  << '\n';
    }
}

int cmd_generate(const std::string& problem, std::size_t n, std::size_t m, double delta,
                 std::uint64_t seed, const std::string& out) {
    RngStream rng(seed);
    StoredInstance stored;
    stored.seed = seed;
    if (problem == "onemax") {
        stored.problem = "linear";
        stored.instance = onemax_instance(n);
    } else if (problem == "linear") {
        stored.problem = "linear";
        stored.instance = gen_linear_instance(n, rng);
    } else if (problem == "subsetsum") {
        stored.problem = "subsetsum";
        stored.instance = gen_subsetsum_instance(n, rng);
    } else if (problem == "knapsack") {
        stored.problem = "knapsack";
        stored.instance = gen_knapsack_instance(n, rng);
    } else if (problem == "setcover") {
        if (m == 0)
            throw std::invalid_argument("setcover needs --m (element count)");
        stored.problem = "setcover";
        stored.instance = gen_setcover_instance(m, n, delta, rng);
    } else if (problem == "cocz") {
        stored.problem = "cocz";
        stored.instance = COCZInstance{n, m == 0 ? n / 2 : m};
    } else {
        throw std::invalid_argument("unknown problem: " + problem);
    }
    save_instance(out, stored);
    std::cout << "wrote " << problem << " instance (n=" << n << ") to " << out << '\n';
    return 0;
}

int cmd_calibrate(const std::string& problem, std::size_t n, double sigma,
                  const std::string& sigma_mode, std::size_t reps, std::uint64_t seed) {
    const SigmaMode mode = sigma_mode_from(sigma_mode);
    std::uint64_t budget = 0;
    if (problem == "onemax") {
        const double sigma_abs = resolve_sigma(sigma, mode, n, std::vector<std::int64_t>(n, 1));
        budget = calibrate_budget(
            [&](RngStream noise) { return make_onemax_task(n, sigma_abs, noise); }, n, reps,
            RngStream(seed));
    } else if (problem == "linear") {
        RngStream gen = RngStream(seed).substream(0xA11CE);
        const LinearInstance inst = gen_linear_instance(n, gen);
        const double sigma_abs = resolve_sigma(sigma, mode, n, inst.weights);
        budget = calibrate_budget(
            [&](RngStream noise) { return make_weighted_linear_task(inst, sigma_abs, noise); },
            n, reps, RngStream(seed));
    } else {
        throw std::invalid_argument("calibrate supports onemax and linear, got: " + problem);
    }
    std::cout << "budget " << budget << '\n';
    return 0;
}

int cmd_stats(const std::string& results_path, const std::string& alg_a, const std::string& alg_b,
              const std::string& metric, const std::string& out_path) {
    const auto rows = read_results(results_path);
    const auto report = significance_report(rows, alg_a, alg_b, metric);
    if (report.empty())
        throw std::runtime_error("no strata with data for both algorithms");
    std::ostringstream table;
    table << "problem,n,sigma,count_a,count_b,u_a,u_b,p_two_sided,significant_5pct\n";
    for (const auto& st : report)
        table << st.problem << ',' << st.n << ',' << detail::format_double(st.sigma) << ','
              << st.count_a << ',' << st.count_b << ',' << detail::format_double(st.test.u1)
              << ',' << detail::format_double(st.test.u2) << ','
              << detail::format_double(st.test.p_two_sided) << ','
              << (st.test.significant_at_5pct ? "yes" : "no") << '\n';
    if (out_path.empty()) {
        std::cout << table.str();
    } else {
        std::ofstream out(out_path);
        if (!out)
            throw std::runtime_error("cannot open " + out_path);
        out << table.str();
        std::cout << "wrote " << report.size() << " strata to " << out_path << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"benchmark harness for evolutionary algorithms on noisy combinatorial problems"};
    app.require_subcommand(1);

    auto* generate = app.add_subcommand("generate", "generate and save a problem instance");
    std::string gen_problem, gen_out;
    std::size_t gen_n = 0, gen_m = 0;
    double gen_delta = 0.001;
    std::uint64_t gen_seed = 1;
    generate
        ->add_option("--problem", gen_problem, "onemax|linear|subsetsum|knapsack|setcover|cocz")
        ->required();
    generate->add_option("--n", gen_n, "string length / subset count")->required();
    generate->add_option("--m", gen_m, "element count (setcover) or split point (cocz)");
    generate->add_option("--delta", gen_delta, "setcover cover-failure probability");
    generate->add_option("--seed", gen_seed, "generator seed");
    generate->add_option("--out", gen_out, "output file")->required();

    auto* run = app.add_subcommand("run", "run an experiment described by a config file");
    std::string run_spec, run_out_dir = ".";
    std::size_t run_workers = 0;
    bool run_traces = false;
    run->add_option("--spec", run_spec, "key-value experiment config")->required();
    run->add_option("--out-dir", run_out_dir, "output directory");
    run->add_option("--workers", run_workers, "worker thread limit");
    run->add_flag("--traces", run_traces, "also write per-checkpoint trace rows");

    auto* suite_cmd = app.add_subcommand("suite", "run one of the named experiment suites");
    std::string suite_name, suite_out_dir = ".";
    std::uint64_t suite_seed = 1;
    std::size_t suite_reps = 0, suite_workers = 0;
    bool suite_traces = false;
    suite_cmd->add_option("--name", suite_name, "suite id, e.g. fig1-onemax")->required();
    suite_cmd->add_option("--seed", suite_seed, "master seed");
    suite_cmd->add_option("--out-dir", suite_out_dir, "output directory");
    suite_cmd->add_option("--reps", suite_reps, "override the replication count");
    suite_cmd->add_option("--workers", suite_workers, "worker thread limit");
    suite_cmd->add_flag("--traces", suite_traces, "also write per-checkpoint trace rows");

    auto* calibrate = app.add_subcommand("calibrate", "derive a budget from PCEA runtimes");
    std::string cal_problem = "onemax", cal_mode = "absolute";
    std::size_t cal_n = 100, cal_reps = 100;
    double cal_sigma = 1.0;
    std::uint64_t cal_seed = 1;
    calibrate->add_option("--problem", cal_problem, "onemax|linear")->required();
    calibrate->add_option("--n", cal_n, "problem size");
    calibrate->add_option("--sigma", cal_sigma, "noise level")->required();
    calibrate->add_option("--sigma-mode", cal_mode, "absolute|sqrt-n|mean-weight|sqrt-sum-weight");
    calibrate->add_option("--reps", cal_reps, "calibration repetitions (>= 30)")->required();
    calibrate->add_option("--seed", cal_seed, "master seed");

    auto* stats = app.add_subcommand("stats", "Mann-Whitney comparison of two algorithms");
    std::string stats_results, stats_a, stats_b, stats_metric = "fitness", stats_out;
    stats->add_option("--results", stats_results, "results csv")->required();
    stats->add_option("--a", stats_a, "first algorithm")->required();
    stats->add_option("--b", stats_b, "second algorithm")->required();
    stats->add_option("--metric", stats_metric, "evals|fitness|feasible-cost|hypervolume");
    stats->add_option("--out", stats_out, "write the table to a file instead of stdout");

    auto* plot = app.add_subcommand("plot", "aggregate results into plot data or an SVG chart");
    std::string plot_results, plot_figure, plot_out;
    plot->add_option("--results", plot_results, "results csv")->required();
    plot->add_option("--figure", plot_figure, "figure id, see README")->required();
    plot->add_option("--out", plot_out, "output file (.svg renders a chart, else csv)")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate)
            return cmd_generate(gen_problem, gen_n, gen_m, gen_delta, gen_seed, gen_out);
        if (*run) {
            ExperimentSpec spec = spec_from_config(KeyValueConfig::load(run_spec));
            if (run_workers)
                spec.workers = run_workers;
            spec.record_traces = spec.record_traces || run_traces;
            write_outputs(run_experiment(spec), run_out_dir, spec.record_traces);
            return 0;
        }
        if (*suite_cmd) {
            ExperimentSpec spec = suite(suite_name);
            spec.master_seed = suite_seed;
            if (suite_reps)
                spec.replications = suite_reps;
            if (suite_workers)
                spec.workers = suite_workers;
            spec.record_traces = suite_traces;
            write_outputs(run_experiment(spec), suite_out_dir, suite_traces);
            return 0;
        }
        if (*calibrate)
            return cmd_calibrate(cal_problem, cal_n, cal_sigma, cal_mode, cal_reps, cal_seed);
        if (*stats)
            return cmd_stats(stats_results, stats_a, stats_b, stats_metric, stats_out);
        if (*plot) {
            emit_plot_data(read_results(plot_results), plot_figure, plot_out);
            std::cout << "wrote " << plot_out << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
