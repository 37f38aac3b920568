#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "fake_rng.hpp"
#include "noisyopt/multi_objective.hpp"
#include "noisyopt/tasks.hpp"

using namespace noisyopt;

namespace {

std::set<std::pair<double, double>> objective_set(const std::vector<BiObjectiveValue>& vals) {
    std::set<std::pair<double, double>> out;
    for (const auto& v : vals)
        out.insert({v.f1, v.f2});
    return out;
}

double front_coverage(const std::vector<BiObjectiveValue>& population,
                      const std::vector<BiObjectiveValue>& front) {
    const auto present = objective_set(population);
    std::size_t hit = 0;
    for (const auto& f : front)
        hit += present.contains({f.f1, f.f2});
    return static_cast<double>(hit) / static_cast<double>(front.size());
}

} // namespace

TEST_CASE("default multi-objective configs", "[moalgos]") {
    const auto mo = default_moumda_config(30, MoUmdaVariant::plain);
    // 20 sqrt(30) ln 30 = 372.56..., rounded up to even
    REQUIRE(mo.lambda == 374);
    REQUIRE(mo.mu == 187);
    const auto ns = default_nsga2_config(30);
    REQUIRE(ns.lambda == 188);
}

TEST_CASE("rank and crowding selection matches an independent resort", "[moalgos]") {
    RngStream rng(100);
    for (int caseno = 0; caseno < 20; ++caseno) {
        std::vector<BiObjectiveValue> values(40);
        for (auto& v : values) {
            v.f1 = static_cast<double>(rng.next_below(8));
            v.f2 = static_cast<double>(rng.next_below(8));
        }
        const DominanceRelation dom{};
        const auto pool = detail::rank_pool(values, dom);
        const auto chosen = detail::select_by_rank_crowding(pool, 15);
        REQUIRE(chosen.size() == 15);

        // oracle: full sort by (rank asc, crowding desc, index asc)
        std::vector<std::size_t> order(values.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (pool.rank[a] != pool.rank[b])
                return pool.rank[a] < pool.rank[b];
            if (pool.crowding[a] != pool.crowding[b])
                return pool.crowding[a] > pool.crowding[b];
            return a < b;
        });
        const std::set<std::size_t> expect(order.begin(), order.begin() + 15);
        REQUIRE(std::set<std::size_t>(chosen.begin(), chosen.end()) == expect);
    }
}

TEST_CASE("hco comparison: dominance first, hypervolume only on ties", "[moalgos]") {
    const DominanceRelation dom{};
    const HypervolumeConfig cfg{{0.0, 0.0}, Sense::maximize, Sense::maximize};
    bool consulted = false;

    // neither dominates; single-point volumes 3 vs 4 with an empty population
    REQUIRE_FALSE(hco_prefers_first({3, 1}, {2, 2}, {}, dom, cfg, &consulted));
    REQUIRE(consulted);

    // dominance decides without touching the hypervolume
    REQUIRE(hco_prefers_first({3, 3}, {2, 2}, {}, dom, cfg, &consulted));
    REQUIRE_FALSE(consulted);
    REQUIRE_FALSE(hco_prefers_first({2, 2}, {3, 3}, {}, dom, cfg, &consulted));
    REQUIRE_FALSE(consulted);

    // contribution relative to an existing population: (2,2) is already
    // covered, so the boundary point now adds more
    const std::vector<BiObjectiveValue> population{{2, 2}};
    REQUIRE(hco_prefers_first({3, 1}, {2, 2}, population, dom, cfg, &consulted));
    REQUIRE(consulted);
}

TEST_CASE("clustered model quotas always sum to mu and fits are exact", "[moalgos]") {
    RngStream rng(101);
    const std::size_t mu = 30, n = 12;
    auto model = ClusteredModel::initial(5, n, mu);
    REQUIRE(model.cluster_count() == 5);
    REQUIRE(std::accumulate(model.quotas.begin(), model.quotas.end(), std::size_t{0}) == mu);

    for (int round = 0; round < 10; ++round) {
        std::vector<Bitstring> sel;
        std::vector<BiObjectiveValue> vals;
        for (std::size_t i = 0; i < mu; ++i) {
            sel.push_back(random_bitstring(n, rng));
            vals.push_back({static_cast<double>(rng.next_below(20)),
                            static_cast<double>(rng.next_below(20))});
        }
        model.refit(sel, vals, round % 2 == 0, rng);
        REQUIRE(std::accumulate(model.quotas.begin(), model.quotas.end(), std::size_t{0}) == mu);

        // each non-empty cluster's vector is the exact bit frequency of its members
        std::vector<Point2> pts(mu);
        for (std::size_t i = 0; i < mu; ++i)
            pts[i] = {vals[i].f1, vals[i].f2};
        for (std::size_t c = 0; c < model.cluster_count(); ++c) {
            if (model.quotas[c] == 0)
                continue;
            for (std::size_t bit = 0; bit < n; ++bit) {
                const double f = model.frequencies[c][bit];
                const double scaled = f * static_cast<double>(model.quotas[c]);
                REQUIRE_THAT(scaled, Catch::Matchers::WithinAbs(std::round(scaled), 1e-9));
            }
        }
    }
}

TEST_CASE("duplicate-free generation yields distinct strings", "[moalgos]") {
    RngStream rng(102);
    const std::vector<double> probs(16, 0.5);
    std::vector<Bitstring> out;
    detail::generate_population(out, probs, 64, true, 100, rng);
    REQUIRE(out.size() == 64);
    std::set<std::string> distinct;
    for (const auto& s : out)
        distinct.insert(s.to_string());
    REQUIRE(distinct.size() == 64);

    // cap kicks in when distinct strings run out: 2^2 = 4 < 8 requested
    std::vector<Bitstring> small;
    const std::vector<double> tiny(2, 0.5);
    detail::generate_population(small, tiny, 8, true, 50, rng);
    REQUIRE(small.size() == 8);
}

TEST_CASE("semo recovers the full cocz front without noise", "[moalgos][slow]") {
    const COCZInstance cz{6, 3};
    const auto front = cocz_true_front(cz);
    int exact = 0;
    for (int seed = 0; seed < 20; ++seed) {
        auto task = make_cocz_task(cz, 0.0, RngStream(200 + seed));
        RngStream rng(300 + seed);
        const MoRunResult r = run_semo(task, 10000, rng);
        exact += objective_set(r.final_true_values) == objective_set(front);
    }
    REQUIRE(exact >= 19);
}

TEST_CASE("semo keeps within budget and grows a non-trivial archive", "[moalgos]") {
    const COCZInstance cz{10, 5};
    auto task = make_cocz_task(cz, 1.0, RngStream(103));
    RngStream rng(104);
    const MoRunResult r = run_semo(task, 2000, rng);
    REQUIRE(r.evals_used == 2000);
    REQUIRE(r.final_population >= 1);
    REQUIRE(r.best_hypervolume > 0.0);
    REQUIRE(r.final_true_values.size() == r.final_population);
    REQUIRE_THROWS_AS(run_semo(task, 0, rng), std::invalid_argument);
}

TEST_CASE("nsga2 reaches near-optimal cocz hypervolume without noise", "[moalgos][slow]") {
    const COCZInstance cz{30, 15};
    auto task = make_cocz_task(cz, 0.0, RngStream(105));
    RngStream rng(106);
    const auto cfg = default_nsga2_config(30);
    const MoRunResult r = run_nsga2(task, cfg, 50000, rng);
    REQUIRE(r.best_hypervolume >= 770.0);
    REQUIRE(r.evals_used <= 50000);
}

TEST_CASE("nsga2 respects the budget exactly under noise", "[moalgos]") {
    const COCZInstance cz{12, 6};
    auto task = make_cocz_task(cz, 4.0, RngStream(107));
    RngStream rng(108);
    MoConfig cfg = default_nsga2_config(12);
    const MoRunResult r = run_nsga2(task, cfg, 3001, rng);
    REQUIRE(r.evals_used == 3001);
    REQUIRE(r.final_population <= cfg.lambda);

    cfg.lambda = 7; // odd
    REQUIRE_THROWS_AS(run_nsga2(task, cfg, 100, rng), std::invalid_argument);
}

TEST_CASE("moumda variants respect the budget exactly under noise", "[moalgos]") {
    for (const auto variant :
         {MoUmdaVariant::plain, MoUmdaVariant::no_duplicates, MoUmdaVariant::kmeans,
          MoUmdaVariant::hac, MoUmdaVariant::archive, MoUmdaVariant::hco}) {
        const COCZInstance cz{12, 6};
        auto task = make_cocz_task(cz, 4.0, RngStream(109));
        RngStream rng(110);
        MoConfig cfg = default_moumda_config(12, variant);
        const MoRunResult r = run_moumda(task, cfg, 2003, rng);
        INFO(to_string(variant));
        REQUIRE(r.evals_used == 2003);
        REQUIRE(r.generations >= 1);
    }
}

TEST_CASE("every moumda variant and nsga2 cover the small cocz front at sigma zero",
          "[moalgos][slow]") {
    const COCZInstance cz{12, 6};
    const auto front = cocz_true_front(cz);
    const std::uint64_t budget = 20000;

    for (const auto variant :
         {MoUmdaVariant::plain, MoUmdaVariant::no_duplicates, MoUmdaVariant::kmeans,
          MoUmdaVariant::hac, MoUmdaVariant::archive, MoUmdaVariant::hco}) {
        for (int seed = 0; seed < 20; ++seed) {
            auto task = make_cocz_task(cz, 0.0, RngStream(400 + seed));
            RngStream rng(500 + seed);
            const auto cfg = default_moumda_config(12, variant);
            const MoRunResult r = run_moumda(task, cfg, budget, rng);
            INFO(to_string(variant) << " seed " << seed);
            REQUIRE(front_coverage(r.final_true_values, front) >= 0.9);
        }
    }
    for (int seed = 0; seed < 20; ++seed) {
        auto task = make_cocz_task(cz, 0.0, RngStream(600 + seed));
        RngStream rng(700 + seed);
        const MoRunResult r = run_nsga2(task, default_nsga2_config(12), budget, rng);
        INFO("nsga2 seed " << seed);
        REQUIRE(front_coverage(r.final_true_values, front) >= 0.9);
    }
}

TEST_CASE("mo setcover task tracks the best truly feasible cost", "[moalgos]") {
    RngStream gen(111);
    const SetCoverInstance sc = gen_setcover_instance(8, 12, 0.01, gen);
    const SetCoverIndex index(sc);
    auto task = make_mo_setcover_task(index, 2.0, RngStream(112));
    RngStream rng(113);
    const auto cfg = default_moumda_config(12, MoUmdaVariant::no_duplicates);
    const MoRunResult r = run_moumda(task, cfg, 5000, rng);
    REQUIRE(r.evals_used == 5000);
    if (r.best_feasible_cost) {
        REQUIRE(*r.best_feasible_cost >= 0.0);
        REQUIRE(*r.best_feasible_cost <= 12.0);
    }
    // reference point for minimization sits at the worst corner
    REQUIRE(task.reference() == BiObjectiveValue{12.0, 8.0});
}
