#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <sstream>

#include "noisyopt/instance_io.hpp"
#include "noisyopt/problems.hpp"

using namespace noisyopt;

namespace {

Bitstring from_mask(std::uint32_t mask, std::size_t n) {
    Bitstring x(n);
    for (std::size_t i = 0; i < n; ++i)
        x.set(i, (mask >> i) & 1u);
    return x;
}

// test-only oracle: pseudo-polynomial DP over achievable subset sums
std::vector<char> achievable_sums(const std::vector<std::int64_t>& w) {
    std::int64_t total = 0;
    for (auto v : w)
        total += v;
    std::vector<char> reach(static_cast<std::size_t>(total) + 1, 0);
    reach[0] = 1;
    for (auto v : w)
        for (std::int64_t s = total; s >= v; --s)
            if (reach[static_cast<std::size_t>(s - v)])
                reach[static_cast<std::size_t>(s)] = 1;
    return reach;
}

// test-only oracle: classic knapsack DP by capacity
std::int64_t knapsack_dp(const KnapsackInstance& inst) {
    std::vector<std::int64_t> best(static_cast<std::size_t>(inst.capacity) + 1, 0);
    for (std::size_t i = 0; i < inst.weights.size(); ++i)
        for (std::int64_t c = inst.capacity; c >= inst.weights[i]; --c)
            best[static_cast<std::size_t>(c)] =
                std::max(best[static_cast<std::size_t>(c)],
                         best[static_cast<std::size_t>(c - inst.weights[i])] + inst.profits[i]);
    return best.back();
}

} // namespace

TEST_CASE("onemax and weighted linear", "[problems]") {
    REQUIRE(eval_onemax(Bitstring::from_string("1111")) == 4);
    REQUIRE(eval_onemax(Bitstring(4)) == 0);
    REQUIRE(eval_onemax(Bitstring::from_string("1011")) == 3);

    LinearInstance li{{3, 5}};
    REQUIRE(eval_weighted_linear(li, Bitstring::from_string("11")) == 8);
    REQUIRE(eval_weighted_linear(li, Bitstring::from_string("00")) == 0);
    REQUIRE_THROWS_AS(eval_weighted_linear(li, Bitstring(3)), std::invalid_argument);
}

TEST_CASE("unit weights reduce weighted linear to onemax", "[problems]") {
    const LinearInstance ones = onemax_instance(50);
    RngStream rng(21);
    for (int t = 0; t < 10000; ++t) {
        const Bitstring x = random_bitstring(50, rng);
        REQUIRE(eval_weighted_linear(ones, x) == eval_onemax(x));
    }
}

TEST_CASE("subset sum evaluator", "[problems]") {
    SubsetSumInstance ss{{1, 2, 3}, 4};
    REQUIRE(eval_subset_sum(ss, Bitstring::from_string("101")) == 0);
    REQUIRE(eval_subset_sum(ss, Bitstring::from_string("110")) == 1);
    REQUIRE(eval_subset_sum(ss, Bitstring::from_string("000")) == 4);
    REQUIRE_THROWS_AS(eval_subset_sum(ss, Bitstring(2)), std::invalid_argument);
}

TEST_CASE("knapsack evaluator", "[problems]") {
    KnapsackInstance kp{{3, 3, 3}, {5, 1, 2}, 6};
    REQUIRE(eval_knapsack(kp, Bitstring::from_string("000")) == 0);
    REQUIRE(eval_knapsack(kp, Bitstring::from_string("111")) == -3);
    REQUIRE(eval_knapsack(kp, Bitstring::from_string("110")) == 6);
}

TEST_CASE("set cover evaluators", "[problems]") {
    SetCoverInstance sc;
    sc.elements = 2;
    sc.subsets = 2;
    sc.membership = {1, 0, 1, 0}; // both elements covered only by subset 0

    REQUIRE(eval_setcover(sc, Bitstring::from_string("00")) == SetCoverEval{0, 2});
    REQUIRE(eval_setcover(sc, Bitstring::from_string("10")) == SetCoverEval{1, 0});

    SetCoverInstance sc2;
    sc2.elements = 2;
    sc2.subsets = 2;
    sc2.membership = {1, 0, 0, 0}; // element 1 uncoverable
    REQUIRE(eval_penalty_setcover(sc2, 3.0, Bitstring::from_string("10")) == 4.0);

    REQUIRE(eval_penalty_setcover(sc, 3.0, Bitstring::from_string("00")) == 6.0);
    REQUIRE_THROWS_AS(eval_penalty_setcover(sc, 0.0, Bitstring(2)), std::invalid_argument);
}

TEST_CASE("penalty equals sets_used + penalty * uncovered everywhere", "[problems]") {
    RngStream rng(31);
    const SetCoverInstance sc = gen_setcover_instance(12, 10, 0.01, rng);
    const double penalty = default_setcover_penalty(sc);
    REQUIRE(penalty == 11.0);
    for (std::uint32_t mask = 0; mask < (1u << 10); ++mask) {
        const Bitstring x = from_mask(mask, 10);
        const SetCoverEval e = eval_setcover(sc, x);
        REQUIRE(eval_penalty_setcover(sc, penalty, x) ==
                static_cast<double>(e.sets_used) + penalty * static_cast<double>(e.uncovered));
    }
}

TEST_CASE("set cover index matches direct matrix evaluation", "[problems]") {
    RngStream rng(32);
    const SetCoverInstance sc = gen_setcover_instance(9, 11, 0.01, rng);
    const SetCoverIndex index(sc);
    std::vector<std::int32_t> a, b;
    for (int t = 0; t < 500; ++t) {
        const Bitstring x = random_bitstring(11, rng);
        index.coverage(x, a);
        setcover_coverage(sc, x, b);
        REQUIRE(a == b);
    }
}

TEST_CASE("cocz evaluator and true front", "[problems]") {
    const COCZInstance cz{4, 2};
    REQUIRE(eval_cocz(cz, Bitstring::from_string("1111")) == BiObjectiveValue{4, 2});
    REQUIRE(eval_cocz(cz, Bitstring::from_string("1100")) == BiObjectiveValue{2, 4});

    const COCZInstance big{30, 15};
    Bitstring half(30);
    for (std::size_t i = 0; i < 15; ++i)
        half.set(i, true);
    REQUIRE(eval_cocz(big, half) == BiObjectiveValue{15, 30});

    const auto front = cocz_true_front(big);
    REQUIRE(front.size() == 16);
    REQUIRE(front.front() == BiObjectiveValue{15, 30});
    REQUIRE(front.back() == BiObjectiveValue{30, 15});

    const auto tiny = cocz_true_front({2, 1});
    REQUIRE(tiny == std::vector<BiObjectiveValue>{{1, 2}, {2, 1}});
    const auto degenerate = cocz_true_front({5, 5});
    REQUIRE(degenerate == std::vector<BiObjectiveValue>{{5, 5}});
}

TEST_CASE("cocz front equals brute-force non-dominated set", "[problems]") {
    const COCZInstance cz{14, 6};
    std::set<std::pair<double, double>> all;
    for (std::uint32_t mask = 0; mask < (1u << 14); ++mask) {
        const auto v = eval_cocz(cz, from_mask(mask, 14));
        all.insert({v.f1, v.f2});
    }
    std::set<std::pair<double, double>> nondominated;
    for (const auto& p : all) {
        bool dominated = false;
        for (const auto& q : all)
            if ((q.first >= p.first && q.second > p.second) ||
                (q.first > p.first && q.second >= p.second))
                dominated = true;
        if (!dominated)
            nondominated.insert(p);
    }
    std::set<std::pair<double, double>> front;
    for (const auto& v : cocz_true_front(cz))
        front.insert({v.f1, v.f2});
    REQUIRE(front == nondominated);
}

TEST_CASE("weight generator ranges and mean", "[problems]") {
    RngStream rng(41);
    const LinearInstance li = gen_linear_instance(10000, rng);
    double sum = 0;
    for (auto w : li.weights) {
        REQUIRE(w >= 1);
        REQUIRE(w <= 100);
        sum += static_cast<double>(w);
    }
    const double m = sum / 10000.0;
    REQUIRE(m > 49.0);
    REQUIRE(m < 52.0);

    RngStream r1(5), r2(5);
    REQUIRE(gen_linear_instance(20, r1) == gen_linear_instance(20, r2));
}

TEST_CASE("two-thirds targets use floor", "[problems]") {
    REQUIRE(two_thirds_of_sum({4, 5}) == 6);
    REQUIRE(two_thirds_of_sum({5, 5}) == 6);
    RngStream rng(42);
    for (int t = 0; t < 50; ++t) {
        const auto ss = gen_subsetsum_instance(30, rng);
        std::int64_t total = 0;
        for (auto w : ss.weights)
            total += w;
        REQUIRE(ss.target == 2 * total / 3);
        REQUIRE(ss.target < total);
        const auto kp = gen_knapsack_instance(30, rng);
        for (auto p : kp.profits) {
            REQUIRE(p >= 1);
            REQUIRE(p <= 100);
        }
    }
}

TEST_CASE("set cover fill probability", "[problems]") {
    // frozen from a 50-digit evaluation of the closed form
    REQUIRE_THAT(setcover_fill_probability(100, 50, 0.001),
                 Catch::Matchers::WithinAbs(0.205663898115224608, 1e-12));
    // delta -> 1 drives p -> 0 (slowly: the decay is logarithmic in 1-delta)
    REQUIRE(setcover_fill_probability(100, 50, 0.9) >
            setcover_fill_probability(100, 50, 0.999999));
    REQUIRE(setcover_fill_probability(100, 50, 0.999999) >
            setcover_fill_probability(100, 50, 1.0 - 1e-15));
    REQUIRE(setcover_fill_probability(100, 50, 1.0 - 1e-15) < 0.03);
    REQUIRE_THROWS_AS(setcover_fill_probability(0, 5, 0.5), std::invalid_argument);
    REQUIRE_THROWS_AS(setcover_fill_probability(5, 5, 0.0), std::invalid_argument);
}

TEST_CASE("set cover generator fill rate", "[problems]") {
    RngStream rng(43);
    const double p = setcover_fill_probability(100, 200, 0.001);
    const SetCoverInstance sc = gen_setcover_instance(100, 200, 0.001, rng);
    double ones = 0;
    for (auto a : sc.membership)
        ones += a;
    const double rate = ones / static_cast<double>(sc.membership.size());
    REQUIRE(std::abs(rate - p) < 0.02);

    // generated instances are full-cover with high probability by construction
    REQUIRE(eval_setcover(sc, Bitstring::from_string(std::string(200, '1'))).uncovered == 0);
}

TEST_CASE("brute force optima agree with independent DP oracles", "[problems][slow]") {
    RngStream rng(44);
    const std::size_t n = 14;
    for (int inst_i = 0; inst_i < 10; ++inst_i) {
        const auto ss = gen_subsetsum_instance(n, rng);
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
            best = std::min(best, eval_subset_sum(ss, from_mask(mask, n)));
        const auto reach = achievable_sums(ss.weights);
        std::int64_t dp_best = std::numeric_limits<std::int64_t>::max();
        for (std::int64_t s = 0; s < static_cast<std::int64_t>(reach.size()); ++s)
            if (reach[static_cast<std::size_t>(s)])
                dp_best = std::min(dp_best, std::abs(ss.target - s));
        REQUIRE(best == dp_best);
    }
    for (int inst_i = 0; inst_i < 10; ++inst_i) {
        const auto kp = gen_knapsack_instance(n, rng);
        std::int64_t best = std::numeric_limits<std::int64_t>::min();
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
            best = std::max(best, eval_knapsack(kp, from_mask(mask, n)));
        REQUIRE(best == knapsack_dp(kp));
    }
    for (int inst_i = 0; inst_i < 10; ++inst_i) {
        const auto sc = gen_setcover_instance(8, n, 0.001, rng);
        const SetCoverIndex index(sc);
        // route 1: raw matrix evaluator; route 2: index-based coverage
        std::int64_t best1 = std::numeric_limits<std::int64_t>::max();
        std::int64_t best2 = std::numeric_limits<std::int64_t>::max();
        std::vector<std::int32_t> counts;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            const Bitstring x = from_mask(mask, n);
            const auto e = eval_setcover(sc, x);
            if (e.feasible())
                best1 = std::min(best1, e.sets_used);
            index.coverage(x, counts);
            bool feasible = true;
            for (auto c : counts)
                feasible = feasible && c > 0;
            if (feasible)
                best2 = std::min(best2, static_cast<std::int64_t>(x.count_ones()));
        }
        REQUIRE(best1 == best2);
    }
}

TEST_CASE("instance serialization round-trips bit-exactly", "[problems]") {
    RngStream rng(45);
    std::vector<StoredInstance> stored;
    stored.push_back({"linear", 1, gen_linear_instance(7, rng)});
    stored.push_back({"subsetsum", 2, gen_subsetsum_instance(5, rng)});
    stored.push_back({"knapsack", 3, gen_knapsack_instance(6, rng)});
    stored.push_back({"setcover", 4, gen_setcover_instance(4, 9, 0.01, rng)});
    stored.push_back({"cocz", 5, COCZInstance{30, 15}});

    for (const auto& st : stored) {
        std::ostringstream out;
        write_instance(out, st);
        std::istringstream in(out.str());
        const StoredInstance round = read_instance(in);
        REQUIRE(round.problem == st.problem);
        REQUIRE(round.seed == st.seed);
        REQUIRE(round.instance == st.instance);
        std::ostringstream out2;
        write_instance(out2, round);
        REQUIRE(out2.str() == out.str());
    }

    std::istringstream bad("mystery 3 0 1\n1 2 3\n");
    REQUIRE_THROWS(read_instance(bad));
}
