#include <catch2/catch_amalgamated.hpp>

#include "fake_rng.hpp"
#include "noisyopt/bitstring.hpp"

using namespace noisyopt;

TEST_CASE("bitstring basics", "[bitstring]") {
    REQUIRE_THROWS_AS(Bitstring(0), std::invalid_argument);
    Bitstring x = Bitstring::from_string("1011");
    REQUIRE(x.size() == 4);
    REQUIRE(x.count_ones() == 3);
    REQUIRE(x.to_string() == "1011");
    REQUIRE_THROWS(Bitstring::from_string("10x1"));
}

TEST_CASE("random_bitstring forced draws", "[bitstring]") {
    FakeRng rng;
    rng.doubles = {0.9}; // Bernoulli(1/2) fails -> bit 0
    REQUIRE(random_bitstring(1, rng).to_string() == "0");
}

TEST_CASE("random_bitstring equal seeds agree", "[bitstring]") {
    RngStream a(77), b(77);
    REQUIRE(random_bitstring(4, a) == random_bitstring(4, b));
}

TEST_CASE("random_bitstring ones count concentrates", "[bitstring]") {
    RngStream rng(3);
    const auto x = random_bitstring(1000, rng);
    REQUIRE(x.count_ones() >= 400);
    REQUIRE(x.count_ones() <= 600);
}

TEST_CASE("bitwise_mutate rate endpoints", "[bitstring]") {
    RngStream rng(5);
    const Bitstring x = Bitstring::from_string("1010");
    REQUIRE(bitwise_mutate(x, 0.0, rng).to_string() == "1010");
    REQUIRE(bitwise_mutate(x, 1.0, rng).to_string() == "0101");
    REQUIRE_THROWS_AS(bitwise_mutate(x, -0.1, rng), std::invalid_argument);
    REQUIRE_THROWS_AS(bitwise_mutate(x, 1.5, rng), std::invalid_argument);
}

TEST_CASE("bitwise_mutate mean flip count", "[bitstring]") {
    const std::size_t n = 100;
    RngStream rng(8);
    const Bitstring zeros(n);
    std::size_t flips = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t)
        flips += bitwise_mutate(zeros, 1.0 / n, rng).count_ones();
    const double mean_flips = static_cast<double>(flips) / trials;
    REQUIRE(mean_flips > 0.9);
    REQUIRE(mean_flips < 1.1);
}

TEST_CASE("one_bit_mutate", "[bitstring]") {
    RngStream rng(4);
    REQUIRE(one_bit_mutate(Bitstring::from_string("1"), rng).to_string() == "0");

    FakeRng fake;
    fake.ints = {0};
    REQUIRE(one_bit_mutate(Bitstring::from_string("11"), fake).to_string() == "01");

    for (int i = 0; i < 200; ++i) {
        const Bitstring x = random_bitstring(20, rng);
        REQUIRE(hamming_distance(x, one_bit_mutate(x, rng)) == 1);
    }
}

TEST_CASE("uniform crossover identical parents", "[bitstring]") {
    RngStream rng(6);
    const Bitstring a = Bitstring::from_string("11");
    auto [c1, c2] = uniform_crossover_pair(a, a, rng);
    REQUIRE(c1.to_string() == "11");
    REQUIRE(c2.to_string() == "11");
}

TEST_CASE("uniform crossover children are complementary", "[bitstring]") {
    RngStream rng(9);
    const Bitstring a = Bitstring::from_string("11");
    const Bitstring b = Bitstring::from_string("00");
    auto [c1, c2] = uniform_crossover_pair(a, b, rng);
    for (std::size_t i = 0; i < 2; ++i)
        REQUIRE((c1[i] != c2[i]));
}

TEST_CASE("uniform crossover forced assignment", "[bitstring]") {
    FakeRng fake;
    fake.doubles = {0.0, 0.9}; // take a at position 0, take b at position 1
    const Bitstring a = Bitstring::from_string("10");
    const Bitstring b = Bitstring::from_string("01");
    auto [c1, c2] = uniform_crossover_pair(a, b, fake);
    REQUIRE(c1.to_string() == "11");
    REQUIRE(c2.to_string() == "00");
}

TEST_CASE("uniform crossover rejects length mismatch", "[bitstring]") {
    RngStream rng(1);
    REQUIRE_THROWS_AS(
        uniform_crossover_pair(Bitstring(3), Bitstring(4), rng), std::invalid_argument);
}

TEST_CASE("variation preserves length and never invents alleles", "[bitstring]") {
    RngStream rng(12);
    for (int t = 0; t < 200; ++t) {
        const Bitstring a = random_bitstring(33, rng);
        const Bitstring b = random_bitstring(33, rng);
        auto [c1, c2] = uniform_crossover_pair(a, b, rng);
        REQUIRE(c1.size() == 33);
        REQUIRE(c2.size() == 33);
        for (std::size_t i = 0; i < 33; ++i) {
            // each child bit matches at least one parent, and the pair keeps
            // the per-position allele count
            REQUIRE((c1[i] == a[i] || c1[i] == b[i]));
            REQUIRE((c2[i] == a[i] || c2[i] == b[i]));
            REQUIRE(static_cast<int>(c1[i]) + static_cast<int>(c2[i]) ==
                    static_cast<int>(a[i]) + static_cast<int>(b[i]));
        }
        REQUIRE(bitwise_mutate(a, 0.3, rng).size() == 33);
        REQUIRE(one_bit_mutate(a, rng).size() == 33);
    }
}
