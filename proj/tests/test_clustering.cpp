#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "noisyopt/clustering.hpp"

using namespace noisyopt;

TEST_CASE("kmeans partitions all points into k labels", "[clustering]") {
    RngStream rng(80);
    std::vector<Point2> pts(60);
    for (auto& p : pts) {
        p.x = rng.next_double() * 10;
        p.y = rng.next_double() * 10;
    }
    const auto labels = kmeans_clusters(pts, 5, rng);
    REQUIRE(labels.size() == pts.size());
    for (auto l : labels)
        REQUIRE(l < 5);

    RngStream r1(81), r2(81);
    REQUIRE(kmeans_clusters(pts, 5, r1) == kmeans_clusters(pts, 5, r2));
    REQUIRE_THROWS_AS(kmeans_clusters(pts, 0, rng), std::invalid_argument);
    REQUIRE_THROWS_AS(kmeans_clusters(pts, 61, rng), std::invalid_argument);
}

TEST_CASE("kmeans separates well-separated blobs", "[clustering]") {
    RngStream rng(82);
    std::vector<Point2> pts;
    for (int i = 0; i < 20; ++i)
        pts.push_back({rng.next_double(), rng.next_double()});
    for (int i = 0; i < 20; ++i)
        pts.push_back({100 + rng.next_double(), 100 + rng.next_double()});
    const auto labels = kmeans_clusters(pts, 2, rng);
    for (int i = 1; i < 20; ++i)
        REQUIRE(labels[i] == labels[0]);
    for (int i = 21; i < 40; ++i)
        REQUIRE(labels[i] == labels[20]);
    REQUIRE(labels[0] != labels[20]);
}

TEST_CASE("kmeans copes with coincident points", "[clustering]") {
    RngStream rng(83);
    std::vector<Point2> pts(10, Point2{1.0, 1.0});
    const auto labels = kmeans_clusters(pts, 3, rng);
    REQUIRE(labels.size() == 10);
}

TEST_CASE("single linkage splits chained groups", "[clustering]") {
    const std::vector<Point2> pts{{0.0, 0}, {0.1, 0}, {0.2, 0}, {10.0, 0}, {10.1, 0}};
    const auto labels = single_linkage_clusters(pts, 2);
    REQUIRE(labels[0] == labels[1]);
    REQUIRE(labels[1] == labels[2]);
    REQUIRE(labels[3] == labels[4]);
    REQUIRE(labels[0] != labels[3]);

    const auto all = single_linkage_clusters(pts, 5);
    REQUIRE(std::set<std::size_t>(all.begin(), all.end()).size() == 5);
    REQUIRE_THROWS_AS(single_linkage_clusters(pts, 0), std::invalid_argument);
}
