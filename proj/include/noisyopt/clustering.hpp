#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "noisyopt/rng.hpp"

namespace noisyopt {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

namespace detail {

inline double sq_dist(const Point2& a, const Point2& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

} // namespace detail

// Lloyd's k-means in 2-D with k-means++ seeding from the supplied stream.
// Empty clusters are reseeded to the point farthest from its assigned centre.
// Returns the cluster label of each point.
template <UniformRng Rng>
std::vector<std::size_t> kmeans_clusters(std::span<const Point2> points, std::size_t k,
                                         Rng& rng, int max_iters = 20) {
    const std::size_t n = points.size();
    if (k == 0 || k > n)
        throw std::invalid_argument("kmeans_clusters: need 1 <= k <= point count");

    // k-means++ seeding
    std::vector<Point2> centres;
    centres.reserve(k);
    centres.push_back(points[rng.next_below(n)]);
    std::vector<double> d2(n);
    while (centres.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centres)
                best = std::min(best, detail::sq_dist(points[i], c));
            d2[i] = best;
            total += best;
        }
        if (total == 0.0) {
            // all remaining points coincide with existing centres
            centres.push_back(points[rng.next_below(n)]);
            continue;
        }
        double target = rng.next_double() * total;
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            target -= d2[i];
            if (target <= 0.0) {
                pick = i;
                break;
            }
        }
        centres.push_back(points[pick]);
    }

    std::vector<std::size_t> label(n, 0);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double bestd = detail::sq_dist(points[i], centres[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double d = detail::sq_dist(points[i], centres[c]);
                if (d < bestd) {
                    bestd = d;
                    best = c;
                }
            }
            if (label[i] != best) {
                label[i] = best;
                changed = true;
            }
        }

        std::vector<Point2> sums(k);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sums[label[i]].x += points[i].x;
            sums[label[i]].y += points[i].y;
            ++counts[label[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // move the centre onto the point farthest from its own centre
                std::size_t far = 0;
                double fard = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = detail::sq_dist(points[i], centres[label[i]]);
                    if (d > fard && counts[label[i]] > 1) {
                        fard = d;
                        far = i;
                    }
                }
                centres[c] = points[far];
                --counts[label[far]];
                label[far] = c;
                counts[c] = 1;
                changed = true;
            } else {
                centres[c] = {sums[c].x / static_cast<double>(counts[c]),
                              sums[c].y / static_cast<double>(counts[c])};
            }
        }
        if (!changed)
            break;
    }
    return label;
}

// Single-linkage hierarchical agglomeration cut at k clusters: union the
// closest pair of components until exactly k remain. Euclidean distance,
// deterministic tie-breaking by pair index.
inline std::vector<std::size_t> single_linkage_clusters(std::span<const Point2> points,
                                                        std::size_t k) {
    const std::size_t n = points.size();
    if (k == 0 || k > n)
        throw std::invalid_argument("single_linkage_clusters: need 1 <= k <= point count");

    struct Edge {
        double d2;
        std::uint32_t a, b;
    };
    std::vector<Edge> edges;
    edges.reserve(n * (n - 1) / 2);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            edges.push_back({detail::sq_dist(points[i], points[j]), i, j});
    std::sort(edges.begin(), edges.end(), [](const Edge& l, const Edge& r) {
        if (l.d2 != r.d2)
            return l.d2 < r.d2;
        return l.a != r.a ? l.a < r.a : l.b < r.b;
    });

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    const auto find = [&](std::size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };

    std::size_t components = n;
    for (const Edge& e : edges) {
        if (components == k)
            break;
        const std::size_t ra = find(e.a), rb = find(e.b);
        if (ra != rb) {
            parent[std::max(ra, rb)] = std::min(ra, rb);
            --components;
        }
    }

    // relabel components as 0..k-1 in order of first appearance
    std::vector<std::size_t> label(n), remap(n, n);
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (remap[r] == n)
            remap[r] = next++;
        label[i] = remap[r];
    }
    return label;
}

} // namespace noisyopt
