#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

#include "noisyopt/bitstring.hpp"
#include "noisyopt/problems.hpp"

namespace noisyopt {

// Pareto dominance under per-objective senses: a dominates b iff a is no
// worse in both objectives and strictly better in at least one.
struct DominanceRelation {
    Sense sense1 = Sense::maximize;
    Sense sense2 = Sense::maximize;

    double gain1(const BiObjectiveValue& v) const {
        return sense1 == Sense::maximize ? v.f1 : -v.f1;
    }
    double gain2(const BiObjectiveValue& v) const {
        return sense2 == Sense::maximize ? v.f2 : -v.f2;
    }

    bool dominates(const BiObjectiveValue& a, const BiObjectiveValue& b) const {
        const double a1 = gain1(a), a2 = gain2(a), b1 = gain1(b), b2 = gain2(b);
        return a1 >= b1 && a2 >= b2 && (a1 > b1 || a2 > b2);
    }

    bool weakly_dominates(const BiObjectiveValue& a, const BiObjectiveValue& b) const {
        return gain1(a) >= gain1(b) && gain2(a) >= gain2(b);
    }
};

// Non-dominated sorting for two objectives by dimension sweep: points sorted
// by decreasing first gain are assigned to the earliest front whose maximum
// second gain does not cover them. Exact duplicates share a front. O(n log n).
inline std::vector<std::vector<std::size_t>>
non_dominated_sort(std::span<const BiObjectiveValue> points, const DominanceRelation& dom = {}) {
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> fronts;
    if (n == 0)
        return fronts;

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double a1 = dom.gain1(points[a]), b1 = dom.gain1(points[b]);
        if (a1 != b1)
            return a1 > b1;
        const double a2 = dom.gain2(points[a]), b2 = dom.gain2(points[b]);
        if (a2 != b2)
            return a2 > b2;
        return a < b;
    });

    std::vector<double> front_tail; // max gain2 per front, non-increasing
    std::size_t i = 0;
    while (i < n) {
        // group exact duplicates; they never dominate each other
        std::size_t j = i;
        const double g1 = dom.gain1(points[order[i]]);
        const double g2 = dom.gain2(points[order[i]]);
        while (j + 1 < n && dom.gain1(points[order[j + 1]]) == g1 &&
               dom.gain2(points[order[j + 1]]) == g2)
            ++j;

        // first front whose tail cannot dominate this vector
        const auto it = std::upper_bound(front_tail.begin(), front_tail.end(), g2,
                                         [](double v, double tail) { return v > tail; });
        const std::size_t front_index = static_cast<std::size_t>(it - front_tail.begin());
        if (front_index == fronts.size()) {
            fronts.emplace_back();
            front_tail.push_back(g2);
        } else {
            front_tail[front_index] = std::max(front_tail[front_index], g2);
        }
        for (std::size_t k = i; k <= j; ++k)
            fronts[front_index].push_back(order[k]);
        i = j + 1;
    }
    return fronts;
}

// NSGA-II crowding distance within one front. Boundary points per objective
// get infinity; interior points sum normalized gaps to their neighbours.
inline std::vector<double> crowding_distance(std::span<const BiObjectiveValue> front) {
    const std::size_t n = front.size();
    std::vector<double> dist(n, 0.0);
    if (n == 0)
        return dist;
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        return dist;
    }
    std::vector<std::size_t> order(n);
    for (int objective = 0; objective < 2; ++objective) {
        for (std::size_t i = 0; i < n; ++i)
            order[i] = i;
        const auto value = [&](std::size_t i) {
            return objective == 0 ? front[i].f1 : front[i].f2;
        };
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
        const double lo = value(order.front()), hi = value(order.back());
        dist[order.front()] = std::numeric_limits<double>::infinity();
        dist[order.back()] = std::numeric_limits<double>::infinity();
        if (hi == lo)
            continue;
        for (std::size_t k = 1; k + 1 < n; ++k)
            dist[order[k]] += (value(order[k + 1]) - value(order[k - 1])) / (hi - lo);
    }
    return dist;
}

// Archive of mutually non-dominated solutions under their stored objective
// values, keyed by bitstring: duplicate strings are never admitted twice.
class ParetoArchive {
public:
    struct Entry {
        Bitstring solution;
        BiObjectiveValue value;
    };

    explicit ParetoArchive(DominanceRelation dom = {}) : dom_(dom) {}

    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool contains(const Bitstring& x) const { return members_.contains(x); }

    // Hill-climber acceptance: reject the challenger if its string is already
    // present or any stored member dominates its value; otherwise admit it
    // and drop every member it dominates.
    bool try_insert(const Bitstring& x, const BiObjectiveValue& v) {
        if (members_.contains(x))
            return false;
        for (const Entry& e : entries_)
            if (dom_.dominates(e.value, v))
                return false;
        erase_if_dominated_by(v);
        entries_.push_back({x, v});
        members_.insert(x);
        return true;
    }

    // Batch update: admit every new string (first value wins for duplicates),
    // then prune until no member dominates another.
    void merge(std::span<const Entry> batch) {
        for (const Entry& e : batch)
            if (members_.insert(e.solution).second)
                entries_.push_back(e);
        std::vector<BiObjectiveValue> values;
        values.reserve(entries_.size());
        for (const Entry& e : entries_)
            values.push_back(e.value);
        const auto fronts = non_dominated_sort(values, dom_);
        if (!fronts.empty() && fronts[0].size() != entries_.size()) {
            std::vector<std::size_t> keep = fronts[0];
            std::sort(keep.begin(), keep.end());
            std::vector<Entry> kept;
            kept.reserve(keep.size());
            for (std::size_t idx : keep)
                kept.push_back(std::move(entries_[idx]));
            members_.clear();
            for (const Entry& e : kept)
                members_.insert(e.solution);
            entries_ = std::move(kept);
        }
    }

private:
    void erase_if_dominated_by(const BiObjectiveValue& v) {
        std::erase_if(entries_, [&](const Entry& e) {
            if (dom_.dominates(v, e.value)) {
                members_.erase(e.solution);
                return true;
            }
            return false;
        });
    }

    DominanceRelation dom_;
    std::vector<Entry> entries_;
    std::unordered_set<Bitstring, BitstringHash> members_;
};

} // namespace noisyopt
