#pragma once

#include <cstdint>
#include <deque>
#include <stdexcept>

// Scripted random source for forcing specific operator outcomes in tests.
// Doubles feed next_double()/next_bernoulli(), ints feed next_below().
struct FakeRng {
    std::deque<double> doubles;
    std::deque<std::uint64_t> ints;

    std::uint64_t next_u64() { return pop_int(); }

    double next_double() {
        if (doubles.empty())
            throw std::runtime_error("FakeRng: double script exhausted");
        const double v = doubles.front();
        doubles.pop_front();
        return v;
    }

    std::uint64_t next_below(std::uint64_t bound) {
        if (bound <= 1)
            return 0;
        const std::uint64_t v = pop_int();
        if (v >= bound)
            throw std::runtime_error("FakeRng: scripted int out of range");
        return v;
    }

    bool next_bernoulli(double p) { return next_double() < p; }

    std::uint64_t pop_int() {
        if (ints.empty())
            throw std::runtime_error("FakeRng: int script exhausted");
        const std::uint64_t v = ints.front();
        ints.pop_front();
        return v;
    }
};
