#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "noisyopt/rng.hpp"

namespace noisyopt {

// Fixed-length binary string, the search-space element of every problem here.
// Length is set at construction and never changes.
class Bitstring {
public:
    explicit Bitstring(std::size_t n) : bits_(checked_length(n), 0) {}

    Bitstring(std::initializer_list<int> bits) : bits_() {
        bits_.reserve(bits.size());
        for (int b : bits)
            bits_.push_back(b ? 1 : 0);
        checked_length(bits_.size());
    }

    static Bitstring from_string(const std::string& s) {
        Bitstring x(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] != '0' && s[i] != '1')
                throw std::invalid_argument("Bitstring: expected only '0'/'1'");
            x.bits_[i] = static_cast<std::uint8_t>(s[i] - '0');
        }
        return x;
    }

    std::size_t size() const { return bits_.size(); }

    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }
    void flip(std::size_t i) { bits_[i] ^= 1; }

    std::size_t count_ones() const {
        return std::accumulate(bits_.begin(), bits_.end(), std::size_t{0});
    }

    std::string to_string() const {
        std::string s(bits_.size(), '0');
        for (std::size_t i = 0; i < bits_.size(); ++i)
            s[i] = static_cast<char>('0' + bits_[i]);
        return s;
    }

    bool operator==(const Bitstring&) const = default;

    std::size_t hash() const {
        // FNV-1a over the byte representation; used for duplicate detection
        std::uint64_t h = 1469598103934665603ULL;
        for (std::uint8_t b : bits_) {
            h ^= b;
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }

private:
    static std::size_t checked_length(std::size_t n) {
        if (n == 0)
            throw std::invalid_argument("Bitstring: length must be positive");
        return n;
    }

    std::vector<std::uint8_t> bits_;
};

struct BitstringHash {
    std::size_t operator()(const Bitstring& x) const { return x.hash(); }
};

inline std::size_t hamming_distance(const Bitstring& a, const Bitstring& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("hamming_distance: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d += a[i] != b[i];
    return d;
}

// Each bit independently 0 or 1 with probability 1/2.
// Draw pattern: one Bernoulli(1/2) per position, in position order.
template <UniformRng Rng>
Bitstring random_bitstring(std::size_t n, Rng& rng) {
    Bitstring x(n);
    for (std::size_t i = 0; i < n; ++i)
        x.set(i, rng.next_bernoulli(0.5));
    return x;
}

// Standard bitwise mutation: each bit flips independently with the given rate.
// Draw pattern: one Bernoulli(rate) per position, in position order.
template <UniformRng Rng>
Bitstring bitwise_mutate(const Bitstring& x, double rate, Rng& rng) {
    if (!(rate >= 0.0 && rate <= 1.0))
        throw std::invalid_argument("bitwise_mutate: rate must lie in [0,1]");
    Bitstring y = x;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (rng.next_bernoulli(rate))
            y.flip(i);
    return y;
}

// Flips exactly one uniformly chosen position.
template <UniformRng Rng>
Bitstring one_bit_mutate(const Bitstring& x, Rng& rng) {
    Bitstring y = x;
    y.flip(static_cast<std::size_t>(rng.next_below(y.size())));
    return y;
}

// Uniform crossover producing a complementary pair: at each position one
// child receives the bit of parent a and the other the bit of parent b, so
// per-position allele counts are preserved across the pair.
// Draw pattern: one Bernoulli(1/2) per position; true means the first child
// takes the bit of a.
template <UniformRng Rng>
std::pair<Bitstring, Bitstring> uniform_crossover_pair(const Bitstring& a,
                                                       const Bitstring& b,
                                                       Rng& rng) {
    if (a.size() != b.size())
        throw std::invalid_argument("uniform_crossover_pair: length mismatch");
    Bitstring c1(a.size()), c2(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool take_a = rng.next_bernoulli(0.5);
        c1.set(i, take_a ? a[i] : b[i]);
        c2.set(i, take_a ? b[i] : a[i]);
    }
    return {std::move(c1), std::move(c2)};
}

} // namespace noisyopt
