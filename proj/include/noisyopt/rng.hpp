#pragma once

#include <array>
#include <bit>
#include <cassert>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>

namespace noisyopt {

// Any source of uniform randomness the variation operators and samplers can
// draw from. RngStream satisfies it; tests substitute scripted fakes.
template <typename R>
concept UniformRng = requires(R r, double p, std::uint64_t bound) {
    { r.next_u64() } -> std::convertible_to<std::uint64_t>;
    { r.next_double() } -> std::convertible_to<double>;
    { r.next_below(bound) } -> std::convertible_to<std::uint64_t>;
    { r.next_bernoulli(p) } -> std::convertible_to<bool>;
};

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 output mixer. Used for seeding and stream derivation only.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

} // namespace detail

// Inverse of the standard normal CDF, Wichura's AS241 (PPND16) rational
// approximations. Chosen over std::normal_distribution because the draw
// sequence must replay identically across standard library implementations:
// exactly one uniform variate is consumed per Gaussian variate.
inline double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("inverse_normal_cdf: p must lie in (0,1)");

    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                  6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
              1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return q * num / den;
    }

    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        x = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        x = num / den;
    }
    return q < 0.0 ? -x : x;
}

// Seeded, splittable random stream (xoshiro256++ core, SplitMix64 seeding).
//
// Replay contract: a stream is identified by its 64-bit key. Identical keys
// produce identical draw sequences; substream(i) derives a stream whose key
// is mix64(key + kGolden*(i+1)), so (seed, index path) fully determines every
// draw in a run. Gaussian variates consume exactly one next_double() each.
class RngStream {
public:
    RngStream() : RngStream(0) {}

    explicit RngStream(std::uint64_t seed) : key_(seed) {
        std::uint64_t s = seed;
        for (auto& w : state_) {
            s += detail::kGolden;
            w = detail::mix64(s);
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0)
            state_[0] = 1; // xoshiro must not start at the all-zero state
    }

    std::uint64_t key() const { return key_; }

    RngStream substream(std::uint64_t index) const {
        return RngStream(detail::mix64(key_ + detail::kGolden * (index + 1)));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = std::rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = std::rotl(state_[3], 45);
        return result;
    }

    // uniform in [0,1), 53 random bits
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in (0,1); never returns an endpoint, so safe for the inverse CDF
    double next_open_double() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // uniform integer in [0, bound); bound must be >= 1.
    // bound == 1 short-circuits without consuming a draw.
    std::uint64_t next_below(std::uint64_t bound) {
        assert(bound >= 1);
        if (bound <= 1)
            return 0;
        const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(bound - 1);
        for (;;) {
            const std::uint64_t v = next_u64() & mask;
            if (v < bound)
                return v;
        }
    }

    bool next_bernoulli(double p) { return next_double() < p; }

    // N(0, sigma), by inversion; one uniform draw per call, also when sigma == 0
    double next_gaussian(double sigma) {
        return sigma * inverse_normal_cdf(next_open_double());
    }

    bool operator==(const RngStream&) const = default;

private:
    std::uint64_t key_;
    std::array<std::uint64_t, 4> state_;
};

static_assert(UniformRng<RngStream>);

} // namespace noisyopt
