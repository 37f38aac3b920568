#pragma once

#include <cstdint>

namespace noisyopt {

// Counts fitness function evaluations. One tick per solution evaluation,
// regardless of how many objectives or constraints that evaluation touches;
// this is the unit every budget in the experiment tables is expressed in.
class EvaluationCounter {
public:
    std::uint64_t count() const { return count_; }
    void tick() { ++count_; }
    void reset() { count_ = 0; }

private:
    std::uint64_t count_ = 0;
};

} // namespace noisyopt
