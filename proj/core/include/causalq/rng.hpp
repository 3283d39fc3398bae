#pragma once

#include <cstdint>

namespace causalq {

// Counter-based uniform variates: every draw is a pure function of
// (seed, index), so consumers can draw in any order — or in parallel —
// and still reproduce byte-identical streams.
std::uint64_t mix64(std::uint64_t z);
double counter_uniform(std::uint64_t seed, std::uint64_t index);

// Sequential convenience wrapper over the counter stream.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed) {}

    double next_uniform();
    // Box-Muller; consumes uniforms from the same stream.
    double next_gaussian();
    std::uint64_t next_index() const { return index_; }

private:
    std::uint64_t seed_;
    std::uint64_t index_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace causalq
