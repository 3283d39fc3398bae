#include "causalq/rng.hpp"

#include <cmath>

namespace causalq {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t z = mix64(mix64(seed) ^ mix64(index + 1));
    // 53-bit mantissa, uniform in [0, 1).
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

double SeededRng::next_uniform() {
    return counter_uniform(seed_, index_++);
}

double SeededRng::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = next_uniform();
    while (u1 <= 0.0) u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

}  // namespace causalq
