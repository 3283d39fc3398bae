#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causalq/circuit.hpp"

namespace causalq {

// Character positions within each outcome label (classical bit b is the
// label's b-th character, so bit 0 is the most significant).
struct BitRoles {
    std::optional<std::size_t> control;
    std::optional<std::size_t> target;
};

struct OutcomeDistribution {
    std::vector<std::string> labels;
    std::vector<double> probs;
    BitRoles roles;
};

struct OutcomeCounts {
    std::vector<std::string> labels;
    std::vector<std::uint64_t> counts;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    BitRoles roles;
};

// Exact terminal-measurement distribution over all 2^m bit labels (zero
// entries included), with qubit 0 as the most significant index bit.
// The statevector path rejects circuits containing noise ops; the density
// path handles both. simulate_exact dispatches on Circuit::has_noise().
OutcomeDistribution simulate_statevector(const Circuit& c);
OutcomeDistribution simulate_density(const Circuit& c);
OutcomeDistribution simulate_exact(const Circuit& c);

}  // namespace causalq
