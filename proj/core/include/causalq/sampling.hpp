#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "causalq/simulate.hpp"

namespace causalq {

// Multinomial sample: shot s consumes exactly the (seed, s) counter variate,
// so counts are reproducible and independent of evaluation order.
OutcomeCounts sample_shots(const OutcomeDistribution& d, std::uint64_t shots,
                           std::uint64_t seed);

// rows[c] = {P(target=0 | control=c), P(target=1 | control=c)}; a row is
// absent when its conditioning mass (or count) is zero.
struct ConditionalTable {
    std::array<std::optional<std::array<double, 2>>, 2> rows;
};

ConditionalTable conditional_table(const OutcomeDistribution& d);
ConditionalTable conditional_table(const OutcomeCounts& k);

// Total variation between the two rows; absent if either row is undefined.
std::optional<double> conditional_tv(const ConditionalTable& t);

struct SwitchExperimentResult {
    OutcomeDistribution exact;
    OutcomeCounts joint;
    ConditionalTable conditionals;
};

// Build the switch circuit (optionally noisy), sample it, and tabulate the
// per-control conditional target distribution from the counts.
SwitchExperimentResult run_switch_experiment(
    std::uint64_t shots, std::uint64_t seed,
    const std::optional<NoiseModel>& noise = std::nullopt);

}  // namespace causalq
