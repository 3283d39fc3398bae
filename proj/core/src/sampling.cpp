#include "causalq/sampling.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "causalq/rng.hpp"

namespace causalq {

OutcomeCounts sample_shots(const OutcomeDistribution& d, std::uint64_t shots,
                           std::uint64_t seed) {
    if (shots == 0) {
        throw std::invalid_argument("sample_shots: need at least one shot");
    }
    if (d.labels.size() != d.probs.size() || d.labels.empty()) {
        throw std::invalid_argument("sample_shots: malformed distribution");
    }
    double total = 0.0;
    std::vector<double> cdf(d.probs.size());
    for (std::size_t i = 0; i < d.probs.size(); ++i) {
        if (d.probs[i] < -1e-12) {
            throw std::invalid_argument("sample_shots: negative probability");
        }
        total += std::max(0.0, d.probs[i]);
        cdf[i] = total;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("sample_shots: probabilities do not sum to 1");
    }

    OutcomeCounts out;
    out.labels = d.labels;
    out.counts.assign(d.labels.size(), 0);
    out.shots = shots;
    out.seed = seed;
    out.roles = d.roles;
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = counter_uniform(seed, s) * total;
        std::size_t lo = 0, hi = cdf.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (u < cdf[mid]) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        ++out.counts[lo];
    }
    return out;
}

namespace {

ConditionalTable conditionals_from(const std::vector<std::string>& labels,
                                   const std::vector<double>& weight,
                                   const BitRoles& roles) {
    if (!roles.control || !roles.target) {
        throw std::invalid_argument("conditional_table: labels carry no control/target roles");
    }
    double mass[2] = {0.0, 0.0};
    double hit[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::string& label = labels[i];
        if (*roles.control >= label.size() || *roles.target >= label.size()) {
            throw std::invalid_argument("conditional_table: bit role outside label");
        }
        const int c = label[*roles.control] - '0';
        const int t = label[*roles.target] - '0';
        if ((c != 0 && c != 1) || (t != 0 && t != 1)) {
            throw std::invalid_argument("conditional_table: non-binary label");
        }
        mass[c] += weight[i];
        hit[c][t] += weight[i];
    }
    ConditionalTable table;
    for (int c = 0; c < 2; ++c) {
        if (mass[c] > 0.0) {
            table.rows[c] = {hit[c][0] / mass[c], hit[c][1] / mass[c]};
        }
    }
    return table;
}

}  // namespace

ConditionalTable conditional_table(const OutcomeDistribution& d) {
    return conditionals_from(d.labels, d.probs, d.roles);
}

ConditionalTable conditional_table(const OutcomeCounts& k) {
    std::vector<double> weight(k.counts.size());
    for (std::size_t i = 0; i < k.counts.size(); ++i) {
        weight[i] = static_cast<double>(k.counts[i]);
    }
    return conditionals_from(k.labels, weight, k.roles);
}

std::optional<double> conditional_tv(const ConditionalTable& t) {
    if (!t.rows[0] || !t.rows[1]) return std::nullopt;
    const auto& p = *t.rows[0];
    const auto& q = *t.rows[1];
    return 0.5 * (std::abs(p[0] - q[0]) + std::abs(p[1] - q[1]));
}

SwitchExperimentResult run_switch_experiment(std::uint64_t shots, std::uint64_t seed,
                                const std::optional<NoiseModel>& noise) {
    const Circuit circuit = build_switch_circuit(noise);
    SwitchExperimentResult result;
    result.exact = simulate_exact(circuit);
    result.joint = sample_shots(result.exact, shots, seed);
    result.conditionals = conditional_table(result.joint);
    return result;
}

}  // namespace causalq
