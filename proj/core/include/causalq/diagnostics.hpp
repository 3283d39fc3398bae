#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causalq/sampling.hpp"
#include "causalq/scenarios.hpp"

namespace causalq {

// Tolerance for calling two exactly-computed probabilities equal.
inline constexpr double kEpsExact = 1e-6;

enum class Verdict { Pass, Violated, NotApplicable, Undefined };
std::string verdict_name(Verdict v);

enum class Classification {
    ConsistentClassical,
    CausalSuperpositionLikely,
    FragileSignal,
    RobustViolation,
};
std::string classification_name(Classification c);

// One evaluated consistency rule.  `control` is the conditioning effect label
// ("0", "1", "+", or "" for unconditioned); `quantity` is the computed
// statistic (a total-variation distance, or the convex-fit residual for rule
// 4) and is meaningful only when the verdict is pass or violated.
struct RuleCheck {
    int rule = 0;
    std::string control;
    double quantity = 0.0;
    double threshold = 0.0;
    Verdict verdict = Verdict::NotApplicable;
    std::string detail;
};

// Discrepancy between the interventional and observational arms at one
// conditioning event: per-outcome |P_do - P_obs| and their total-variation
// aggregate.  `defined` is false when the conditioning event has zero mass
// in either arm.
struct DeltaCdEntry {
    std::string control;
    bool defined = false;
    double aggregate = 0.0;
    std::array<double, 2> per_outcome{0.0, 0.0};
};

struct ConvexFitResult {
    double lambda_star = 0.0;
    double residual = 0.0;
};

double tv_distance(const std::array<double, 2>& p, const std::array<double, 2>& q);
// Distribution overload: labels must match position by position.
double tv_distance(const OutcomeDistribution& p, const OutcomeDistribution& q);

// Best convex mixture of p0 and p1 approximating p_plus, minimizing total
// variation over the mixing weight lambda in [0, 1].
ConvexFitResult convex_mixture_fit(const std::array<double, 2>& p_plus,
                                   const std::array<double, 2>& p0,
                                   const std::array<double, 2>& p1);

DeltaCdEntry delta_cd(const CausalScenario& s, const std::string& control_effect);

// Rule 1: with A declared parentless, intervening on A must not shift B's
// unconditioned outcome distribution relative to observation.
RuleCheck check_rule1(const CausalScenario& s, double eps = kEpsExact);
// Rule 2: conditioned on a control outcome, the interventional and
// observational arms must agree (one check per conditioning effect).
RuleCheck check_rule2(const CausalScenario& s, const std::string& control_effect,
                      double eps = kEpsExact);
// Rule 3: with no declared A -> B mechanism, replacing A's natural channel by
// the intervention must leave B's statistics untouched.
RuleCheck check_rule3(const CausalScenario& s, double eps = kEpsExact);
// Rule 4: the natural-arm conditional at control "+" must be expressible as a
// convex mixture of the conditionals at "0" and "1"; a positive residual
// witnesses interference between the two orderings.
RuleCheck check_rule4(const CausalScenario& s, double eps = kEpsExact);

// Hoeffding deviation bound for one empirical distribution estimated from
// `shots` samples at confidence 1 - delta.
double statistical_thresholds(std::uint64_t shots, double delta);

Classification classify(const std::vector<DeltaCdEntry>& ideal,
                        const std::vector<DeltaCdEntry>& noisy, double eps);

struct DiagnosticReport {
    std::string scenario;
    std::vector<RuleCheck> checks;
    std::vector<DeltaCdEntry> delta_cd_ideal;
    std::vector<DeltaCdEntry> delta_cd_noisy;  // empty unless noise was requested
    Classification classification = Classification::ConsistentClassical;
    double eps = kEpsExact;
    bool any_violation() const;
};

DiagnosticReport run_diagnostics(const CausalScenario& s, double eps = kEpsExact,
                                 std::optional<double> noise_p = std::nullopt);

// Same rule set evaluated on finite-sample estimates; thresholds widen to the
// sum of the per-arm Hoeffding bounds at the relevant conditioning-bin sizes.
DiagnosticReport run_diagnostics_sampled(const CausalScenario& s, std::uint64_t shots,
                                         std::uint64_t seed, double delta = 1e-3);

std::string report_to_text(const DiagnosticReport& report);

}  // namespace causalq
