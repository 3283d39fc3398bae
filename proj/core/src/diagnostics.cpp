#include "causalq/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "causalq/rng.hpp"

namespace causalq {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

const char* kZeroMassDetail = "conditioning event has zero probability";

RuleCheck not_applicable(int rule, const std::string& control, std::string detail) {
    RuleCheck c;
    c.rule = rule;
    c.control = control;
    c.verdict = Verdict::NotApplicable;
    c.detail = std::move(detail);
    return c;
}

Verdict threshold_verdict(double quantity, double threshold) {
    return quantity > threshold ? Verdict::Violated : Verdict::Pass;
}

const DeltaCdEntry* find_entry(const std::vector<DeltaCdEntry>& entries,
                               const std::string& control) {
    for (const auto& e : entries) {
        if (e.control == control) return &e;
    }
    return nullptr;
}

void require_defined(const std::vector<DeltaCdEntry>& entries, const char* which) {
    for (const auto& e : entries) {
        if (!e.defined) {
            throw std::invalid_argument(std::string("classify: ") + which +
                                        " entry at control '" + e.control +
                                        "' is undefined");
        }
    }
}

}  // namespace

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Violated: return "violated";
        case Verdict::NotApplicable: return "not-applicable";
        case Verdict::Undefined: return "undefined";
    }
    throw std::logic_error("verdict_name: unreachable");
}

std::string classification_name(Classification c) {
    switch (c) {
        case Classification::ConsistentClassical: return "consistent-classical";
        case Classification::CausalSuperpositionLikely: return "causal-superposition-likely";
        case Classification::FragileSignal: return "fragile-signal";
        case Classification::RobustViolation: return "robust-violation";
    }
    throw std::logic_error("classification_name: unreachable");
}

double tv_distance(const std::array<double, 2>& p, const std::array<double, 2>& q) {
    return 0.5 * (std::abs(p[0] - q[0]) + std::abs(p[1] - q[1]));
}

double tv_distance(const OutcomeDistribution& p, const OutcomeDistribution& q) {
    if (p.labels != q.labels) {
        throw std::invalid_argument("tv_distance: distributions have different outcome labels");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < p.probs.size(); ++i) sum += std::abs(p.probs[i] - q.probs[i]);
    return 0.5 * sum;
}

ConvexFitResult convex_mixture_fit(const std::array<double, 2>& p_plus,
                                   const std::array<double, 2>& p0,
                                   const std::array<double, 2>& p1) {
    const auto objective = [&](double lam) {
        const std::array<double, 2> mix{lam * p0[0] + (1.0 - lam) * p1[0],
                                        lam * p0[1] + (1.0 - lam) * p1[1]};
        return tv_distance(p_plus, mix);
    };

    // The objective is convex in lambda, so golden-section search converges.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0;
    double b = 1.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (b - a > 1e-6) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = objective(x2);
        }
    }

    ConvexFitResult out;
    out.lambda_star = 0.5 * (a + b);
    out.residual = objective(out.lambda_star);
    return out;
}

DeltaCdEntry delta_cd(const CausalScenario& s, const std::string& control_effect) {
    const ArmConditional obs = evaluate_arm(s, ArmKind::Observational, control_effect);
    const ArmConditional itv = evaluate_arm(s, ArmKind::Interventional, control_effect);

    DeltaCdEntry entry;
    entry.control = control_effect;
    entry.defined = obs.defined() && itv.defined();
    if (entry.defined) {
        entry.per_outcome = {std::abs(itv.probs[0] - obs.probs[0]),
                             std::abs(itv.probs[1] - obs.probs[1])};
        entry.aggregate = tv_distance(itv.probs, obs.probs);
    }
    return entry;
}

RuleCheck check_rule1(const CausalScenario& s, double eps) {
    if (!s.declared.a_parentless) {
        return not_applicable(1, "",
                              "A is declared to have parents; a marginal shift could be "
                              "confounding rather than influence");
    }
    const ArmConditional obs = evaluate_arm(s, ArmKind::Observational, "");
    const ArmConditional itv = evaluate_arm(s, ArmKind::Interventional, "");

    RuleCheck c;
    c.rule = 1;
    c.threshold = eps;
    if (!obs.defined() || !itv.defined()) {
        c.verdict = Verdict::Undefined;
        c.detail = kZeroMassDetail;
        return c;
    }
    c.quantity = tv_distance(itv.probs, obs.probs);
    c.verdict = threshold_verdict(c.quantity, eps);
    c.detail = "TV between interventional and observational marginals of O_B";
    return c;
}

RuleCheck check_rule2(const CausalScenario& s, const std::string& control_effect,
                      double eps) {
    if (!s.has_control()) {
        return not_applicable(2, control_effect, "no control to condition on");
    }
    if (control_effect.empty()) {
        throw std::invalid_argument("check_rule2: a conditioning effect is required");
    }

    RuleCheck c;
    c.rule = 2;
    c.control = control_effect;
    c.threshold = eps;
    const DeltaCdEntry entry = delta_cd(s, control_effect);
    if (!entry.defined) {
        c.verdict = Verdict::Undefined;
        c.detail = kZeroMassDetail;
        return c;
    }
    c.quantity = entry.aggregate;
    c.verdict = threshold_verdict(c.quantity, eps);
    c.detail = "TV between arms conditioned on control = " + control_effect;
    return c;
}

RuleCheck check_rule3(const CausalScenario& s, double eps) {
    if (s.declared.a_to_b) {
        return not_applicable(3, "",
                              "a declared A -> B mechanism is expected to react to "
                              "replacing A's channel");
    }
    const ArmConditional nat = evaluate_arm(s, ArmKind::Natural, "");
    const ArmConditional itv = evaluate_arm(s, ArmKind::Interventional, "");

    RuleCheck c;
    c.rule = 3;
    c.threshold = eps;
    if (!nat.defined() || !itv.defined()) {
        c.verdict = Verdict::Undefined;
        c.detail = kZeroMassDetail;
        return c;
    }
    c.quantity = tv_distance(itv.probs, nat.probs);
    c.verdict = threshold_verdict(c.quantity, eps);
    c.detail = "TV between intervened and natural marginals of O_B";
    return c;
}

RuleCheck check_rule4(const CausalScenario& s, double eps) {
    if (!s.has_control()) {
        return not_applicable(4, "+",
                              "needs a control to define the superposed-order conditional");
    }
    const ArmConditional p_plus = evaluate_arm(s, ArmKind::Natural, "+");
    const ArmConditional p0 = evaluate_arm(s, ArmKind::Natural, "0");
    const ArmConditional p1 = evaluate_arm(s, ArmKind::Natural, "1");

    RuleCheck c;
    c.rule = 4;
    c.control = "+";
    c.threshold = eps;
    if (!p_plus.defined() || !p0.defined() || !p1.defined()) {
        c.verdict = Verdict::Undefined;
        c.detail = kZeroMassDetail;
        return c;
    }
    const ConvexFitResult fit = convex_mixture_fit(p_plus.probs, p0.probs, p1.probs);
    c.quantity = fit.residual;
    c.verdict = threshold_verdict(c.quantity, eps);
    c.detail = "convex-fit residual, best lambda = " + fmt_double(fit.lambda_star);
    return c;
}

double statistical_thresholds(std::uint64_t shots, double delta) {
    if (shots < 1) throw std::invalid_argument("statistical_thresholds: shots must be >= 1");
    if (!(delta > 0.0) || !(delta < 1.0)) {
        throw std::invalid_argument("statistical_thresholds: delta must lie in (0, 1)");
    }
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(shots)));
}

Classification classify(const std::vector<DeltaCdEntry>& ideal,
                        const std::vector<DeltaCdEntry>& noisy, double eps) {
    if (ideal.empty()) throw std::invalid_argument("classify: no ideal entries");
    require_defined(ideal, "ideal");
    require_defined(noisy, "noisy");

    const auto all_leq = [eps](const std::vector<DeltaCdEntry>& v) {
        return std::all_of(v.begin(), v.end(),
                           [eps](const DeltaCdEntry& e) { return e.aggregate <= eps; });
    };
    const auto all_gt = [eps](const std::vector<DeltaCdEntry>& v) {
        return std::all_of(v.begin(), v.end(),
                           [eps](const DeltaCdEntry& e) { return e.aggregate > eps; });
    };

    if (all_leq(ideal)) {
        if (!noisy.empty() && !all_leq(noisy)) return Classification::FragileSignal;
        return Classification::ConsistentClassical;
    }

    const DeltaCdEntry* e0 = find_entry(ideal, "0");
    const DeltaCdEntry* e1 = find_entry(ideal, "1");
    const DeltaCdEntry* ep = find_entry(ideal, "+");
    if (e0 && e1 && ep && e0->aggregate <= eps && e1->aggregate <= eps &&
        ep->aggregate > eps) {
        return Classification::CausalSuperpositionLikely;
    }

    if (all_gt(ideal) && (noisy.empty() || all_gt(noisy))) {
        return Classification::RobustViolation;
    }
    return Classification::FragileSignal;
}

bool DiagnosticReport::any_violation() const {
    return std::any_of(checks.begin(), checks.end(), [](const RuleCheck& c) {
        return c.verdict == Verdict::Violated;
    });
}

namespace {

std::vector<std::string> conditioning_effects(const CausalScenario& s) {
    if (s.has_control()) return {"0", "1", "+"};
    return {""};
}

}  // namespace

DiagnosticReport run_diagnostics(const CausalScenario& s, double eps,
                                 std::optional<double> noise_p) {
    DiagnosticReport r;
    r.scenario = s.name;
    r.eps = eps;

    r.checks.push_back(check_rule1(s, eps));
    if (s.has_control()) {
        for (const char* ce : {"0", "1", "+"}) r.checks.push_back(check_rule2(s, ce, eps));
    } else {
        r.checks.push_back(check_rule2(s, "", eps));
    }
    r.checks.push_back(check_rule3(s, eps));
    r.checks.push_back(check_rule4(s, eps));

    for (const auto& ce : conditioning_effects(s)) r.delta_cd_ideal.push_back(delta_cd(s, ce));
    if (noise_p) {
        const CausalScenario noisy = with_depolarizing_noise(s, *noise_p);
        for (const auto& ce : conditioning_effects(s)) {
            r.delta_cd_noisy.push_back(delta_cd(noisy, ce));
        }
    }
    r.classification = classify(r.delta_cd_ideal, r.delta_cd_noisy, eps);
    return r;
}

namespace {

// Finite-sample estimates for one arm: conditioning-bin counts and the
// conditional outcome frequencies, keyed by control effect label ("" holds
// the unconditioned estimate over the Z-basis run).
struct ArmEstimate {
    std::map<std::string, std::uint64_t> bin;
    std::map<std::string, std::array<double, 2>> cond;

    bool has(const std::string& key) const {
        auto it = bin.find(key);
        return it != bin.end() && it->second > 0;
    }
};

OutcomeDistribution arm_distribution(const CausalScenario& s, ArmKind arm,
                                     ControlBasis basis) {
    const std::array<double, 4> joint = arm_joint(s, arm, basis);
    OutcomeDistribution d;
    if (s.has_control()) {
        d.labels = {"00", "01", "10", "11"};  // O_B digit first, control digit second
        d.probs = {joint[0], joint[1], joint[2], joint[3]};
        d.roles.target = 0;
        d.roles.control = 1;
    } else {
        d.labels = {"0", "1"};
        d.probs = {joint[0], joint[2]};
        d.roles.target = 0;
    }
    return d;
}

void accumulate_run(ArmEstimate& est, const OutcomeCounts& counts,
                    const std::array<std::string, 2>& effect_names, bool record_marginal) {
    std::array<std::array<std::uint64_t, 2>, 2> n{};  // n[o][c]
    for (std::size_t i = 0; i < counts.labels.size(); ++i) {
        const std::string& lab = counts.labels[i];
        const std::size_t o = static_cast<std::size_t>(lab[0] - '0');
        const std::size_t c = lab.size() > 1 ? static_cast<std::size_t>(lab[1] - '0') : 0;
        n[o][c] += counts.counts[i];
    }
    for (std::size_t c = 0; c < 2; ++c) {
        if (effect_names[c].empty() && c == 1) continue;  // unconditioned run has one bin
        const std::uint64_t total = n[0][c] + n[1][c];
        est.bin[effect_names[c]] = total;
        if (total > 0) {
            est.cond[effect_names[c]] = {static_cast<double>(n[0][c]) / total,
                                         static_cast<double>(n[1][c]) / total};
        }
    }
    if (record_marginal) {
        const std::uint64_t total = n[0][0] + n[1][0] + n[0][1] + n[1][1];
        est.bin[""] = total;
        est.cond[""] = {static_cast<double>(n[0][0] + n[0][1]) / total,
                        static_cast<double>(n[1][0] + n[1][1]) / total};
    }
}

ArmEstimate sample_arm(const CausalScenario& s, ArmKind arm, std::uint64_t shots,
                       std::uint64_t seed, std::size_t arm_index) {
    ArmEstimate est;
    if (s.has_control()) {
        // Sub-run order: (obs Z, obs X, int Z, int X, nat Z, nat X).
        const std::uint64_t seed_z = mix64(seed ^ (arm_index * 2 + 1));
        const std::uint64_t seed_x = mix64(seed ^ (arm_index * 2 + 2));
        accumulate_run(est, sample_shots(arm_distribution(s, arm, ControlBasis::Z), shots, seed_z),
                       {"0", "1"}, true);
        accumulate_run(est, sample_shots(arm_distribution(s, arm, ControlBasis::X), shots, seed_x),
                       {"+", "-"}, false);
    } else {
        const std::uint64_t sub_seed = mix64(seed ^ (arm_index + 1));
        accumulate_run(est, sample_shots(arm_distribution(s, arm, ControlBasis::Z), shots, sub_seed),
                       {"", ""}, false);
    }
    return est;
}

RuleCheck sampled_two_arm_check(int rule, const std::string& control,
                                const ArmEstimate& lhs, const ArmEstimate& rhs,
                                const std::string& key, double delta, std::string detail) {
    RuleCheck c;
    c.rule = rule;
    c.control = control;
    if (!lhs.has(key) || !rhs.has(key)) {
        c.verdict = Verdict::Undefined;
        c.detail = kZeroMassDetail;
        return c;
    }
    c.quantity = tv_distance(lhs.cond.at(key), rhs.cond.at(key));
    c.threshold = statistical_thresholds(lhs.bin.at(key), delta) +
                  statistical_thresholds(rhs.bin.at(key), delta);
    c.verdict = threshold_verdict(c.quantity, c.threshold);
    c.detail = std::move(detail);
    return c;
}

}  // namespace

DiagnosticReport run_diagnostics_sampled(const CausalScenario& s, std::uint64_t shots,
                                         std::uint64_t seed, double delta) {
    if (shots < 1) {
        throw std::invalid_argument("run_diagnostics_sampled: shots must be >= 1");
    }
    const ArmEstimate obs = sample_arm(s, ArmKind::Observational, shots, seed, 0);
    const ArmEstimate itv = sample_arm(s, ArmKind::Interventional, shots, seed, 1);
    const ArmEstimate nat = sample_arm(s, ArmKind::Natural, shots, seed, 2);

    DiagnosticReport r;
    r.scenario = s.name;

    if (!s.declared.a_parentless) {
        r.checks.push_back(not_applicable(
            1, "",
            "A is declared to have parents; a marginal shift could be confounding rather "
            "than influence"));
    } else {
        r.checks.push_back(sampled_two_arm_check(
            1, "", itv, obs, "", delta,
            "TV between interventional and observational marginals of O_B"));
    }

    if (s.has_control()) {
        for (const char* ce : {"0", "1", "+"}) {
            r.checks.push_back(sampled_two_arm_check(
                2, ce, itv, obs, ce, delta,
                std::string("TV between arms conditioned on control = ") + ce));
        }
    } else {
        r.checks.push_back(not_applicable(2, "", "no control to condition on"));
    }

    if (s.declared.a_to_b) {
        r.checks.push_back(not_applicable(3, "",
                                          "a declared A -> B mechanism is expected to react "
                                          "to replacing A's channel"));
    } else {
        r.checks.push_back(sampled_two_arm_check(
            3, "", itv, nat, "", delta,
            "TV between intervened and natural marginals of O_B"));
    }

    if (!s.has_control()) {
        r.checks.push_back(not_applicable(
            4, "+", "needs a control to define the superposed-order conditional"));
    } else {
        RuleCheck c;
        c.rule = 4;
        c.control = "+";
        if (!nat.has("+") || !nat.has("0") || !nat.has("1")) {
            c.verdict = Verdict::Undefined;
            c.detail = kZeroMassDetail;
        } else {
            const ConvexFitResult fit =
                convex_mixture_fit(nat.cond.at("+"), nat.cond.at("0"), nat.cond.at("1"));
            c.quantity = fit.residual;
            c.threshold = statistical_thresholds(nat.bin.at("+"), delta) +
                          std::max(statistical_thresholds(nat.bin.at("0"), delta),
                                   statistical_thresholds(nat.bin.at("1"), delta));
            c.verdict = threshold_verdict(c.quantity, c.threshold);
            c.detail = "convex-fit residual, best lambda = " + fmt_double(fit.lambda_star);
        }
        r.checks.push_back(c);
    }

    double eps_cls = 0.0;
    for (const auto& ce : conditioning_effects(s)) {
        DeltaCdEntry entry;
        entry.control = ce;
        entry.defined = obs.has(ce) && itv.has(ce);
        if (entry.defined) {
            const auto& po = obs.cond.at(ce);
            const auto& pi = itv.cond.at(ce);
            entry.per_outcome = {std::abs(pi[0] - po[0]), std::abs(pi[1] - po[1])};
            entry.aggregate = tv_distance(pi, po);
            eps_cls = std::max(eps_cls, statistical_thresholds(obs.bin.at(ce), delta) +
                                            statistical_thresholds(itv.bin.at(ce), delta));
        }
        r.delta_cd_ideal.push_back(entry);
    }
    r.eps = eps_cls;
    r.classification = classify(r.delta_cd_ideal, r.delta_cd_noisy, eps_cls);
    return r;
}

std::string report_to_text(const DiagnosticReport& report) {
    if (report.checks.empty()) {
        throw std::invalid_argument("report_to_text: report has no checks");
    }
    std::string out;
    out += "scenario: " + report.scenario + "\n";
    out += "classification: " + classification_name(report.classification) + "\n";
    out += "eps: " + fmt_double(report.eps) + "\n";
    for (const auto& c : report.checks) {
        out += "rule " + std::to_string(c.rule);
        out += c.control.empty() ? " [unconditioned]" : " [c=" + c.control + "]";
        out += ": " + verdict_name(c.verdict);
        if (c.verdict == Verdict::Pass || c.verdict == Verdict::Violated) {
            out += "  quantity=" + fmt_double(c.quantity) +
                   " threshold=" + fmt_double(c.threshold);
        }
        if (!c.detail.empty()) out += "  (" + c.detail + ")";
        out += "\n";
    }
    const auto delta_line = [&out](const char* tag, const std::vector<DeltaCdEntry>& v) {
        if (v.empty()) return;
        out += std::string(tag) + ":";
        for (const auto& e : v) {
            out += std::string(" ") + (e.control.empty() ? "unconditioned" : "c=" + e.control) +
                   "=" + (e.defined ? fmt_double(e.aggregate) : "undefined");
        }
        out += "\n";
    };
    delta_line("delta_cd ideal", report.delta_cd_ideal);
    delta_line("delta_cd noisy", report.delta_cd_noisy);
    return out;
}

}  // namespace causalq
