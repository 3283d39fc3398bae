#include "causalq/scenarios.hpp"

#include <cmath>
#include <stdexcept>

#include "causalq/tensor.hpp"

namespace causalq {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

ComplexMatrix ket_projector(const std::string& which) {
    if (which == "0") return ComplexMatrix::outer({1.0, 0.0});
    if (which == "1") return ComplexMatrix::outer({0.0, 1.0});
    if (which == "+") return ComplexMatrix::outer({kInvSqrt2, kInvSqrt2});
    if (which == "-") return ComplexMatrix::outer({kInvSqrt2, -kInvSqrt2});
    throw std::invalid_argument("unknown control effect '" + which + "'");
}

ComplexMatrix hadamard() {
    ComplexMatrix h(2, 2);
    h.at(0, 0) = kInvSqrt2;
    h.at(0, 1) = kInvSqrt2;
    h.at(1, 0) = kInvSqrt2;
    h.at(1, 1) = -kInvSqrt2;
    return h;
}

ComplexMatrix pauli_x() {
    ComplexMatrix x(2, 2);
    x.at(0, 1) = 1.0;
    x.at(1, 0) = 1.0;
    return x;
}

ComplexMatrix basis_projector(std::size_t o, std::size_t d) {
    std::vector<Cx> ket(d, 0.0);
    ket[o] = 1.0;
    return ComplexMatrix::outer(ket);
}

ChoiOperator arm_choi(const CausalScenario& s, ArmKind arm) {
    const std::size_t d = s.target_prep.rows();
    switch (arm) {
        case ArmKind::Observational:
            return s.observational.relabeled(kSpaceAIn, kSpaceAOut);
        case ArmKind::Interventional:
            return s.interventional.relabeled(kSpaceAIn, kSpaceAOut);
        case ArmKind::Natural:
            return choi_from_kraus(s.channel_a, {kSpaceAIn, d}, {kSpaceAOut, d});
    }
    throw std::logic_error("arm_choi: unreachable");
}

// Joint probabilities P(O_B = o, conditioning event) for o in {0, 1}.
std::array<double, 2> joint_for(const CausalScenario& s, ArmKind arm,
                                const std::string& control_effect) {
    const std::size_t d = s.target_prep.rows();
    if (d < 2) throw std::invalid_argument("evaluate_arm: target must have dim >= 2");
    if (!s.has_control() && !control_effect.empty()) {
        throw std::invalid_argument(
            "evaluate_arm: scenario '" + s.name + "' has no control to condition on");
    }

    const ChoiOperator a_slot = arm_choi(s, arm);
    if (a_slot.in_space.dim != d || a_slot.out_space.dim != d) {
        throw std::invalid_argument("evaluate_arm: arm dimensions do not match target");
    }

    ProcessMatrix w = s.has_control()
                          ? switch_process_matrix(s.control_prep, s.target_prep)
                          : fixed_order_process(s.target_prep, s.order);

    std::array<double, 2> joint{0.0, 0.0};
    for (std::size_t o = 0; o < 2; ++o) {
        std::vector<BornTerm> terms;
        terms.push_back(BornTerm::channel(a_slot));

        if (s.locus == MeasurementLocus::TerminalFuture) {
            terms.push_back(BornTerm::channel(
                choi_from_kraus(s.channel_b, {kSpaceBIn, d}, {kSpaceBOut, d})));
            terms.push_back(BornTerm::effect(basis_projector(o, d), {kSpaceFuture, d}));
        } else {
            // Fold the outcome projector into B's slot so the readout happens
            // at B's output, untouched by anything later in the wiring.
            const ComplexMatrix proj = basis_projector(o, d);
            std::vector<ComplexMatrix> element;
            element.reserve(s.channel_b.size());
            for (const auto& k : s.channel_b) element.push_back(matmul(proj, k));
            terms.push_back(BornTerm::channel(
                choi_from_kraus(element, {kSpaceBIn, d}, {kSpaceBOut, d})));
            terms.push_back(BornTerm::identity_effect({kSpaceFuture, d}));
        }

        if (s.has_control()) {
            if (control_effect.empty()) {
                terms.push_back(BornTerm::identity_effect({kSpaceControl, 2}));
            } else {
                terms.push_back(
                    BornTerm::effect(ket_projector(control_effect), {kSpaceControl, 2}));
            }
        }

        double p = born_probability(w, terms);
        if (p < 0.0) {
            if (p < -1e-9) throw std::runtime_error("evaluate_arm: negative probability");
            p = 0.0;
        }
        joint[o] = p;
    }
    return joint;
}

Instrument measure_and_prepare_zero() {
    Instrument instr;
    instr.space = {"A", 2};
    instr.povm = {ket_projector("0"), ket_projector("1")};
    instr.outputs = {ket_projector("0"), ket_projector("0")};
    return instr;
}

std::size_t qubit_count(std::size_t d) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < d) ++n;
    if ((std::size_t{1} << n) != d) {
        throw std::invalid_argument("with_depolarizing_noise: dimension is not a power of two");
    }
    return n;
}

std::vector<ComplexMatrix> noisy_kraus(const std::vector<ComplexMatrix>& kraus, double p) {
    const std::size_t d = kraus.front().rows();
    const ChoiOperator base = choi_from_kraus(kraus, {"in", kraus.front().cols()}, {"mid", d});
    return kraus_from_choi(compose(depolarizing(p, qubit_count(d)), base));
}

}  // namespace

bool ArmConditional::defined() const { return mass > kZeroMassCutoff; }

ArmConditional evaluate_arm(const CausalScenario& s, ArmKind arm,
                            const std::string& control_effect) {
    const std::array<double, 2> joint = joint_for(s, arm, control_effect);
    ArmConditional out;
    out.mass = joint[0] + joint[1];
    if (out.defined()) {
        out.probs = {joint[0] / out.mass, joint[1] / out.mass};
    }
    return out;
}

std::array<double, 4> arm_joint(const CausalScenario& s, ArmKind arm,
                                ControlBasis basis) {
    std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
    if (s.has_control()) {
        const std::array<std::string, 2> effects =
            basis == ControlBasis::Z ? std::array<std::string, 2>{"0", "1"}
                                     : std::array<std::string, 2>{"+", "-"};
        for (std::size_t c = 0; c < 2; ++c) {
            const auto joint = joint_for(s, arm, effects[c]);
            out[0 * 2 + c] = joint[0];
            out[1 * 2 + c] = joint[1];
        }
    } else {
        const auto joint = joint_for(s, arm, "");
        out[0 * 2 + 0] = joint[0];
        out[1 * 2 + 0] = joint[1];
    }
    return out;
}

CausalScenario with_depolarizing_noise(const CausalScenario& s, double p) {
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("with_depolarizing_noise: p outside [0, 1]");
    }
    if (p == 0.0) return s;

    CausalScenario out = s;
    out.channel_a = noisy_kraus(s.channel_a, p);
    out.channel_b = noisy_kraus(s.channel_b, p);

    const ChoiOperator noise = depolarizing(p, qubit_count(s.observational.out_space.dim));
    out.observational =
        compose(noise, s.observational)
            .relabeled(s.observational.in_space.name, s.observational.out_space.name);
    out.interventional =
        compose(noise, s.interventional)
            .relabeled(s.interventional.in_space.name, s.interventional.out_space.name);
    return out;
}

CausalScenario scenario_preset(const std::string& name) {
    const ComplexMatrix rho0 = ket_projector("0");
    const ComplexMatrix plus = ket_projector("+");
    const ComplexMatrix h = hadamard();
    const ComplexMatrix x = pauli_x();
    const ChoiOperator do_zero =
        do_intervention(rho0, {kSpaceAIn, 2}).relabeled(kSpaceAIn, kSpaceAOut);
    const ChoiOperator coherent_h = choi_from_kraus({h}, {kSpaceAIn, 2}, {kSpaceAOut, 2});
    const ChoiOperator reset_zero =
        instrument_total_choi(measure_and_prepare_zero()).relabeled(kSpaceAIn, kSpaceAOut);

    CausalScenario s;
    s.name = name;
    s.target_prep = rho0;
    s.channel_a = {h};
    s.channel_b = {x};
    s.interventional = do_zero;

    if (name == "switch-coherent") {
        s.generator = GeneratorKind::Switch;
        s.control_prep = plus;
        s.observational = coherent_h;
        s.declared = {true, false};
        s.locus = MeasurementLocus::TerminalFuture;
        return s;
    }
    if (name == "switch-decohered") {
        s.generator = GeneratorKind::Switch;
        s.control_prep = ComplexMatrix::identity(2) * Cx{0.5, 0.0};
        s.observational = reset_zero;
        s.declared = {true, false};
        s.locus = MeasurementLocus::TerminalFuture;
        return s;
    }
    if (name == "fixed-order-ab") {
        s.generator = GeneratorKind::FixedOrder;
        s.order = PartyOrder::AThenB;
        s.observational = reset_zero;
        s.declared = {true, true};
        s.locus = MeasurementLocus::PartyBOutput;
        return s;
    }
    if (name == "fixed-order-ba") {
        s.generator = GeneratorKind::FixedOrder;
        s.order = PartyOrder::BThenA;
        s.observational = coherent_h;
        s.declared = {false, false};
        s.locus = MeasurementLocus::PartyBOutput;
        return s;
    }
    if (name == "null-identical-arms") {
        s.generator = GeneratorKind::Switch;
        s.control_prep = plus;
        // A's natural channel is itself the reset the intervention forces, so
        // every rule that applies should come out clean.
        ComplexMatrix k0(2, 2);
        k0.at(0, 0) = 1.0;
        ComplexMatrix k1(2, 2);
        k1.at(0, 1) = 1.0;
        s.channel_a = {k0, k1};
        s.observational = do_zero;
        s.declared = {true, true};
        s.locus = MeasurementLocus::TerminalFuture;
        return s;
    }
    throw std::invalid_argument("unknown scenario preset '" + name + "'");
}

std::vector<std::string> scenario_preset_names() {
    return {"switch-coherent", "switch-decohered", "fixed-order-ab", "fixed-order-ba",
            "null-identical-arms"};
}

}  // namespace causalq
