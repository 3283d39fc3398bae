#pragma once

#include <array>
#include <string>
#include <vector>

#include "causalq/channels.hpp"
#include "causalq/process.hpp"

namespace causalq {

enum class GeneratorKind { Switch, FixedOrder };

// Where the diagnosed outcome O_B is read out.  Switch scenarios measure the
// target after both parties have acted (the future space F); fixed-order
// scenarios measure directly at B's output, absorbing the projector into B's
// slot so that no signal from a later party can reach the readout.
enum class MeasurementLocus { TerminalFuture, PartyBOutput };

// What the experimenter claims about the causal structure, used to decide
// which consistency rules apply.  `a_to_b` asserts a direct mechanism from A
// to B; `a_parentless` asserts nothing in the scenario feeds into A.
struct DeclaredStructure {
    bool a_to_b = true;
    bool a_parentless = false;
};

// A complete diagnosable experiment: a process generator, the local physics
// at both parties, and the two A-slot alternatives that the rules compare —
// the channel actually run when observing, and the forced replacement used
// when intervening.  Both are Choi operators on A_I -> A_O.
struct CausalScenario {
    std::string name;
    GeneratorKind generator = GeneratorKind::Switch;
    PartyOrder order = PartyOrder::AThenB;  // fixed-order generators only
    ComplexMatrix control_prep;             // switch generators only, qubit
    ComplexMatrix target_prep;
    std::vector<ComplexMatrix> channel_a;  // Kraus operators, A's natural channel
    std::vector<ComplexMatrix> channel_b;  // Kraus operators, B's channel
    ChoiOperator observational;
    ChoiOperator interventional;
    DeclaredStructure declared;
    MeasurementLocus locus = MeasurementLocus::TerminalFuture;

    bool has_control() const { return generator == GeneratorKind::Switch; }
};

// Which A-slot content a run uses.  Observational and Interventional are the
// scenario's declared arms; Natural plugs in `channel_a` itself, which the
// no-upstream-influence rule compares against the intervention.
enum class ArmKind { Observational, Interventional, Natural };

// Conditional outcome statistics for one arm under one control conditioning.
// `mass` is the total probability of the conditioning event; the conditional
// is undefined when that event (numerically) never happens.
struct ArmConditional {
    double mass = 0.0;
    std::array<double, 2> probs{0.0, 0.0};
    bool defined() const;
};

inline constexpr double kZeroMassCutoff = 1e-12;

// Evaluates P(O_B = o | conditioning) exactly for the given arm.
// `control_effect` selects the conditioning event on the control:
// "0", "1", "+", "-" for the corresponding rank-one projectors, or "" for
// unconditioned.  Fixed-order scenarios accept only "".
ArmConditional evaluate_arm(const CausalScenario& s, ArmKind arm,
                            const std::string& control_effect);

// Joint outcome probabilities over (O_B, control basis outcome) for one arm.
// Entry layout: index = o * 2 + c with c indexing the two basis effects
// (Z: {0, 1}; X: {+, -}).  Fixed-order scenarios have no control; their
// unconditioned two-outcome distribution sits at c = 0.
enum class ControlBasis { Z, X };
std::array<double, 4> arm_joint(const CausalScenario& s, ArmKind arm,
                                ControlBasis basis);

// Same scenario with single-qubit depolarizing noise of strength p composed
// after every party channel and after both A-slot arms.
CausalScenario with_depolarizing_noise(const CausalScenario& s, double p);

CausalScenario scenario_preset(const std::string& name);
std::vector<std::string> scenario_preset_names();

}  // namespace causalq
