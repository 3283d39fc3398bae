#pragma once

#include <string>
#include <vector>

#include "causalq/channels.hpp"
#include "causalq/matrix.hpp"

namespace causalq {

// Higher-order process machinery: process matrices over labeled party and
// terminal spaces, the generalized Born contraction, and the quantum-switch
// constructions.
//
// Index conventions, fixed once and checked by tests against the Kraus-level
// supermap:
//   * Party slots contract with Choi matrices exactly as produced by
//     choi_from_kraus (input factor first, no extra transpose).
//   * Terminal spaces (measurement-only slots such as F and C) contract with
//     raw POVM effects, which born_probability transposes internally. The
//     constructors below therefore store preparation amplitudes conjugated,
//     which is why a bare state preparation is represented by ρᵀ.
// Any other placement of the transposes breaks either positivity of the
// switch process or agreement with the supermap path; both properties are
// enforced by the test suite.

inline constexpr const char* kSpaceAIn = "A_I";
inline constexpr const char* kSpaceAOut = "A_O";
inline constexpr const char* kSpaceBIn = "B_I";
inline constexpr const char* kSpaceBOut = "B_O";
inline constexpr const char* kSpaceFuture = "F";
inline constexpr const char* kSpaceControl = "C";

struct ProcessMatrix {
    ComplexMatrix matrix;
    std::vector<SpaceLabel> spaces;  // most significant factor first
};

enum class SlotKind { ChannelChoi, TerminalEffect };

// One factor of a Born contraction: a party's Choi matrix covering its
// (input, output) pair, or a POVM effect on a single terminal space.
struct BornTerm {
    ComplexMatrix matrix;
    std::vector<SpaceLabel> spaces;
    SlotKind kind = SlotKind::TerminalEffect;

    static BornTerm channel(const ChoiOperator& j);
    static BornTerm effect(const ComplexMatrix& m, const SpaceLabel& space);
    static BornTerm identity_effect(const SpaceLabel& space);
};

// P = Tr[(⊗ terms) w]; terms must cover every space of w exactly once.
double born_probability(const ProcessMatrix& w, const std::vector<BornTerm>& terms);

// Link product over shared labels: a ⋆ b = Tr_shared[(a^{T_shared} ⊗ 1)(1 ⊗ b)].
// Disjoint label sets degenerate to the Kronecker product. The result keeps
// a's unshared spaces first, then b's.
ProcessMatrix link_product(const ProcessMatrix& a, const ProcessMatrix& b);

enum class PartyOrder { AThenB, BThenA };

// Definite-order process wiring preparation -> first party -> second party
// -> global future F, on spaces [A_I, A_O, B_I, B_O, F].
ProcessMatrix fixed_order_process(const ComplexMatrix& rho_in,
                                  PartyOrder order = PartyOrder::AThenB);

// Bare state preparation handed to a single slot: W = ρᵀ.
ProcessMatrix state_prep_process(const ComplexMatrix& rho, const SpaceLabel& space);

// Joint output state on target ⊗ control of the coherently-controlled order
// composition: Kraus operators K_ij = B_j A_i ⊗ |0⟩⟨0|_C + A_i B_j ⊗ |1⟩⟨1|_C.
// Sub-CPTP Kraus sets are accepted and yield subnormalized joints.
ComplexMatrix switch_supermap(const std::vector<ComplexMatrix>& kraus_a,
                              const std::vector<ComplexMatrix>& kraus_b,
                              const ComplexMatrix& control_prep,
                              const ComplexMatrix& target_prep);

// Process matrix of the controlled-order composition on
// [A_I, A_O, B_I, B_O, F, C]; contracting it with party Chois and terminal
// effects reproduces switch_supermap probabilities.
ProcessMatrix switch_process_matrix(const ComplexMatrix& control_prep,
                                    const ComplexMatrix& target_prep);

// Largest off-diagonal control-block entry, the order-coherence witness:
// zero for processes that factor across C and for classical order mixtures.
double interference_norm(const ProcessMatrix& w, double tol = kDefaultTol);

struct ProcessReport {
    bool hermitian_ok = false;
    bool psd_ok = false;
    bool normalization_ok = false;
    double max_violation = 0.0;

    bool ok() const { return hermitian_ok && psd_ok && normalization_ok; }
};

// Positivity plus operational normalization: every contraction with CPTP
// party Chois and identity terminal effects must give total probability 1.
// Party pairs are recognized by the "<name>_I"/"<name>_O" label convention.
ProcessReport validate_process(const ProcessMatrix& w, double tol = kDefaultTol);

}  // namespace causalq
