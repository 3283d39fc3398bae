#pragma once

#include <string>
#include <vector>

#include "causalq/matrix.hpp"

namespace causalq {

// Eigenvalues below this are treated as numerically zero when extracting
// Kraus operators from a Choi matrix.
constexpr double kKrausCutoff = 1e-10;

enum class ChoiKind { Cptp, Effect };

// Choi matrix of a linear map H_in -> H_out, indexed with the input factor
// first: J = Σ_ij |i⟩⟨j| ⊗ E(|i⟩⟨j|). The double-ket |Φ⟩⟩ = Σ_i |ii⟩ is kept
// unnormalized, so a trace-preserving map has Tr J = dim(in).
struct ChoiOperator {
    ComplexMatrix matrix;
    SpaceLabel in_space;
    SpaceLabel out_space;
    ChoiKind kind = ChoiKind::Cptp;

    ChoiOperator relabeled(const std::string& in_name, const std::string& out_name) const;
};

// Measure-and-reprepare instrument: effects povm[k] paired with re-prepared
// states outputs[k]; branch k fires with probability Tr[povm[k] ρ] and emits
// outputs[k].
struct Instrument {
    std::vector<ComplexMatrix> povm;
    std::vector<ComplexMatrix> outputs;
    SpaceLabel space;
};

struct InstrumentBranch {
    double probability;
    ComplexMatrix state;
};

struct CptpReport {
    bool psd_ok = false;
    bool trace_ok = false;
    double max_violation = 0.0;

    bool ok() const { return psd_ok && trace_ok; }
};

ChoiOperator choi_from_kraus(const std::vector<ComplexMatrix>& kraus,
                             const SpaceLabel& in_space, const SpaceLabel& out_space);
ChoiOperator choi_from_kraus(const std::vector<ComplexMatrix>& kraus);

// Inverse of choi_from_kraus up to gauge: eigenvectors with eigenvalue above
// `cutoff` become Kraus operators scaled by sqrt(eigenvalue). Throws if the
// Choi matrix has an eigenvalue below -cutoff.
std::vector<ComplexMatrix> kraus_from_choi(const ChoiOperator& j, double cutoff = kKrausCutoff);

CptpReport is_cptp(const ChoiOperator& j, double tol = kDefaultTol);

// E(ρ) = Tr_in[(ρᵀ ⊗ I) J]
ComplexMatrix apply_channel(const ChoiOperator& j, const ComplexMatrix& rho);

// E(ρ) / Tr[E(ρ)]; throws when the normalization vanishes within tol.
ComplexMatrix conditional_state(const ChoiOperator& j, const ComplexMatrix& rho,
                                double tol = kDefaultTol);

// Depolarizing channel on n qubits: D_p(ρ) = (1-p) ρ + p Tr[ρ] I / 2^n.
ChoiOperator depolarizing(double p, std::size_t n_qubits);

std::vector<InstrumentBranch> apply_instrument(const Instrument& instr, const ComplexMatrix& rho);

// Choi of the outcome-summed channel ρ ↦ Σ_k Tr[povm[k] ρ] outputs[k].
ChoiOperator instrument_total_choi(const Instrument& instr);

// Replacement channel ρ ↦ Tr[ρ] σ; its Choi matrix is I_in ⊗ σ.
ChoiOperator do_intervention(const ComplexMatrix& sigma, const SpaceLabel& in_space);

// Choi of second ∘ first.
ChoiOperator compose(const ChoiOperator& second, const ChoiOperator& first);

void validate_instrument(const Instrument& instr, double tol = kDefaultTol);

}  // namespace causalq
