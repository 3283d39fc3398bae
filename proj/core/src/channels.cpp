#include "causalq/channels.hpp"

#include <cmath>
#include <stdexcept>

#include "causalq/tensor.hpp"

namespace causalq {

ChoiOperator ChoiOperator::relabeled(const std::string& in_name,
                                     const std::string& out_name) const {
    ChoiOperator out = *this;
    out.in_space.name = in_name;
    out.out_space.name = out_name;
    return out;
}

ChoiOperator choi_from_kraus(const std::vector<ComplexMatrix>& kraus,
                             const SpaceLabel& in_space, const SpaceLabel& out_space) {
    if (kraus.empty()) throw std::invalid_argument("choi_from_kraus: empty Kraus list");
    const std::size_t d_out = kraus.front().rows();
    const std::size_t d_in = kraus.front().cols();
    for (const ComplexMatrix& k : kraus) {
        if (k.rows() != d_out || k.cols() != d_in) {
            throw std::invalid_argument("choi_from_kraus: Kraus operators differ in shape");
        }
    }
    if (in_space.dim != d_in || out_space.dim != d_out) {
        throw std::invalid_argument("choi_from_kraus: space dims do not match Kraus shape");
    }

    ChoiOperator j;
    j.in_space = in_space;
    j.out_space = out_space;
    j.matrix = ComplexMatrix(d_in * d_out, d_in * d_out);
    for (const ComplexMatrix& k : kraus) {
        // J += Σ_ij |i⟩⟨j| ⊗ K|i⟩⟨j|K†, entry ((i,o),(j,o')) = K_oi conj(K_o'j).
        for (std::size_t i = 0; i < d_in; ++i) {
            for (std::size_t jj = 0; jj < d_in; ++jj) {
                for (std::size_t o = 0; o < d_out; ++o) {
                    for (std::size_t op = 0; op < d_out; ++op) {
                        j.matrix.at(i * d_out + o, jj * d_out + op) +=
                            k.at(o, i) * std::conj(k.at(op, jj));
                    }
                }
            }
        }
    }
    return j;
}

ChoiOperator choi_from_kraus(const std::vector<ComplexMatrix>& kraus) {
    if (kraus.empty()) throw std::invalid_argument("choi_from_kraus: empty Kraus list");
    return choi_from_kraus(kraus, SpaceLabel{"in", kraus.front().cols()},
                           SpaceLabel{"out", kraus.front().rows()});
}

std::vector<ComplexMatrix> kraus_from_choi(const ChoiOperator& j, double cutoff) {
    const std::size_t d_in = j.in_space.dim;
    const std::size_t d_out = j.out_space.dim;
    if (j.matrix.rows() != d_in * d_out || !j.matrix.is_square()) {
        throw std::invalid_argument("kraus_from_choi: matrix shape does not match spaces");
    }

    const EigenResult eig = hermitian_eigen(j.matrix, cutoff);
    std::vector<ComplexMatrix> kraus;
    for (std::size_t a = 0; a < eig.values.size(); ++a) {
        const double lambda = eig.values[a];
        if (lambda < -cutoff) {
            throw std::invalid_argument("kraus_from_choi: Choi matrix is not PSD");
        }
        if (lambda <= cutoff) continue;
        const double scale = std::sqrt(lambda);
        ComplexMatrix k(d_out, d_in);
        for (std::size_t i = 0; i < d_in; ++i) {
            for (std::size_t o = 0; o < d_out; ++o) {
                k.at(o, i) = scale * eig.vectors.at(i * d_out + o, a);
            }
        }
        kraus.push_back(std::move(k));
    }
    if (kraus.empty()) {
        // Zero map: keep a single explicit zero operator so callers always
        // have a well-shaped Kraus list.
        kraus.emplace_back(d_out, d_in);
    }
    return kraus;
}

CptpReport is_cptp(const ChoiOperator& j, double tol) {
    CptpReport report;
    const std::size_t d_in = j.in_space.dim;
    const std::size_t d_out = j.out_space.dim;
    if (j.matrix.rows() != d_in * d_out || !j.matrix.is_square()) {
        throw std::invalid_argument("is_cptp: matrix shape does not match spaces");
    }

    double violation = 0.0;
    if (!is_hermitian(j.matrix, tol)) {
        report.psd_ok = false;
        violation = max_abs_diff(j.matrix, dagger(j.matrix));
    } else {
        const EigenResult eig = hermitian_eigen(j.matrix, tol);
        const double min_eig = eig.values.empty() ? 0.0 : eig.values.back();
        report.psd_ok = min_eig >= -tol;
        if (min_eig < 0.0) violation = std::max(violation, -min_eig);
    }

    const std::vector<SpaceLabel> spaces = {j.in_space, j.out_space};
    const ComplexMatrix reduced = partial_trace(j.matrix, spaces, {j.in_space.name});
    const double trace_violation = max_abs_diff(reduced, ComplexMatrix::identity(d_in));
    report.trace_ok = trace_violation <= tol;
    report.max_violation = std::max(violation, trace_violation);
    return report;
}

ComplexMatrix apply_channel(const ChoiOperator& j, const ComplexMatrix& rho) {
    const std::size_t d_in = j.in_space.dim;
    const std::size_t d_out = j.out_space.dim;
    if (!rho.is_square() || rho.rows() != d_in) {
        throw std::invalid_argument("apply_channel: state dimension mismatch");
    }
    ComplexMatrix out(d_out, d_out);
    for (std::size_t o = 0; o < d_out; ++o) {
        for (std::size_t op = 0; op < d_out; ++op) {
            Cx sum(0.0, 0.0);
            for (std::size_t i = 0; i < d_in; ++i) {
                for (std::size_t jj = 0; jj < d_in; ++jj) {
                    sum += rho.at(i, jj) * j.matrix.at(i * d_out + o, jj * d_out + op);
                }
            }
            out.at(o, op) = sum;
        }
    }
    return out;
}

ComplexMatrix conditional_state(const ChoiOperator& j, const ComplexMatrix& rho, double tol) {
    ComplexMatrix mapped = apply_channel(j, rho);
    const double norm = trace(mapped).real();
    if (norm <= tol) {
        throw std::invalid_argument("conditional_state: outcome has vanishing probability");
    }
    return mapped * (1.0 / norm);
}

ChoiOperator depolarizing(double p, std::size_t n_qubits) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarizing: p outside [0, 1]");
    if (n_qubits == 0) throw std::invalid_argument("depolarizing: need at least one qubit");
    const std::size_t d = std::size_t{1} << n_qubits;

    ChoiOperator j;
    j.in_space = {"in", d};
    j.out_space = {"out", d};
    j.matrix = ComplexMatrix(d * d, d * d);
    // (1-p) |Φ⟩⟩⟨⟨Φ| + (p/d) I ⊗ I
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            j.matrix.at(i * d + i, k * d + k) += 1.0 - p;
        }
    }
    for (std::size_t r = 0; r < d * d; ++r) {
        j.matrix.at(r, r) += p / static_cast<double>(d);
    }
    return j;
}

void validate_instrument(const Instrument& instr, double tol) {
    if (instr.povm.empty() || instr.povm.size() != instr.outputs.size()) {
        throw std::invalid_argument("instrument: povm/outputs size mismatch");
    }
    const std::size_t d = instr.space.dim;
    ComplexMatrix sum(d, d);
    for (const ComplexMatrix& m : instr.povm) {
        if (!m.is_square() || m.rows() != d) {
            throw std::invalid_argument("instrument: effect dimension mismatch");
        }
        if (!is_psd(m, tol)) throw std::invalid_argument("instrument: effect is not PSD");
        sum = sum + m;
    }
    if (max_abs_diff(sum, ComplexMatrix::identity(d)) > tol) {
        throw std::invalid_argument("instrument: effects do not sum to identity");
    }
    for (const ComplexMatrix& s : instr.outputs) {
        if (!s.is_square()) throw std::invalid_argument("instrument: output state not square");
        if (!is_psd(s, tol)) throw std::invalid_argument("instrument: output state not PSD");
        if (std::abs(trace(s).real() - 1.0) > tol) {
            throw std::invalid_argument("instrument: output state trace != 1");
        }
    }
}

std::vector<InstrumentBranch> apply_instrument(const Instrument& instr,
                                               const ComplexMatrix& rho) {
    validate_instrument(instr);
    if (!rho.is_square() || rho.rows() != instr.space.dim) {
        throw std::invalid_argument("apply_instrument: state dimension mismatch");
    }
    std::vector<InstrumentBranch> branches;
    branches.reserve(instr.povm.size());
    for (std::size_t k = 0; k < instr.povm.size(); ++k) {
        const double p = trace(matmul(instr.povm[k], rho)).real();
        branches.push_back({p, instr.outputs[k]});
    }
    return branches;
}

ChoiOperator instrument_total_choi(const Instrument& instr) {
    validate_instrument(instr);
    const std::size_t d_in = instr.space.dim;
    const std::size_t d_out = instr.outputs.front().rows();

    ChoiOperator j;
    j.in_space = {instr.space.name + "_in", d_in};
    j.out_space = {instr.space.name + "_out", d_out};
    j.matrix = ComplexMatrix(d_in * d_out, d_in * d_out);
    // Branch k contributes Choi(ρ ↦ Tr[M_k ρ] σ_k) = M_kᵀ ⊗ σ_k.
    for (std::size_t k = 0; k < instr.povm.size(); ++k) {
        j.matrix = j.matrix + kron(transpose(instr.povm[k]), instr.outputs[k]);
    }
    return j;
}

ChoiOperator do_intervention(const ComplexMatrix& sigma, const SpaceLabel& in_space) {
    if (!sigma.is_square()) throw std::invalid_argument("do_intervention: state not square");
    if (!is_psd(sigma, kDefaultTol) || std::abs(trace(sigma).real() - 1.0) > kDefaultTol) {
        throw std::invalid_argument("do_intervention: sigma is not a unit-trace PSD state");
    }
    ChoiOperator j;
    j.in_space = in_space;
    j.out_space = {in_space.name + "_out", sigma.rows()};
    j.matrix = kron(ComplexMatrix::identity(in_space.dim), sigma);
    return j;
}

ChoiOperator compose(const ChoiOperator& second, const ChoiOperator& first) {
    if (first.out_space.dim != second.in_space.dim) {
        throw std::invalid_argument("compose: intermediate dimension mismatch");
    }
    const std::size_t d_x = first.in_space.dim;
    const std::size_t d_s = first.out_space.dim;
    const std::size_t d_y = second.out_space.dim;

    ChoiOperator out;
    out.in_space = first.in_space;
    out.out_space = second.out_space;
    out.matrix = ComplexMatrix(d_x * d_y, d_x * d_y);
    // Contraction over the intermediate space pairs first's output indices
    // with second's input indices, transposed on one side.
    for (std::size_t x = 0; x < d_x; ++x) {
        for (std::size_t xp = 0; xp < d_x; ++xp) {
            for (std::size_t y = 0; y < d_y; ++y) {
                for (std::size_t yp = 0; yp < d_y; ++yp) {
                    Cx sum(0.0, 0.0);
                    for (std::size_t s = 0; s < d_s; ++s) {
                        for (std::size_t sp = 0; sp < d_s; ++sp) {
                            sum += first.matrix.at(x * d_s + sp, xp * d_s + s) *
                                   second.matrix.at(sp * d_y + y, s * d_y + yp);
                        }
                    }
                    out.matrix.at(x * d_y + y, xp * d_y + yp) = sum;
                }
            }
        }
    }
    return out;
}

}  // namespace causalq
