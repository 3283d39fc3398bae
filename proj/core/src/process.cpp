#include "causalq/process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "causalq/random_states.hpp"
#include "causalq/tensor.hpp"

namespace causalq {

namespace {

void require_state(const ComplexMatrix& rho, const char* what) {
    if (!rho.is_square()) {
        throw std::invalid_argument(std::string(what) + ": not square");
    }
    if (!is_psd(rho, kDefaultTol)) {
        throw std::invalid_argument(std::string(what) + ": not PSD");
    }
    if (std::abs(trace(rho).real() - 1.0) > kDefaultTol) {
        throw std::invalid_argument(std::string(what) + ": trace != 1");
    }
}

// Unnormalized identity link Σ_ij |ii⟩⟨jj| between two d-dimensional factors.
ComplexMatrix identity_link(std::size_t d) {
    ComplexMatrix wire(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            wire.at(i * d + i, j * d + j) = 1.0;
        }
    }
    return wire;
}

std::size_t space_index(const std::vector<SpaceLabel>& spaces, const std::string& name) {
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        if (spaces[i].name == name) return i;
    }
    return spaces.size();
}

}  // namespace

BornTerm BornTerm::channel(const ChoiOperator& j) {
    BornTerm term;
    term.matrix = j.matrix;
    term.spaces = {j.in_space, j.out_space};
    term.kind = SlotKind::ChannelChoi;
    return term;
}

BornTerm BornTerm::effect(const ComplexMatrix& m, const SpaceLabel& space) {
    if (!m.is_square() || m.rows() != space.dim) {
        throw std::invalid_argument("BornTerm::effect: dimension mismatch for '" +
                                    space.name + "'");
    }
    BornTerm term;
    term.matrix = m;
    term.spaces = {space};
    term.kind = SlotKind::TerminalEffect;
    return term;
}

BornTerm BornTerm::identity_effect(const SpaceLabel& space) {
    return effect(ComplexMatrix::identity(space.dim), space);
}

double born_probability(const ProcessMatrix& w, const std::vector<BornTerm>& terms) {
    if (w.matrix.rows() != total_dim(w.spaces) || !w.matrix.is_square()) {
        throw std::invalid_argument("born_probability: matrix shape does not match labels");
    }

    std::vector<bool> covered(w.spaces.size(), false);
    ComplexMatrix assembled = ComplexMatrix::identity(1);
    std::vector<SpaceLabel> assembled_spaces;
    for (const BornTerm& term : terms) {
        for (const SpaceLabel& s : term.spaces) {
            const std::size_t idx = space_index(w.spaces, s.name);
            if (idx == w.spaces.size()) {
                throw std::invalid_argument("born_probability: unknown space '" + s.name + "'");
            }
            if (w.spaces[idx].dim != s.dim) {
                throw std::invalid_argument("born_probability: dimension mismatch on '" +
                                            s.name + "'");
            }
            if (covered[idx]) {
                throw std::invalid_argument("born_probability: space '" + s.name +
                                            "' covered twice");
            }
            covered[idx] = true;
        }
        const ComplexMatrix& ins =
            term.kind == SlotKind::TerminalEffect ? transpose(term.matrix) : term.matrix;
        if (ins.rows() != total_dim(term.spaces) || !ins.is_square()) {
            throw std::invalid_argument("born_probability: term shape does not match labels");
        }
        assembled = kron(assembled, ins);
        assembled_spaces.insert(assembled_spaces.end(), term.spaces.begin(), term.spaces.end());
    }
    for (std::size_t i = 0; i < covered.size(); ++i) {
        if (!covered[i]) {
            throw std::invalid_argument("born_probability: space '" + w.spaces[i].name +
                                        "' not covered");
        }
    }

    std::vector<std::string> order;
    order.reserve(w.spaces.size());
    for (const SpaceLabel& s : w.spaces) order.push_back(s.name);
    const ComplexMatrix aligned = permute_spaces(assembled, assembled_spaces, order);

    Cx result(0.0, 0.0);
    const std::size_t n = w.matrix.rows();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            result += aligned.at(r, c) * w.matrix.at(c, r);
        }
    }
    return result.real();
}

ProcessMatrix link_product(const ProcessMatrix& a, const ProcessMatrix& b) {
    if (a.matrix.rows() != total_dim(a.spaces) || b.matrix.rows() != total_dim(b.spaces)) {
        throw std::invalid_argument("link_product: matrix shape does not match labels");
    }

    std::vector<SpaceLabel> shared;
    std::vector<SpaceLabel> a_rest, b_rest;
    for (const SpaceLabel& s : a.spaces) {
        const std::size_t idx = space_index(b.spaces, s.name);
        if (idx != b.spaces.size()) {
            if (b.spaces[idx].dim != s.dim) {
                throw std::invalid_argument("link_product: dimension mismatch on '" +
                                            s.name + "'");
            }
            shared.push_back(s);
        } else {
            a_rest.push_back(s);
        }
    }
    for (const SpaceLabel& s : b.spaces) {
        if (space_index(a.spaces, s.name) == a.spaces.size()) b_rest.push_back(s);
    }

    ProcessMatrix result;
    result.spaces = a_rest;
    result.spaces.insert(result.spaces.end(), b_rest.begin(), b_rest.end());

    if (shared.empty()) {
        result.matrix = kron(a.matrix, b.matrix);
        return result;
    }

    // Align a to [a_rest, shared] and b to [shared, b_rest].
    std::vector<std::string> a_order, b_order;
    for (const SpaceLabel& s : a_rest) a_order.push_back(s.name);
    for (const SpaceLabel& s : shared) a_order.push_back(s.name);
    for (const SpaceLabel& s : shared) b_order.push_back(s.name);
    for (const SpaceLabel& s : b_rest) b_order.push_back(s.name);
    const ComplexMatrix am = permute_spaces(a.matrix, a.spaces, a_order);
    const ComplexMatrix bm = permute_spaces(b.matrix, b.spaces, b_order);

    const std::size_t dx = total_dim(a_rest);
    const std::size_t ds = total_dim(shared);
    const std::size_t dy = total_dim(b_rest);

    // result[(x,y),(x',y')] = Σ_{s,s''} a[(x,s''),(x',s)] b[(s'',y),(s,y')],
    // i.e. the shared-sector transpose lands on the first factor.
    result.matrix = ComplexMatrix(dx * dy, dx * dy);
    for (std::size_t x = 0; x < dx; ++x) {
        for (std::size_t xp = 0; xp < dx; ++xp) {
            for (std::size_t y = 0; y < dy; ++y) {
                for (std::size_t yp = 0; yp < dy; ++yp) {
                    Cx sum(0.0, 0.0);
                    for (std::size_t s = 0; s < ds; ++s) {
                        for (std::size_t sp = 0; sp < ds; ++sp) {
                            sum += am.at(x * ds + sp, xp * ds + s) *
                                   bm.at(sp * dy + y, s * dy + yp);
                        }
                    }
                    result.matrix.at(x * dy + y, xp * dy + yp) = sum;
                }
            }
        }
    }
    return result;
}

ProcessMatrix fixed_order_process(const ComplexMatrix& rho_in, PartyOrder order) {
    require_state(rho_in, "fixed_order_process input");
    const std::size_t d = rho_in.rows();
    const ComplexMatrix wire = identity_link(d);
    const ComplexMatrix prep = transpose(rho_in);

    ProcessMatrix w;
    w.spaces = {{kSpaceAIn, d}, {kSpaceAOut, d}, {kSpaceBIn, d}, {kSpaceBOut, d},
                {kSpaceFuture, d}};
    if (order == PartyOrder::AThenB) {
        w.matrix = kron(prep, kron(wire, wire));
        return w;
    }
    // Build in wiring order [B_I, B_O, A_I, A_O, F], then restore the
    // canonical layout.
    const ComplexMatrix built = kron(prep, kron(wire, wire));
    const std::vector<SpaceLabel> built_spaces = {
        {kSpaceBIn, d}, {kSpaceBOut, d}, {kSpaceAIn, d}, {kSpaceAOut, d}, {kSpaceFuture, d}};
    w.matrix = permute_spaces(built, built_spaces,
                              {kSpaceAIn, kSpaceAOut, kSpaceBIn, kSpaceBOut, kSpaceFuture});
    return w;
}

ProcessMatrix state_prep_process(const ComplexMatrix& rho, const SpaceLabel& space) {
    require_state(rho, "state_prep_process input");
    if (rho.rows() != space.dim) {
        throw std::invalid_argument("state_prep_process: dimension mismatch");
    }
    ProcessMatrix w;
    w.spaces = {space};
    w.matrix = transpose(rho);
    return w;
}

ComplexMatrix switch_supermap(const std::vector<ComplexMatrix>& kraus_a,
                              const std::vector<ComplexMatrix>& kraus_b,
                              const ComplexMatrix& control_prep,
                              const ComplexMatrix& target_prep) {
    if (kraus_a.empty() || kraus_b.empty()) {
        throw std::invalid_argument("switch_supermap: empty Kraus list");
    }
    const std::size_t d = target_prep.rows();
    if (!target_prep.is_square()) {
        throw std::invalid_argument("switch_supermap: target prep not square");
    }
    if (!control_prep.is_square() || control_prep.rows() != 2) {
        throw std::invalid_argument("switch_supermap: control prep must be a qubit state");
    }
    for (const ComplexMatrix& k : kraus_a) {
        if (k.rows() != d || k.cols() != d) {
            throw std::invalid_argument("switch_supermap: Kraus A dimension mismatch");
        }
    }
    for (const ComplexMatrix& k : kraus_b) {
        if (k.rows() != d || k.cols() != d) {
            throw std::invalid_argument("switch_supermap: Kraus B dimension mismatch");
        }
    }

    ComplexMatrix p0(2, 2), p1(2, 2);
    p0.at(0, 0) = 1.0;
    p1.at(1, 1) = 1.0;

    const ComplexMatrix input = kron(target_prep, control_prep);
    ComplexMatrix joint(d * 2, d * 2);
    for (const ComplexMatrix& a : kraus_a) {
        for (const ComplexMatrix& b : kraus_b) {
            const ComplexMatrix k = kron(matmul(b, a), p0) + kron(matmul(a, b), p1);
            joint = joint + matmul(k, matmul(input, dagger(k)));
        }
    }
    return joint;
}

ProcessMatrix switch_process_matrix(const ComplexMatrix& control_prep,
                                    const ComplexMatrix& target_prep) {
    require_state(control_prep, "switch_process_matrix control prep");
    require_state(target_prep, "switch_process_matrix target prep");
    if (control_prep.rows() != 2) {
        throw std::invalid_argument("switch_process_matrix: control must be a qubit state");
    }
    const std::size_t d = target_prep.rows();

    const EigenResult target_eig = hermitian_eigen(target_prep);
    const EigenResult control_eig = hermitian_eigen(control_prep);

    ProcessMatrix w;
    w.spaces = {{kSpaceAIn, d},    {kSpaceAOut, d},   {kSpaceBIn, d},
                {kSpaceBOut, d},   {kSpaceFuture, d}, {kSpaceControl, 2}};
    const std::size_t full = total_dim(w.spaces);
    w.matrix = ComplexMatrix(full, full);

    // Flat index over [A_I, A_O, B_I, B_O, F, C].
    const auto idx = [d](std::size_t ai, std::size_t ao, std::size_t bi, std::size_t bo,
                         std::size_t f, std::size_t c) {
        return ((((ai * d + ao) * d + bi) * d + bo) * d + f) * 2 + c;
    };

    for (std::size_t kt = 0; kt < target_eig.values.size(); ++kt) {
        const double pt = target_eig.values[kt];
        if (pt <= 1e-12) continue;
        for (std::size_t kc = 0; kc < control_eig.values.size(); ++kc) {
            const double pc = control_eig.values[kc];
            if (pc <= 1e-12) continue;

            // Pure-process vector for this pair of preparation eigenvectors,
            // with amplitudes conjugated per the module convention. The c=0
            // branch wires prep -> A -> B -> F, the c=1 branch prep -> B -> A -> F.
            std::vector<Cx> vec(full, Cx(0.0, 0.0));
            const Cx g0 = std::conj(control_eig.vectors.at(0, kc));
            const Cx g1 = std::conj(control_eig.vectors.at(1, kc));
            for (std::size_t a = 0; a < d; ++a) {
                const Cx psi = std::conj(target_eig.vectors.at(a, kt));
                if (psi == Cx(0.0, 0.0)) continue;
                for (std::size_t o = 0; o < d; ++o) {
                    for (std::size_t f = 0; f < d; ++f) {
                        vec[idx(a, o, o, f, f, 0)] += g0 * psi;
                        vec[idx(o, f, a, o, f, 1)] += g1 * psi;
                    }
                }
            }
            w.matrix = w.matrix + ComplexMatrix::outer(vec) * (pt * pc);
        }
    }
    return w;
}

double interference_norm(const ProcessMatrix& w, double tol) {
    const std::size_t c_idx = space_index(w.spaces, kSpaceControl);
    if (c_idx == w.spaces.size()) {
        throw std::invalid_argument("interference_norm: process has no control space C");
    }
    if (w.spaces[c_idx].dim != 2) {
        throw std::invalid_argument("interference_norm: control space must be a qubit");
    }

    std::vector<std::string> order;
    std::vector<std::string> rest_names;
    for (const SpaceLabel& s : w.spaces) {
        if (s.name != kSpaceControl) {
            order.push_back(s.name);
            rest_names.push_back(s.name);
        }
    }
    order.push_back(kSpaceControl);
    const ComplexMatrix wm = permute_spaces(w.matrix, w.spaces, order);

    // A process that factors as (rest) ⊗ (control state) carries a definite
    // wiring with a bystander control; its control coherence is not an order
    // coherence, so it reports zero.
    const double t = trace(w.matrix).real();
    if (std::abs(t) > tol) {
        const ComplexMatrix rest = partial_trace(w.matrix, w.spaces, rest_names);
        const ComplexMatrix ctrl = partial_trace(w.matrix, w.spaces, {kSpaceControl});
        const ComplexMatrix product = kron(rest, ctrl) * (1.0 / t);
        const double scale = std::max(1.0, max_abs(wm));
        if (max_abs_diff(wm, product) <= tol * scale) return 0.0;
    }

    const std::size_t rest_dim = wm.rows() / 2;
    double worst = 0.0;
    for (std::size_t r = 0; r < rest_dim; ++r) {
        for (std::size_t c = 0; c < rest_dim; ++c) {
            worst = std::max(worst, std::abs(wm.at(r * 2 + 0, c * 2 + 1)));
        }
    }
    return worst;
}

ProcessReport validate_process(const ProcessMatrix& w, double tol) {
    ProcessReport report;
    if (w.matrix.rows() != total_dim(w.spaces) || !w.matrix.is_square()) {
        throw std::invalid_argument("validate_process: matrix shape does not match labels");
    }

    report.hermitian_ok = is_hermitian(w.matrix, tol);
    double violation = 0.0;
    if (report.hermitian_ok) {
        const EigenResult eig = hermitian_eigen(w.matrix, tol);
        const double min_eig = eig.values.empty() ? 0.0 : eig.values.back();
        report.psd_ok = min_eig >= -tol;
        if (min_eig < 0.0) violation = -min_eig;
    } else {
        report.psd_ok = false;
        violation = max_abs_diff(w.matrix, dagger(w.matrix));
    }

    // Party pairs by label convention; everything unpaired is terminal.
    struct Party {
        SpaceLabel in, out;
    };
    std::vector<Party> parties;
    std::vector<SpaceLabel> terminals;
    for (const SpaceLabel& s : w.spaces) {
        if (s.name.size() > 2 && s.name.ends_with("_I")) {
            const std::string base = s.name.substr(0, s.name.size() - 2);
            const std::size_t out_idx = space_index(w.spaces, base + "_O");
            if (out_idx != w.spaces.size()) {
                parties.push_back({s, w.spaces[out_idx]});
                continue;
            }
        }
        if (s.name.size() > 2 && s.name.ends_with("_O")) {
            const std::string base = s.name.substr(0, s.name.size() - 2);
            if (space_index(w.spaces, base + "_I") != w.spaces.size()) continue;
        }
        terminals.push_back(s);
    }

    double worst_norm = 0.0;
    SeededRng rng(0xCA05A10ULL);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<BornTerm> terms;
        for (const Party& party : parties) {
            if (party.in.dim != party.out.dim) {
                throw std::invalid_argument("validate_process: party '" + party.in.name +
                                            "' has mismatched input/output dims");
            }
            const std::vector<ComplexMatrix> kraus =
                random_cptp_kraus(party.in.dim, 2, rng);
            terms.push_back(BornTerm::channel(choi_from_kraus(kraus, party.in, party.out)));
        }
        for (const SpaceLabel& s : terminals) {
            terms.push_back(BornTerm::identity_effect(s));
        }
        const double p = born_probability(w, terms);
        worst_norm = std::max(worst_norm, std::abs(p - 1.0));
    }
    report.normalization_ok = worst_norm <= std::max(tol, 1e-9);
    report.max_violation = std::max(violation, worst_norm);
    return report;
}

}  // namespace causalq
