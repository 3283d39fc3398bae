#include "causalq/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "causalq/matrix.hpp"
#include "causalq/tensor.hpp"

namespace causalq {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Qubit q occupies index bit (n-1-q): qubit 0 is the most significant.
std::size_t qubit_mask(std::size_t n_qubits, std::size_t q) {
    return std::size_t{1} << (n_qubits - 1 - q);
}

void apply_h_vec(std::vector<Cx>& amp, std::size_t mask) {
    for (std::size_t i = 0; i < amp.size(); ++i) {
        if (i & mask) continue;
        const Cx a = amp[i];
        const Cx b = amp[i | mask];
        amp[i] = (a + b) * kInvSqrt2;
        amp[i | mask] = (a - b) * kInvSqrt2;
    }
}

void apply_x_vec(std::vector<Cx>& amp, std::size_t mask) {
    for (std::size_t i = 0; i < amp.size(); ++i) {
        if (!(i & mask)) std::swap(amp[i], amp[i | mask]);
    }
}

// CSWAP permutes basis states: when the control bit is set, the two target
// bits exchange. Involution, so one pass over the (01)->(10) pairs suffices.
void apply_cswap_vec(std::vector<Cx>& amp, std::size_t cmask, std::size_t amask,
                     std::size_t bmask) {
    for (std::size_t i = 0; i < amp.size(); ++i) {
        if ((i & cmask) && (i & amask) && !(i & bmask)) {
            std::swap(amp[i], amp[(i & ~amask) | bmask]);
        }
    }
}

std::size_t cswap_image(std::size_t i, std::size_t cmask, std::size_t amask,
                        std::size_t bmask) {
    if (!(i & cmask)) return i;
    const bool a = i & amask;
    const bool b = i & bmask;
    if (a == b) return i;
    return (i ^ amask) ^ bmask;
}

void apply_gate_density(ComplexMatrix& rho, const CircuitOp& op, std::size_t n) {
    const std::size_t dim = rho.rows();
    switch (op.gate) {
        case GateKind::H: {
            const std::size_t mask = qubit_mask(n, op.qubits[0]);
            // Left-multiply by H (rows), then right-multiply by H (columns);
            // H is real symmetric so no conjugation is needed.
            for (std::size_t c = 0; c < dim; ++c) {
                for (std::size_t r = 0; r < dim; ++r) {
                    if (r & mask) continue;
                    const Cx a = rho.at(r, c);
                    const Cx b = rho.at(r | mask, c);
                    rho.at(r, c) = (a + b) * kInvSqrt2;
                    rho.at(r | mask, c) = (a - b) * kInvSqrt2;
                }
            }
            for (std::size_t r = 0; r < dim; ++r) {
                for (std::size_t c = 0; c < dim; ++c) {
                    if (c & mask) continue;
                    const Cx a = rho.at(r, c);
                    const Cx b = rho.at(r, c | mask);
                    rho.at(r, c) = (a + b) * kInvSqrt2;
                    rho.at(r, c | mask) = (a - b) * kInvSqrt2;
                }
            }
            break;
        }
        case GateKind::X: {
            const std::size_t mask = qubit_mask(n, op.qubits[0]);
            ComplexMatrix out(dim, dim);
            for (std::size_t r = 0; r < dim; ++r) {
                for (std::size_t c = 0; c < dim; ++c) {
                    out.at(r, c) = rho.at(r ^ mask, c ^ mask);
                }
            }
            rho = std::move(out);
            break;
        }
        case GateKind::CSwap: {
            const std::size_t cmask = qubit_mask(n, op.qubits[0]);
            const std::size_t amask = qubit_mask(n, op.qubits[1]);
            const std::size_t bmask = qubit_mask(n, op.qubits[2]);
            ComplexMatrix out(dim, dim);
            for (std::size_t r = 0; r < dim; ++r) {
                const std::size_t pr = cswap_image(r, cmask, amask, bmask);
                for (std::size_t c = 0; c < dim; ++c) {
                    out.at(r, c) = rho.at(pr, cswap_image(c, cmask, amask, bmask));
                }
            }
            rho = std::move(out);
            break;
        }
    }
}

std::vector<SpaceLabel> qubit_spaces(std::size_t n) {
    std::vector<SpaceLabel> spaces;
    spaces.reserve(n);
    for (std::size_t q = 0; q < n; ++q) {
        spaces.push_back({"q" + std::to_string(q), 2});
    }
    return spaces;
}

void apply_depolarize_density(ComplexMatrix& rho, const CircuitOp& op, std::size_t n) {
    if (op.p == 0.0) return;
    const std::vector<SpaceLabel> spaces = qubit_spaces(n);

    std::vector<bool> hit(n, false);
    for (std::size_t q : op.qubits) hit[q] = true;
    std::vector<std::string> kept_names;
    std::vector<std::string> original_order;
    for (std::size_t q = 0; q < n; ++q) {
        original_order.push_back(spaces[q].name);
        if (!hit[q]) kept_names.push_back(spaces[q].name);
    }

    const std::size_t hit_dim = std::size_t{1} << op.qubits.size();
    ComplexMatrix mixed = ComplexMatrix::identity(hit_dim) * (1.0 / double(hit_dim));

    ComplexMatrix replaced;
    std::vector<SpaceLabel> product_spaces;
    if (kept_names.empty()) {
        replaced = mixed * trace(rho).real();
        rho = rho * (1.0 - op.p) + replaced * op.p;
        return;
    }
    const ComplexMatrix rest = partial_trace(rho, spaces, kept_names);
    replaced = kron(rest, mixed);
    for (const std::string& name : kept_names) {
        product_spaces.push_back({name, 2});
    }
    for (std::size_t q : op.qubits) product_spaces.push_back({spaces[q].name, 2});
    replaced = permute_spaces(replaced, product_spaces, original_order);
    rho = rho * (1.0 - op.p) + replaced * op.p;
}

void apply_dephase_density(ComplexMatrix& rho, const CircuitOp& op, std::size_t n) {
    const std::size_t mask = qubit_mask(n, op.qubits[0]);
    for (std::size_t r = 0; r < rho.rows(); ++r) {
        for (std::size_t c = 0; c < rho.cols(); ++c) {
            if ((r & mask) != (c & mask)) rho.at(r, c) = 0.0;
        }
    }
}

struct MeasurementLayout {
    std::vector<std::size_t> bit_to_qubit;  // indexed by classical bit
    BitRoles roles;
};

MeasurementLayout measurement_layout(const Circuit& c) {
    std::size_t max_bit = 0;
    std::size_t count = 0;
    for (const CircuitOp& op : c.ops) {
        if (op.kind != OpKind::Measure) continue;
        max_bit = std::max(max_bit, op.bit);
        ++count;
    }
    if (count == 0) {
        throw std::invalid_argument("circuit has no measurements");
    }
    if (max_bit + 1 != count) {
        throw std::invalid_argument("classical bits must be contiguous from 0");
    }
    MeasurementLayout layout;
    layout.bit_to_qubit.resize(count);
    for (const CircuitOp& op : c.ops) {
        if (op.kind != OpKind::Measure) continue;
        layout.bit_to_qubit[op.bit] = op.qubits[0];
        if (c.control_qubit && op.qubits[0] == *c.control_qubit) {
            layout.roles.control = op.bit;
        } else if (!layout.roles.target) {
            // First non-control readout doubles as the target role.
            layout.roles.target = op.bit;
        }
    }
    return layout;
}

OutcomeDistribution distribution_from_probs(const Circuit& c,
                                            const std::vector<double>& index_probs) {
    const MeasurementLayout layout = measurement_layout(c);
    const std::size_t m = layout.bit_to_qubit.size();
    const std::size_t n_labels = std::size_t{1} << m;

    OutcomeDistribution dist;
    dist.roles = layout.roles;
    dist.labels.reserve(n_labels);
    dist.probs.assign(n_labels, 0.0);
    for (std::size_t v = 0; v < n_labels; ++v) {
        std::string label(m, '0');
        for (std::size_t b = 0; b < m; ++b) {
            if (v & (std::size_t{1} << (m - 1 - b))) label[b] = '1';
        }
        dist.labels.push_back(label);
    }

    for (std::size_t i = 0; i < index_probs.size(); ++i) {
        if (index_probs[i] == 0.0) continue;
        std::size_t v = 0;
        for (std::size_t b = 0; b < m; ++b) {
            const std::size_t mask = qubit_mask(c.n_qubits, layout.bit_to_qubit[b]);
            v = (v << 1) | ((i & mask) ? 1 : 0);
        }
        dist.probs[v] += index_probs[i];
    }
    return dist;
}

}  // namespace

OutcomeDistribution simulate_statevector(const Circuit& c) {
    validate_circuit(c);
    if (c.has_noise()) {
        throw std::invalid_argument("statevector path cannot simulate noise ops");
    }
    const std::size_t dim = std::size_t{1} << c.n_qubits;
    std::vector<Cx> amp(dim, Cx(0.0, 0.0));
    amp[0] = 1.0;

    for (const CircuitOp& op : c.ops) {
        if (op.kind != OpKind::Gate) continue;
        switch (op.gate) {
            case GateKind::H:
                apply_h_vec(amp, qubit_mask(c.n_qubits, op.qubits[0]));
                break;
            case GateKind::X:
                apply_x_vec(amp, qubit_mask(c.n_qubits, op.qubits[0]));
                break;
            case GateKind::CSwap:
                apply_cswap_vec(amp, qubit_mask(c.n_qubits, op.qubits[0]),
                                qubit_mask(c.n_qubits, op.qubits[1]),
                                qubit_mask(c.n_qubits, op.qubits[2]));
                break;
        }
    }

    std::vector<double> probs(dim);
    for (std::size_t i = 0; i < dim; ++i) probs[i] = std::norm(amp[i]);
    return distribution_from_probs(c, probs);
}

OutcomeDistribution simulate_density(const Circuit& c) {
    validate_circuit(c);
    const std::size_t dim = std::size_t{1} << c.n_qubits;
    ComplexMatrix rho(dim, dim);
    rho.at(0, 0) = 1.0;

    for (const CircuitOp& op : c.ops) {
        switch (op.kind) {
            case OpKind::Gate:
                apply_gate_density(rho, op, c.n_qubits);
                break;
            case OpKind::Depolarize:
                apply_depolarize_density(rho, op, c.n_qubits);
                break;
            case OpKind::Dephase:
                apply_dephase_density(rho, op, c.n_qubits);
                break;
            case OpKind::Measure:
                break;
        }
    }

    std::vector<double> probs(dim);
    for (std::size_t i = 0; i < dim; ++i) probs[i] = rho.at(i, i).real();
    return distribution_from_probs(c, probs);
}

OutcomeDistribution simulate_exact(const Circuit& c) {
    return c.has_noise() ? simulate_density(c) : simulate_statevector(c);
}

}  // namespace causalq
