#include "causalq/circuit.hpp"

#include <set>
#include <stdexcept>

namespace causalq {

CircuitOp CircuitOp::h(std::size_t q) {
    CircuitOp op;
    op.kind = OpKind::Gate;
    op.gate = GateKind::H;
    op.qubits = {q};
    return op;
}

CircuitOp CircuitOp::x(std::size_t q) {
    CircuitOp op;
    op.kind = OpKind::Gate;
    op.gate = GateKind::X;
    op.qubits = {q};
    return op;
}

CircuitOp CircuitOp::cswap(std::size_t control, std::size_t a, std::size_t b) {
    CircuitOp op;
    op.kind = OpKind::Gate;
    op.gate = GateKind::CSwap;
    op.qubits = {control, a, b};
    return op;
}

CircuitOp CircuitOp::depolarize(double p, std::vector<std::size_t> qubits) {
    CircuitOp op;
    op.kind = OpKind::Depolarize;
    op.p = p;
    op.qubits = std::move(qubits);
    return op;
}

CircuitOp CircuitOp::dephase(std::size_t q) {
    CircuitOp op;
    op.kind = OpKind::Dephase;
    op.qubits = {q};
    return op;
}

CircuitOp CircuitOp::measure(std::size_t q, std::size_t bit) {
    CircuitOp op;
    op.kind = OpKind::Measure;
    op.qubits = {q};
    op.bit = bit;
    return op;
}

bool Circuit::has_noise() const {
    for (const CircuitOp& op : ops) {
        if (op.kind == OpKind::Depolarize || op.kind == OpKind::Dephase) return true;
    }
    return false;
}

std::size_t Circuit::measured_bits() const {
    std::size_t n = 0;
    for (const CircuitOp& op : ops) {
        if (op.kind == OpKind::Measure) ++n;
    }
    return n;
}

void validate_circuit(const Circuit& c) {
    bool measuring = false;
    std::set<std::size_t> bits;
    for (const CircuitOp& op : c.ops) {
        std::set<std::size_t> seen;
        for (std::size_t q : op.qubits) {
            if (q >= c.n_qubits) {
                throw std::invalid_argument("circuit op references qubit out of range");
            }
            if (!seen.insert(q).second) {
                throw std::invalid_argument("circuit op repeats a qubit");
            }
        }
        switch (op.kind) {
            case OpKind::Gate: {
                const std::size_t want = op.gate == GateKind::CSwap ? 3 : 1;
                if (op.qubits.size() != want) {
                    throw std::invalid_argument("gate has wrong qubit count");
                }
                break;
            }
            case OpKind::Depolarize:
                if (op.qubits.empty()) {
                    throw std::invalid_argument("depolarizing op needs at least one qubit");
                }
                if (op.p < 0.0 || op.p > 1.0) {
                    throw std::invalid_argument("depolarizing probability outside [0, 1]");
                }
                break;
            case OpKind::Dephase:
                if (op.qubits.size() != 1) {
                    throw std::invalid_argument("dephasing op acts on exactly one qubit");
                }
                break;
            case OpKind::Measure:
                if (op.qubits.size() != 1) {
                    throw std::invalid_argument("measurement reads exactly one qubit");
                }
                if (!bits.insert(op.bit).second) {
                    throw std::invalid_argument("classical bit assigned twice");
                }
                measuring = true;
                break;
        }
        if (op.kind != OpKind::Measure && measuring) {
            throw std::invalid_argument("ops after a measurement are not supported");
        }
    }
    if (c.control_qubit && *c.control_qubit >= c.n_qubits) {
        throw std::invalid_argument("control qubit out of range");
    }
}

Circuit build_switch_circuit(const std::optional<NoiseModel>& noise) {
    Circuit c;
    c.n_qubits = 3;
    c.control_qubit = 0;

    const auto noise_1q = [&](std::size_t q) {
        if (noise) c.ops.push_back(CircuitOp::depolarize(noise->p1, {q}));
    };
    const auto noise_3q = [&] {
        if (noise) c.ops.push_back(CircuitOp::depolarize(noise->p3, {0, 1, 2}));
    };

    c.ops.push_back(CircuitOp::h(0));
    noise_1q(0);
    c.ops.push_back(CircuitOp::cswap(0, 1, 2));
    noise_3q();
    c.ops.push_back(CircuitOp::h(1));
    noise_1q(1);
    c.ops.push_back(CircuitOp::x(2));
    noise_1q(2);
    c.ops.push_back(CircuitOp::cswap(0, 1, 2));
    noise_3q();
    c.ops.push_back(CircuitOp::measure(0, 0));
    c.ops.push_back(CircuitOp::measure(1, 1));
    validate_circuit(c);
    return c;
}

Circuit decohered_control_variant(const Circuit& c) {
    if (!c.control_qubit) {
        throw std::invalid_argument("decohered_control_variant: circuit has no designated control");
    }
    const std::size_t control = *c.control_qubit;
    Circuit out = c;
    // The control's preparation is its first gate; dephase right after it (or
    // at the very front if no gate ever touches the control).
    std::size_t insert_at = 0;
    for (std::size_t i = 0; i < out.ops.size(); ++i) {
        const CircuitOp& op = out.ops[i];
        if (op.kind != OpKind::Gate) continue;
        bool touches = false;
        for (std::size_t q : op.qubits) touches |= (q == control);
        if (touches) {
            insert_at = i + 1;
            break;
        }
    }
    out.ops.insert(out.ops.begin() + static_cast<std::ptrdiff_t>(insert_at),
                   CircuitOp::dephase(control));
    validate_circuit(out);
    return out;
}

}  // namespace causalq
