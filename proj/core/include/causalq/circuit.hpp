#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace causalq {

enum class GateKind { H, X, CSwap };

enum class OpKind { Gate, Depolarize, Dephase, Measure };

struct CircuitOp {
    OpKind kind = OpKind::Gate;
    GateKind gate = GateKind::H;
    std::vector<std::size_t> qubits;  // gate targets or noise support
    double p = 0.0;                   // depolarizing probability
    std::size_t bit = 0;              // classical bit for Measure

    static CircuitOp h(std::size_t q);
    static CircuitOp x(std::size_t q);
    static CircuitOp cswap(std::size_t control, std::size_t a, std::size_t b);
    static CircuitOp depolarize(double p, std::vector<std::size_t> qubits);
    static CircuitOp dephase(std::size_t q);
    static CircuitOp measure(std::size_t q, std::size_t bit);
};

struct NoiseModel {
    double p1 = 0.0;  // after each 1-qubit gate, on that gate's qubit
    double p3 = 0.0;  // after each CSWAP, on all three qubits
};

struct Circuit {
    std::size_t n_qubits = 0;
    std::vector<CircuitOp> ops;
    std::optional<std::size_t> control_qubit;

    bool has_noise() const;
    std::size_t measured_bits() const;
};

// Throws std::invalid_argument on out-of-range qubits, duplicate qubits
// within one gate, duplicate classical bits, a probability outside [0, 1],
// or any gate/noise op appearing after a measurement (measurements are
// terminal).
void validate_circuit(const Circuit& c);

// Control q0, target q1, ancilla q2. The swap conjugation routes the target
// through H when the control is 0 and through X when it is 1; q0 and q1 are
// then read out as bits 0 and 1 ("<control><target>" labels).
Circuit build_switch_circuit(const std::optional<NoiseModel>& noise = std::nullopt);

// Copy of `c` with the control fully dephased immediately after its
// preparation, so the run behaves as an even mixture of the two definite
// control branches.
Circuit decohered_control_variant(const Circuit& c);

}  // namespace causalq
