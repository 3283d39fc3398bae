#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "causalq/circuit.hpp"
#include "causalq/sampling.hpp"
#include "causalq/simulate.hpp"

using namespace causalq;

namespace {

double tv(const std::vector<double>& p, const std::vector<double>& q) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
    return 0.5 * acc;
}

std::vector<double> empirical(const OutcomeCounts& k) {
    std::vector<double> p;
    p.reserve(k.counts.size());
    for (const std::uint64_t c : k.counts) {
        p.push_back(static_cast<double>(c) / static_cast<double>(k.shots));
    }
    return p;
}

}  // namespace

TEST_CASE("switch circuit structure") {
    const Circuit ideal = build_switch_circuit();
    CHECK(ideal.n_qubits == 3);
    CHECK(ideal.control_qubit == 0);
    CHECK_FALSE(ideal.has_noise());
    CHECK(ideal.measured_bits() == 2);
    REQUIRE(ideal.ops.size() == 7);
    CHECK(ideal.ops[0].gate == GateKind::H);
    CHECK(ideal.ops[0].qubits == std::vector<std::size_t>{0});
    CHECK(ideal.ops[1].gate == GateKind::CSwap);
    CHECK(ideal.ops[2].gate == GateKind::H);
    CHECK(ideal.ops[2].qubits == std::vector<std::size_t>{1});
    CHECK(ideal.ops[3].gate == GateKind::X);
    CHECK(ideal.ops[3].qubits == std::vector<std::size_t>{2});
    CHECK(ideal.ops[4].gate == GateKind::CSwap);
    CHECK(ideal.ops[5].kind == OpKind::Measure);
    CHECK(ideal.ops[6].kind == OpKind::Measure);
    CHECK_NOTHROW(validate_circuit(ideal));

    SUBCASE("noise interleaves after every gate") {
        const Circuit noisy = build_switch_circuit(NoiseModel{0.01, 0.03});
        CHECK(noisy.has_noise());
        REQUIRE(noisy.ops.size() == 12);
        const std::vector<OpKind> kinds = {
            OpKind::Gate, OpKind::Depolarize, OpKind::Gate, OpKind::Depolarize,
            OpKind::Gate, OpKind::Depolarize, OpKind::Gate, OpKind::Depolarize,
            OpKind::Gate, OpKind::Depolarize, OpKind::Measure, OpKind::Measure};
        for (std::size_t i = 0; i < kinds.size(); ++i) CHECK(noisy.ops[i].kind == kinds[i]);
        CHECK(noisy.ops[1].p == 0.01);
        CHECK(noisy.ops[1].qubits == std::vector<std::size_t>{0});
        CHECK(noisy.ops[3].p == 0.03);
        CHECK(noisy.ops[3].qubits == std::vector<std::size_t>{0, 1, 2});
        CHECK(noisy.ops[9].p == 0.03);
    }
}

TEST_CASE("validate_circuit rejects malformed circuits") {
    Circuit c;
    c.n_qubits = 2;

    c.ops = {CircuitOp::h(5)};
    CHECK_THROWS_AS(validate_circuit(c), std::invalid_argument);

    c.ops = {CircuitOp::cswap(0, 1, 1)};
    CHECK_THROWS_AS(validate_circuit(c), std::invalid_argument);

    c.ops = {CircuitOp::measure(0, 0), CircuitOp::measure(1, 0)};
    CHECK_THROWS_AS(validate_circuit(c), std::invalid_argument);

    c.ops = {CircuitOp::depolarize(1.5, {0})};
    CHECK_THROWS_AS(validate_circuit(c), std::invalid_argument);

    c.ops = {CircuitOp::measure(0, 0), CircuitOp::h(1)};
    CHECK_THROWS_AS(validate_circuit(c), std::invalid_argument);
}

TEST_CASE("ideal switch circuit distribution") {
    const OutcomeDistribution d = simulate_exact(build_switch_circuit());
    REQUIRE(d.labels == std::vector<std::string>{"00", "01", "10", "11"});
    CHECK(d.probs[0] == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(d.probs[1] == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(d.probs[2] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(d.probs[3] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(d.roles.control == 0);
    CHECK(d.roles.target == 1);

    SUBCASE("statevector and density paths agree") {
        const OutcomeDistribution dens = simulate_density(build_switch_circuit());
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(d.probs[i] - dens.probs[i]) < 1e-10);
        }
    }

    SUBCASE("zero-strength noise changes nothing") {
        const OutcomeDistribution z = simulate_exact(build_switch_circuit(NoiseModel{0, 0}));
        for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(d.probs[i] - z.probs[i]) < 1e-12);
    }

    SUBCASE("the statevector path rejects noise ops") {
        CHECK_THROWS_AS(simulate_statevector(build_switch_circuit(NoiseModel{0.01, 0.03})),
                        std::invalid_argument);
    }
}

TEST_CASE("small-circuit goldens") {
    SUBCASE("single Hadamard") {
        Circuit c;
        c.n_qubits = 1;
        c.ops = {CircuitOp::h(0), CircuitOp::measure(0, 0)};
        const OutcomeDistribution d = simulate_exact(c);
        REQUIRE(d.labels == std::vector<std::string>{"0", "1"});
        CHECK(d.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(d.probs[1] == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("no gates leaves the all-zero label certain") {
        Circuit c;
        c.n_qubits = 3;
        c.ops = {CircuitOp::measure(0, 0), CircuitOp::measure(1, 1)};
        const OutcomeDistribution d = simulate_exact(c);
        CHECK(d.probs[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("noisy switch circuit stays a distribution and leaks into '10'") {
    const OutcomeDistribution d =
        simulate_exact(build_switch_circuit(NoiseModel{0.01, 0.03}));
    double total = 0.0;
    for (const double p : d.probs) {
        CHECK(p >= 0.0);
        total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(d.probs[2] > 1e-4);
}

TEST_CASE("decohering the control leaves the Z-basis joint unchanged") {
    const Circuit ideal = build_switch_circuit();
    const Circuit dec = decohered_control_variant(ideal);
    CHECK(dec.ops.size() == ideal.ops.size() + 1);
    CHECK(dec.has_noise());

    const OutcomeDistribution a = simulate_exact(ideal);
    const OutcomeDistribution b = simulate_exact(dec);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(a.probs[i] - b.probs[i]) < 1e-12);
}

TEST_CASE("sampling") {
    const OutcomeDistribution d = simulate_exact(build_switch_circuit());

    SUBCASE("same seed reproduces counts exactly") {
        const OutcomeCounts a = sample_shots(d, 5000, 42);
        const OutcomeCounts b = sample_shots(d, 5000, 42);
        CHECK(a.counts == b.counts);
        CHECK(a.seed == 42);
        CHECK(a.shots == 5000);
        std::uint64_t total = 0;
        for (const std::uint64_t c : a.counts) total += c;
        CHECK(total == 5000);
    }

    SUBCASE("different seeds give different counts") {
        const OutcomeCounts a = sample_shots(d, 5000, 1);
        const OutcomeCounts b = sample_shots(d, 5000, 2);
        CHECK(a.counts != b.counts);
    }

    SUBCASE("a point distribution puts every shot on its label") {
        OutcomeDistribution point;
        point.labels = {"0", "1"};
        point.probs = {0.0, 1.0};
        const OutcomeCounts k = sample_shots(point, 1000, 9);
        CHECK(k.counts[0] == 0);
        CHECK(k.counts[1] == 1000);
    }

    SUBCASE("empirical frequencies converge on the exact distribution") {
        const OutcomeCounts k = sample_shots(d, 100000, 7);
        CHECK(tv(empirical(k), d.probs) < 0.01);
    }
}

TEST_CASE("conditional tables") {
    OutcomeDistribution d;
    d.labels = {"00", "01", "10", "11"};
    d.probs = {0.25, 0.25, 0.0, 0.5};
    d.roles.control = 0;
    d.roles.target = 1;

    const ConditionalTable t = conditional_table(d);
    REQUIRE(t.rows[0].has_value());
    REQUIRE(t.rows[1].has_value());
    CHECK((*t.rows[0])[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK((*t.rows[0])[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK((*t.rows[1])[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK((*t.rows[1])[1] == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(conditional_tv(t).has_value());
    CHECK(*conditional_tv(t) == doctest::Approx(0.5).epsilon(1e-12));

    SUBCASE("a zero-mass conditioning row is absent") {
        OutcomeDistribution lop = d;
        lop.probs = {0.5, 0.5, 0.0, 0.0};
        const ConditionalTable u = conditional_table(lop);
        CHECK(u.rows[0].has_value());
        CHECK_FALSE(u.rows[1].has_value());
        CHECK_FALSE(conditional_tv(u).has_value());
    }
}

TEST_CASE("switch experiment end to end") {
    const SwitchExperimentResult r = run_switch_experiment(100000, 11);
    CHECK(r.exact.probs[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.joint.shots == 100000);
    REQUIRE(conditional_tv(r.conditionals).has_value());
    CHECK(*conditional_tv(r.conditionals) == doctest::Approx(0.5).epsilon(0.02));

    SUBCASE("noise shrinks the conditional gap") {
        const SwitchExperimentResult n =
            run_switch_experiment(100000, 11, NoiseModel{0.01, 0.03});
        REQUIRE(conditional_tv(n.conditionals).has_value());
        CHECK(*conditional_tv(n.conditionals) < *conditional_tv(r.conditionals));
        CHECK(*conditional_tv(n.conditionals) > 0.3);
    }
}
