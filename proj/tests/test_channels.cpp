#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "causalq/channels.hpp"
#include "causalq/random_states.hpp"
#include "causalq/rng.hpp"
#include "causalq/tensor.hpp"

using namespace causalq;

namespace {

const double kS = 1.0 / std::sqrt(2.0);

ComplexMatrix hadamard() {
    return ComplexMatrix(2, 2, {Cx{kS, 0}, Cx{kS, 0}, Cx{kS, 0}, Cx{-kS, 0}});
}

ComplexMatrix pauli_x() {
    return ComplexMatrix(2, 2, {Cx{0, 0}, Cx{1, 0}, Cx{1, 0}, Cx{0, 0}});
}

// Reference construction straight from the definition J = Σ_ij |i⟩⟨j| ⊗ E(|i⟩⟨j|),
// with E evaluated through the Kraus operators by explicit loops.
ComplexMatrix choi_by_definition(const std::vector<ComplexMatrix>& kraus) {
    const std::size_t d_in = kraus.front().cols();
    const std::size_t d_out = kraus.front().rows();
    ComplexMatrix j(d_in * d_out, d_in * d_out);
    for (std::size_t i = 0; i < d_in; ++i) {
        for (std::size_t jj = 0; jj < d_in; ++jj) {
            ComplexMatrix e_ij(d_out, d_out);
            for (const auto& k : kraus) {
                // K |i⟩⟨j| K† in components: (K e_ij K†)_{o,o'} = K_{o,i} conj(K_{o',j}).
                for (std::size_t o = 0; o < d_out; ++o) {
                    for (std::size_t op = 0; op < d_out; ++op) {
                        e_ij.at(o, op) += k.at(o, i) * std::conj(k.at(op, jj));
                    }
                }
            }
            for (std::size_t o = 0; o < d_out; ++o) {
                for (std::size_t op = 0; op < d_out; ++op) {
                    j.at(i * d_out + o, jj * d_out + op) += e_ij.at(o, op);
                }
            }
        }
    }
    return j;
}

ComplexMatrix apply_by_kraus(const std::vector<ComplexMatrix>& kraus,
                             const ComplexMatrix& rho) {
    ComplexMatrix out(kraus.front().rows(), kraus.front().rows());
    for (const auto& k : kraus) out = out + matmul(matmul(k, rho), dagger(k));
    return out;
}

}  // namespace

TEST_CASE("identity channel Choi is the unnormalized maximally entangled state") {
    const ChoiOperator j = choi_from_kraus({ComplexMatrix::identity(2)});
    REQUIRE(j.matrix.rows() == 4);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            const bool on = (r == 0 || r == 3) && (c == 0 || c == 3);
            CHECK(j.matrix.at(r, c) == (on ? Cx{1.0, 0.0} : Cx{0.0, 0.0}));
        }
    }
    CHECK(trace(j.matrix) == Cx{2.0, 0.0});
}

TEST_CASE("choi_from_kraus agrees with the definitional construction") {
    SeededRng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t dim = 2 + trial % 2;
        const auto kraus = random_cptp_kraus(dim, 1 + trial % 3, rng);
        const ChoiOperator j = choi_from_kraus(kraus);
        CHECK(max_abs_diff(j.matrix, choi_by_definition(kraus)) < 1e-12);
    }
    CHECK_THROWS_AS(choi_from_kraus({}), std::invalid_argument);
}

TEST_CASE("apply_channel matches the Kraus action") {
    SeededRng rng(23);

    SUBCASE("identity and bit flip") {
        const ComplexMatrix rho = random_density(2, rng);
        const ChoiOperator id = choi_from_kraus({ComplexMatrix::identity(2)});
        CHECK(max_abs_diff(apply_channel(id, rho), rho) < 1e-13);

        const ChoiOperator flip = choi_from_kraus({pauli_x()});
        const ComplexMatrix zero = ComplexMatrix::outer({1.0, 0.0});
        const ComplexMatrix one = ComplexMatrix::outer({0.0, 1.0});
        CHECK(max_abs_diff(apply_channel(flip, zero), one) < 1e-13);
    }

    SUBCASE("random channels") {
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t dim = 2 + trial % 2;
            const auto kraus = random_cptp_kraus(dim, 2, rng);
            const ComplexMatrix rho = random_density(dim, rng);
            CHECK(max_abs_diff(apply_channel(choi_from_kraus(kraus), rho),
                               apply_by_kraus(kraus, rho)) < 1e-11);
        }
    }

    SUBCASE("depolarizing endpoints") {
        const ComplexMatrix rho = random_density(2, rng);
        CHECK(max_abs_diff(apply_channel(depolarizing(0.0, 1), rho), rho) < 1e-13);
        CHECK(max_abs_diff(apply_channel(depolarizing(1.0, 1), rho),
                           ComplexMatrix::identity(2) * 0.5) < 1e-13);
        CHECK_THROWS_AS(depolarizing(-0.1, 1), std::invalid_argument);
        CHECK_THROWS_AS(depolarizing(1.1, 1), std::invalid_argument);
        CHECK_THROWS_AS(depolarizing(0.5, 0), std::invalid_argument);
    }
}

TEST_CASE("kraus extraction round-trips the Choi matrix") {
    SeededRng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto kraus = random_cptp_kraus(2, 1 + trial % 3, rng);
        const ChoiOperator j = choi_from_kraus(kraus);
        const auto back = kraus_from_choi(j);
        CHECK(max_abs_diff(choi_from_kraus(back).matrix, j.matrix) < 1e-8);
    }
}

TEST_CASE("is_cptp accepts channels and localizes failures") {
    SeededRng rng(41);
    const auto kraus = random_cptp_kraus(2, 2, rng);
    const ChoiOperator j = choi_from_kraus(kraus);

    CHECK(is_cptp(j).ok());

    ChoiOperator scaled = j;
    scaled.matrix = scaled.matrix * 1.5;
    const CptpReport r1 = is_cptp(scaled);
    CHECK(r1.psd_ok);
    CHECK_FALSE(r1.trace_ok);
    CHECK(r1.max_violation > 0.1);

    ChoiOperator indefinite = j;
    indefinite.matrix = indefinite.matrix - ComplexMatrix::identity(4) * 0.75;
    CHECK_FALSE(is_cptp(indefinite).psd_ok);
}

TEST_CASE("conditional_state renormalizes and rejects zero mass") {
    const ComplexMatrix zero = ComplexMatrix::outer({1.0, 0.0});
    const ComplexMatrix one = ComplexMatrix::outer({0.0, 1.0});

    // Sub-CPTP map: project onto |1⟩ and pass the survivor through.
    const ChoiOperator keep_one = choi_from_kraus({one});
    const ComplexMatrix plus = ComplexMatrix::outer({kS, kS});
    const ComplexMatrix post = conditional_state(keep_one, plus);
    CHECK(max_abs_diff(post, one) < 1e-12);

    CHECK_THROWS_AS(conditional_state(keep_one, zero), std::invalid_argument);
}

TEST_CASE("instruments: branch structure, totals, and validation") {
    const ComplexMatrix p0 = ComplexMatrix::outer({1.0, 0.0});
    const ComplexMatrix p1 = ComplexMatrix::outer({0.0, 1.0});

    Instrument reset;
    reset.space = {"A", 2};
    reset.povm = {p0, p1};
    reset.outputs = {p0, p0};

    SUBCASE("branch probabilities follow the Born rule and sum to one") {
        const ComplexMatrix plus = ComplexMatrix::outer({kS, kS});
        const auto branches = apply_instrument(reset, plus);
        REQUIRE(branches.size() == 2);
        CHECK(branches[0].probability == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(branches[1].probability == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(branches[0].probability + branches[1].probability ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(max_abs_diff(branches[0].state, p0) < 1e-12);
        CHECK(max_abs_diff(branches[1].state, p0) < 1e-12);
    }

    SUBCASE("outcome-summed Choi equals the matching replacement channel") {
        const ChoiOperator total = instrument_total_choi(reset);
        const ChoiOperator doz = do_intervention(p0, {"A", 2});
        CHECK(max_abs_diff(total.matrix, doz.matrix) < 1e-13);
        CHECK(is_cptp(total).ok());
    }

    SUBCASE("validation rejects broken instruments") {
        Instrument bad = reset;
        bad.povm = {p0, p0};  // does not resolve the identity
        CHECK_THROWS_AS(validate_instrument(bad), std::invalid_argument);

        Instrument scaled = reset;
        scaled.outputs = {p0 * 2.0, p0};  // not unit trace
        CHECK_THROWS_AS(validate_instrument(scaled), std::invalid_argument);

        Instrument mismatched = reset;
        mismatched.outputs.pop_back();
        CHECK_THROWS_AS(validate_instrument(mismatched), std::invalid_argument);
    }
}

TEST_CASE("do_intervention discards its input") {
    SeededRng rng(67);
    const ComplexMatrix sigma = random_density(2, rng);
    const ChoiOperator doj = do_intervention(sigma, {"in", 2});
    for (int trial = 0; trial < 5; ++trial) {
        const ComplexMatrix rho = random_density(2, rng);
        CHECK(max_abs_diff(apply_channel(doj, rho), sigma) < 1e-12);
    }
    CHECK_THROWS_AS(do_intervention(ComplexMatrix::diag({2.0, 0.0}), SpaceLabel{"in", 2}),
                    std::invalid_argument);
}

TEST_CASE("compose chains channels in application order") {
    SeededRng rng(71);
    const ChoiOperator h = choi_from_kraus({hadamard()});
    const ChoiOperator x = choi_from_kraus({pauli_x()});
    const ChoiOperator xh = compose(x, h);
    for (int trial = 0; trial < 5; ++trial) {
        const ComplexMatrix rho = random_density(2, rng);
        const ComplexMatrix direct = apply_channel(x, apply_channel(h, rho));
        CHECK(max_abs_diff(apply_channel(xh, rho), direct) < 1e-12);
    }
}
