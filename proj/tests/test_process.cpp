#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "causalq/channels.hpp"
#include "causalq/process.hpp"
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

ComplexMatrix proj(std::size_t o) {
    ComplexMatrix p(2, 2);
    p.at(o, o) = 1.0;
    return p;
}

BornTerm party_a(const std::vector<ComplexMatrix>& kraus) {
    return BornTerm::channel(choi_from_kraus(kraus, {kSpaceAIn, 2}, {kSpaceAOut, 2}));
}

BornTerm party_b(const std::vector<ComplexMatrix>& kraus) {
    return BornTerm::channel(choi_from_kraus(kraus, {kSpaceBIn, 2}, {kSpaceBOut, 2}));
}

ComplexMatrix random_effect(SeededRng& rng) {
    const ComplexMatrix g = random_ginibre(2, 2, rng);
    const ComplexMatrix gg = matmul(g, dagger(g));
    return gg * (1.0 / (max_abs(gg) + 1.0));
}

}  // namespace

TEST_CASE("fixed-order process routes the preparation through A then B") {
    SeededRng rng(5);
    const ComplexMatrix rho = random_density(2, rng);
    const ProcessMatrix w = fixed_order_process(rho, PartyOrder::AThenB);
    REQUIRE(w.spaces.size() == 5);
    CHECK(w.spaces.front().name == kSpaceAIn);
    CHECK(w.spaces.back().name == kSpaceFuture);

    SUBCASE("identity parties hand the preparation to F") {
        for (std::size_t o = 0; o < 2; ++o) {
            const double p = born_probability(
                w, {party_a({ComplexMatrix::identity(2)}),
                    party_b({ComplexMatrix::identity(2)}),
                    BornTerm::effect(proj(o), {kSpaceFuture, 2})});
            CHECK(p == doctest::Approx(rho.at(o, o).real()).epsilon(1e-10));
        }
    }

    SUBCASE("unitary parties compose in declared order") {
        const ComplexMatrix expected =
            apply_channel(choi_from_kraus({pauli_x()}),
                          apply_channel(choi_from_kraus({hadamard()}), rho));
        for (std::size_t o = 0; o < 2; ++o) {
            const double p =
                born_probability(w, {party_a({hadamard()}), party_b({pauli_x()}),
                                     BornTerm::effect(proj(o), {kSpaceFuture, 2})});
            CHECK(p == doctest::Approx(expected.at(o, o).real()).epsilon(1e-10));
        }
    }

    SUBCASE("replacing A's slot cuts the preparation out entirely") {
        const ComplexMatrix sigma = random_density(2, rng);
        const ChoiOperator forced =
            do_intervention(sigma, {kSpaceAIn, 2}).relabeled(kSpaceAIn, kSpaceAOut);
        const ComplexMatrix expected = apply_channel(choi_from_kraus({pauli_x()}), sigma);
        for (std::size_t o = 0; o < 2; ++o) {
            const double p =
                born_probability(w, {BornTerm::channel(forced), party_b({pauli_x()}),
                                     BornTerm::effect(proj(o), {kSpaceFuture, 2})});
            CHECK(p == doctest::Approx(expected.at(o, o).real()).epsilon(1e-10));
        }
    }
}

TEST_CASE("the two fixed orders are distinguishable") {
    const ComplexMatrix plus = ComplexMatrix::outer({kS, kS});
    const ProcessMatrix ab = fixed_order_process(plus, PartyOrder::AThenB);
    const ProcessMatrix ba = fixed_order_process(plus, PartyOrder::BThenA);
    const std::vector<BornTerm> head = {party_a({hadamard()}), party_b({pauli_x()})};

    // A then B: X(H|+⟩) = X|0⟩ = |1⟩; B then A: H(X|+⟩) = H|+⟩ = |0⟩.
    auto prob = [&](const ProcessMatrix& w, std::size_t o) {
        std::vector<BornTerm> terms = head;
        terms.push_back(BornTerm::effect(proj(o), {kSpaceFuture, 2}));
        return born_probability(w, terms);
    };
    CHECK(prob(ab, 1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(prob(ab, 0) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(prob(ba, 0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(prob(ba, 1) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("state preparation contracts to Tr[M rho]") {
    SeededRng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const ComplexMatrix rho = random_density(2, rng);
        const ComplexMatrix m = random_effect(rng);
        const ProcessMatrix w = state_prep_process(rho, {"X", 2});
        const double p = born_probability(w, {BornTerm::effect(m, {"X", 2})});
        CHECK(p == doctest::Approx(trace(matmul(m, rho)).real()).epsilon(1e-10));
    }
    CHECK_THROWS_AS(state_prep_process(ComplexMatrix::diag({2.0, 0.0}), SpaceLabel{"X", 2}),
                    std::invalid_argument);
}

TEST_CASE("switch process matrix reproduces the Kraus-level supermap") {
    SeededRng rng(29);
    for (int trial = 0; trial < 12; ++trial) {
        const auto kraus_a = random_cptp_kraus(2, 1 + trial % 3, rng);
        const auto kraus_b = random_cptp_kraus(2, 1 + (trial + 1) % 3, rng);
        const ComplexMatrix control = random_density(2, rng);
        const ComplexMatrix target = random_density(2, rng);

        const ProcessMatrix w = switch_process_matrix(control, target);
        const ComplexMatrix joint = switch_supermap(kraus_a, kraus_b, control, target);

        double total = 0.0;
        for (std::size_t o = 0; o < 2; ++o) {
            for (std::size_t c = 0; c < 2; ++c) {
                const double via_born = born_probability(
                    w, {party_a(kraus_a), party_b(kraus_b),
                        BornTerm::effect(proj(o), {kSpaceFuture, 2}),
                        BornTerm::effect(proj(c), {kSpaceControl, 2})});
                const double via_supermap =
                    trace(matmul(kron(proj(o), proj(c)), joint)).real();
                CHECK(std::abs(via_born - via_supermap) < 1e-9);
                total += via_born;
            }
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("supermap agreement extends to non-projective effects") {
    SeededRng rng(37);
    for (int trial = 0; trial < 6; ++trial) {
        const auto kraus_a = random_cptp_kraus(2, 2, rng);
        const auto kraus_b = random_cptp_kraus(2, 2, rng);
        const ComplexMatrix control = random_density(2, rng);
        const ComplexMatrix target = random_density(2, rng);
        const ComplexMatrix ef = random_effect(rng);
        const ComplexMatrix ec = random_effect(rng);

        const ProcessMatrix w = switch_process_matrix(control, target);
        const double via_born = born_probability(
            w, {party_a(kraus_a), party_b(kraus_b),
                BornTerm::effect(ef, {kSpaceFuture, 2}),
                BornTerm::effect(ec, {kSpaceControl, 2})});
        const ComplexMatrix joint = switch_supermap(kraus_a, kraus_b, control, target);
        const double via_supermap = trace(matmul(kron(ef, ec), joint)).real();
        CHECK(std::abs(via_born - via_supermap) < 1e-9);
    }
}

TEST_CASE("switch joint state golden for H/X on |0⟩ with coherent control") {
    const ComplexMatrix control = ComplexMatrix::outer({kS, kS});
    const ComplexMatrix target = proj(0);
    const ComplexMatrix joint =
        switch_supermap({hadamard()}, {pauli_x()}, control, target);
    // XH|0⟩ ⊗ |0⟩/√2 + HX|0⟩ ⊗ |1⟩/√2 = (|00⟩ + |01⟩ + |10⟩ - |11⟩)/2.
    const ComplexMatrix expected =
        ComplexMatrix::outer({Cx{0.5, 0}, Cx{0.5, 0}, Cx{0.5, 0}, Cx{-0.5, 0}});
    CHECK(max_abs_diff(joint, expected) < 1e-12);
}

TEST_CASE("definite control collapses the switch to a single ordering") {
    SeededRng rng(43);
    const auto kraus_a = random_cptp_kraus(2, 2, rng);
    const auto kraus_b = random_cptp_kraus(2, 2, rng);
    const ComplexMatrix rho = random_density(2, rng);

    const ComplexMatrix joint = switch_supermap(kraus_a, kraus_b, proj(0), rho);
    const ComplexMatrix ba =
        apply_channel(choi_from_kraus(kraus_b), apply_channel(choi_from_kraus(kraus_a), rho));
    CHECK(max_abs_diff(joint, kron(ba, proj(0))) < 1e-10);

    const ComplexMatrix joint1 = switch_supermap(kraus_a, kraus_b, proj(1), rho);
    const ComplexMatrix ab =
        apply_channel(choi_from_kraus(kraus_a), apply_channel(choi_from_kraus(kraus_b), rho));
    CHECK(max_abs_diff(joint1, kron(ab, proj(1))) < 1e-10);
}

TEST_CASE("process construction is affine in the control preparation") {
    SeededRng rng(47);
    const ComplexMatrix target = random_density(2, rng);
    const auto kraus_a = random_cptp_kraus(2, 2, rng);
    const auto kraus_b = random_cptp_kraus(2, 2, rng);

    const ProcessMatrix w_mix =
        switch_process_matrix(ComplexMatrix::identity(2) * 0.5, target);
    const ProcessMatrix w0 = switch_process_matrix(proj(0), target);
    const ProcessMatrix w1 = switch_process_matrix(proj(1), target);

    for (std::size_t o = 0; o < 2; ++o) {
        for (std::size_t c = 0; c < 2; ++c) {
            const std::vector<BornTerm> terms = {
                party_a(kraus_a), party_b(kraus_b),
                BornTerm::effect(proj(o), {kSpaceFuture, 2}),
                BornTerm::effect(proj(c), {kSpaceControl, 2})};
            const double mixed = born_probability(w_mix, terms);
            const double split =
                0.5 * born_probability(w0, terms) + 0.5 * born_probability(w1, terms);
            CHECK(mixed == doctest::Approx(split).epsilon(1e-10));
        }
    }
}

TEST_CASE("link product") {
    SeededRng rng(53);

    SUBCASE("disjoint labels degenerate to the Kronecker product") {
        const ComplexMatrix a = random_density(2, rng);
        const ComplexMatrix b = random_density(2, rng);
        const ProcessMatrix pa{a, {{"X", 2}}};
        const ProcessMatrix pb{b, {{"Y", 2}}};
        const ProcessMatrix r = link_product(pa, pb);
        REQUIRE(r.spaces.size() == 2);
        CHECK(r.spaces[0].name == "X");
        CHECK(r.spaces[1].name == "Y");
        CHECK(max_abs_diff(r.matrix, kron(a, b)) < 1e-13);
    }

    SUBCASE("linking a state into a channel's Choi applies the channel") {
        for (int trial = 0; trial < 6; ++trial) {
            const auto kraus = random_cptp_kraus(2, 2, rng);
            const ChoiOperator j = choi_from_kraus(kraus, {"X", 2}, {"Y", 2});
            const ComplexMatrix rho = random_density(2, rng);

            const ProcessMatrix st{rho, {{"X", 2}}};
            const ProcessMatrix ch{j.matrix, {{"X", 2}, {"Y", 2}}};
            const ProcessMatrix out = link_product(st, ch);
            REQUIRE(out.spaces.size() == 1);
            CHECK(out.spaces[0].name == "Y");
            CHECK(max_abs_diff(out.matrix, apply_channel(j, rho)) < 1e-11);
        }
    }

    SUBCASE("pre-linking a symmetric slot commutes with the Born contraction") {
        const ComplexMatrix control = random_density(2, rng);
        const ComplexMatrix target = random_density(2, rng);
        const ProcessMatrix w = switch_process_matrix(control, target);
        const ChoiOperator forced =
            do_intervention(proj(0), {kSpaceAIn, 2}).relabeled(kSpaceAIn, kSpaceAOut);
        const auto kraus_b = random_cptp_kraus(2, 2, rng);

        const ProcessMatrix linked =
            link_product(w, {forced.matrix, {forced.in_space, forced.out_space}});
        REQUIRE(linked.spaces.size() == 4);

        for (std::size_t o = 0; o < 2; ++o) {
            const std::vector<BornTerm> tail = {
                party_b(kraus_b), BornTerm::effect(proj(o), {kSpaceFuture, 2}),
                BornTerm::identity_effect({kSpaceControl, 2})};
            std::vector<BornTerm> full = tail;
            full.push_back(BornTerm::channel(forced));
            CHECK(born_probability(linked, tail) ==
                  doctest::Approx(born_probability(w, full)).epsilon(1e-10));
        }
    }

    SUBCASE("dimension mismatch on a shared label throws") {
        const ProcessMatrix pa{random_density(2, rng), {{"X", 2}}};
        const ProcessMatrix pb{random_density(3, rng), {{"X", 3}}};
        CHECK_THROWS_AS(link_product(pa, pb), std::invalid_argument);
    }
}

TEST_CASE("interference norm witnesses coherent order control") {
    const ComplexMatrix plus = ComplexMatrix::outer({kS, kS});
    const ComplexMatrix zero = proj(0);

    const ProcessMatrix coherent = switch_process_matrix(plus, zero);
    CHECK(interference_norm(coherent) == doctest::Approx(0.5).epsilon(1e-9));

    const ProcessMatrix decohered =
        switch_process_matrix(ComplexMatrix::identity(2) * 0.5, zero);
    CHECK(interference_norm(decohered) == doctest::Approx(0.0).epsilon(1e-9));

    SUBCASE("a bystander control with coherence does not count") {
        const ProcessMatrix base = fixed_order_process(zero, PartyOrder::AThenB);
        ProcessMatrix padded;
        padded.spaces = base.spaces;
        padded.spaces.push_back({kSpaceControl, 2});
        padded.matrix = kron(base.matrix, transpose(plus));
        CHECK(interference_norm(padded) == doctest::Approx(0.0).epsilon(1e-9));
    }

    SUBCASE("a process without a control space throws") {
        const ProcessMatrix base = fixed_order_process(zero, PartyOrder::AThenB);
        CHECK_THROWS_AS(interference_norm(base), std::invalid_argument);
    }
}

TEST_CASE("process validation") {
    const ComplexMatrix plus = ComplexMatrix::outer({kS, kS});
    const ProcessMatrix w = switch_process_matrix(plus, proj(0));

    SUBCASE("the switch process is a valid process") {
        const ProcessReport r = validate_process(w);
        CHECK(r.hermitian_ok);
        CHECK(r.psd_ok);
        CHECK(r.normalization_ok);
        CHECK(r.ok());
        CHECK(r.max_violation < 1e-9);
    }

    SUBCASE("scaling breaks normalization but not positivity") {
        ProcessMatrix bad = w;
        bad.matrix = bad.matrix * 2.0;
        const ProcessReport r = validate_process(bad);
        CHECK(r.psd_ok);
        CHECK_FALSE(r.normalization_ok);
        CHECK(r.max_violation > 0.5);
    }

    SUBCASE("an indefinite matrix fails positivity") {
        ProcessMatrix bad = w;
        bad.matrix = bad.matrix - ComplexMatrix::identity(bad.matrix.rows()) * 0.05;
        CHECK_FALSE(validate_process(bad).psd_ok);
    }

    SUBCASE("fixed-order processes validate too") {
        SeededRng rng(61);
        CHECK(validate_process(fixed_order_process(random_density(2, rng))).ok());
    }
}

TEST_CASE("born_probability rejects bad coverage") {
    const ProcessMatrix w =
        switch_process_matrix(ComplexMatrix::outer({kS, kS}), proj(0));
    const std::vector<BornTerm> partial = {
        party_a({ComplexMatrix::identity(2)}), party_b({ComplexMatrix::identity(2)}),
        BornTerm::identity_effect({kSpaceFuture, 2})};
    CHECK_THROWS_AS(born_probability(w, partial), std::invalid_argument);

    std::vector<BornTerm> doubled = partial;
    doubled.push_back(BornTerm::identity_effect({kSpaceControl, 2}));
    doubled.push_back(BornTerm::identity_effect({kSpaceControl, 2}));
    CHECK_THROWS_AS(born_probability(w, doubled), std::invalid_argument);

    std::vector<BornTerm> unknown = partial;
    unknown.push_back(BornTerm::identity_effect({"Q", 2}));
    CHECK_THROWS_AS(born_probability(w, unknown), std::invalid_argument);

    CHECK_THROWS_AS(BornTerm::effect(ComplexMatrix::identity(3), SpaceLabel{"F", 2}),
                    std::invalid_argument);
}
