#include <benchmark/benchmark.h>

#include <cmath>

#include "causalq/channels.hpp"
#include "causalq/process.hpp"
#include "causalq/random_states.hpp"
#include "causalq/rng.hpp"
#include "causalq/sampling.hpp"
#include "causalq/simulate.hpp"
#include "causalq/tensor.hpp"

namespace {

using namespace causalq;

void bm_kron(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    SeededRng rng(1);
    const ComplexMatrix a = random_density(n, rng);
    const ComplexMatrix b = random_density(n, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kron(a, b));
    }
}
BENCHMARK(bm_kron)->Arg(4)->Arg(8);

void bm_hermitian_eigen(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    SeededRng rng(2);
    const ComplexMatrix g = random_ginibre(n, n, rng);
    const ComplexMatrix herm = matmul(g, dagger(g));
    for (auto _ : state) {
        benchmark::DoNotOptimize(hermitian_eigen(herm));
    }
}
BENCHMARK(bm_hermitian_eigen)->Arg(4)->Arg(8)->Arg(16);

void bm_switch_process_matrix(benchmark::State& state) {
    const double s = 1.0 / std::sqrt(2.0);
    const ComplexMatrix control = ComplexMatrix::outer({Cx{s, 0}, Cx{s, 0}});
    const ComplexMatrix target = ComplexMatrix::outer({Cx{1, 0}, Cx{0, 0}});
    for (auto _ : state) {
        benchmark::DoNotOptimize(switch_process_matrix(control, target));
    }
}
BENCHMARK(bm_switch_process_matrix);

void bm_born_probability(benchmark::State& state) {
    const double s = 1.0 / std::sqrt(2.0);
    const ProcessMatrix w = switch_process_matrix(
        ComplexMatrix::outer({Cx{s, 0}, Cx{s, 0}}), ComplexMatrix::outer({Cx{1, 0}, Cx{0, 0}}));
    SeededRng rng(3);
    const std::vector<BornTerm> terms = {
        BornTerm::channel(
            choi_from_kraus(random_cptp_kraus(2, 2, rng), {kSpaceAIn, 2}, {kSpaceAOut, 2})),
        BornTerm::channel(
            choi_from_kraus(random_cptp_kraus(2, 2, rng), {kSpaceBIn, 2}, {kSpaceBOut, 2})),
        BornTerm::identity_effect({kSpaceFuture, 2}),
        BornTerm::identity_effect({kSpaceControl, 2})};
    for (auto _ : state) {
        benchmark::DoNotOptimize(born_probability(w, terms));
    }
}
BENCHMARK(bm_born_probability);

void bm_simulate_density_noisy(benchmark::State& state) {
    const Circuit c = build_switch_circuit(NoiseModel{0.01, 0.03});
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_density(c));
    }
}
BENCHMARK(bm_simulate_density_noisy);

void bm_sample_shots(benchmark::State& state) {
    const OutcomeDistribution d = simulate_exact(build_switch_circuit());
    const auto shots = static_cast<std::uint64_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_shots(d, shots, ++seed));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(shots));
}
BENCHMARK(bm_sample_shots)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
