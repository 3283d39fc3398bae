#pragma once

#include <vector>

#include "causalq/matrix.hpp"
#include "causalq/rng.hpp"

namespace causalq {

// Seeded generators for test scenarios and normalization probes. All draws
// come from the counter-based stream, so results are platform-stable.

// Ginibre matrix: independent complex gaussian entries.
ComplexMatrix random_ginibre(std::size_t rows, std::size_t cols, SeededRng& rng);

// Haar-like unitary via Gram-Schmidt on a Ginibre matrix.
ComplexMatrix random_unitary(std::size_t dim, SeededRng& rng);

std::vector<Cx> random_pure_state(std::size_t dim, SeededRng& rng);

// Full-rank density matrix G G† / Tr[G G†].
ComplexMatrix random_density(std::size_t dim, SeededRng& rng);

// CPTP Kraus set {G_a M^{-1/2}} with M = Σ_a G_a† G_a.
std::vector<ComplexMatrix> random_cptp_kraus(std::size_t dim, std::size_t n_kraus,
                                             SeededRng& rng);

}  // namespace causalq
