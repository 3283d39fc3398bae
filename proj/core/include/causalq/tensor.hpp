#pragma once

#include <vector>

#include "causalq/matrix.hpp"

namespace causalq {

// Convergence controls for the cyclic Jacobi eigensolver.
constexpr double kJacobiOffDiagThreshold = 1e-12;
constexpr int kJacobiMaxSweeps = 100;

// Trace out every factor not named in `keep`; the kept factors stay in
// their original order. `m` must be square with dimension prod(spaces[i].dim),
// indexed with spaces[0] as the most significant factor.
ComplexMatrix partial_trace(const ComplexMatrix& m,
                            const std::vector<SpaceLabel>& spaces,
                            const std::vector<std::string>& keep);

// Reorder tensor factors: new_order is a permutation of the names in `spaces`.
// Returns the matrix indexed by the permuted factor order.
ComplexMatrix permute_spaces(const ComplexMatrix& m,
                             const std::vector<SpaceLabel>& spaces,
                             const std::vector<std::string>& new_order);

struct EigenResult {
    std::vector<double> values;   // descending
    ComplexMatrix vectors;        // columns, matching values
};

// Eigendecomposition of a Hermitian matrix via cyclic Jacobi rotations.
// Input must be Hermitian within `tol`; reconstruction V diag(λ) V† matches
// the input to ~10x machine precision at the dimensions used here (<= 64).
EigenResult hermitian_eigen(const ComplexMatrix& m, double tol = kDefaultTol);

// Hermitian within tol and min eigenvalue >= -tol.
bool is_psd(const ComplexMatrix& m, double tol = kDefaultTol);

}  // namespace causalq
