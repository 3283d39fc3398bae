#include "causalq/random_states.hpp"

#include <cmath>
#include <stdexcept>

#include "causalq/tensor.hpp"

namespace causalq {

ComplexMatrix random_ginibre(std::size_t rows, std::size_t cols, SeededRng& rng) {
    ComplexMatrix g(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double re = rng.next_gaussian();
            const double im = rng.next_gaussian();
            g.at(r, c) = Cx(re, im);
        }
    }
    return g;
}

ComplexMatrix random_unitary(std::size_t dim, SeededRng& rng) {
    const ComplexMatrix g = random_ginibre(dim, dim, rng);
    ComplexMatrix u(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        std::vector<Cx> col(dim);
        for (std::size_t r = 0; r < dim; ++r) col[r] = g.at(r, c);
        for (std::size_t prev = 0; prev < c; ++prev) {
            Cx overlap(0.0, 0.0);
            for (std::size_t r = 0; r < dim; ++r) {
                overlap += std::conj(u.at(r, prev)) * col[r];
            }
            for (std::size_t r = 0; r < dim; ++r) {
                col[r] -= overlap * u.at(r, prev);
            }
        }
        double norm = 0.0;
        for (const Cx& v : col) norm += std::norm(v);
        norm = std::sqrt(norm);
        if (norm < 1e-12) {
            throw std::runtime_error("random_unitary: degenerate Ginibre column");
        }
        for (std::size_t r = 0; r < dim; ++r) u.at(r, c) = col[r] / norm;
    }
    return u;
}

std::vector<Cx> random_pure_state(std::size_t dim, SeededRng& rng) {
    std::vector<Cx> psi(dim);
    double norm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        psi[i] = Cx(rng.next_gaussian(), rng.next_gaussian());
        norm += std::norm(psi[i]);
    }
    norm = std::sqrt(norm);
    for (Cx& v : psi) v /= norm;
    return psi;
}

ComplexMatrix random_density(std::size_t dim, SeededRng& rng) {
    const ComplexMatrix g = random_ginibre(dim, dim, rng);
    const ComplexMatrix gg = matmul(g, dagger(g));
    return gg * (1.0 / trace(gg).real());
}

std::vector<ComplexMatrix> random_cptp_kraus(std::size_t dim, std::size_t n_kraus,
                                             SeededRng& rng) {
    if (n_kraus == 0) {
        throw std::invalid_argument("random_cptp_kraus: need at least one operator");
    }
    std::vector<ComplexMatrix> raw;
    raw.reserve(n_kraus);
    ComplexMatrix m(dim, dim);
    for (std::size_t a = 0; a < n_kraus; ++a) {
        raw.push_back(random_ginibre(dim, dim, rng));
        m = m + matmul(dagger(raw.back()), raw.back());
    }

    // M^{-1/2} from the eigendecomposition of M = Σ G†G (positive definite
    // almost surely for gaussian draws).
    const EigenResult eig = hermitian_eigen(m);
    ComplexMatrix inv_sqrt(dim, dim);
    for (std::size_t k = 0; k < dim; ++k) {
        if (eig.values[k] < 1e-12) {
            throw std::runtime_error("random_cptp_kraus: singular normalization");
        }
        const double w = 1.0 / std::sqrt(eig.values[k]);
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                inv_sqrt.at(r, c) += eig.vectors.at(r, k) * w *
                                     std::conj(eig.vectors.at(c, k));
            }
        }
    }

    std::vector<ComplexMatrix> kraus;
    kraus.reserve(n_kraus);
    for (const ComplexMatrix& g : raw) kraus.push_back(matmul(g, inv_sqrt));
    return kraus;
}

}  // namespace causalq
