#include "causalq/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace causalq {

namespace {

std::vector<std::size_t> space_dims(const std::vector<SpaceLabel>& spaces) {
    std::vector<std::size_t> dims;
    dims.reserve(spaces.size());
    for (const SpaceLabel& s : spaces) {
        if (s.dim == 0) throw std::invalid_argument("space '" + s.name + "' has dimension 0");
        dims.push_back(s.dim);
    }
    return dims;
}

// Decompose a flat index into per-factor digits, most significant factor first.
void unflatten(std::size_t index, const std::vector<std::size_t>& dims,
               std::vector<std::size_t>& digits) {
    for (std::size_t k = dims.size(); k-- > 0;) {
        digits[k] = index % dims[k];
        index /= dims[k];
    }
}

std::size_t flatten(const std::vector<std::size_t>& digits,
                    const std::vector<std::size_t>& dims) {
    std::size_t index = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        index = index * dims[k] + digits[k];
    }
    return index;
}

std::size_t find_space(const std::vector<SpaceLabel>& spaces, const std::string& name) {
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        if (spaces[i].name == name) return i;
    }
    throw std::invalid_argument("unknown space label '" + name + "'");
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m,
                            const std::vector<SpaceLabel>& spaces,
                            const std::vector<std::string>& keep) {
    const std::vector<std::size_t> dims = space_dims(spaces);
    const std::size_t full = std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                                             std::multiplies<>());
    if (!m.is_square() || m.rows() != full) {
        throw std::invalid_argument("partial_trace: matrix shape does not match labels");
    }

    std::vector<bool> is_traced(spaces.size(), true);
    for (const std::string& name : keep) {
        const std::size_t idx = find_space(spaces, name);
        if (!is_traced[idx]) throw std::invalid_argument("space '" + name + "' kept twice");
        is_traced[idx] = false;
    }

    std::vector<std::size_t> kept_dims, traced_dims;
    std::vector<std::size_t> kept_pos, traced_pos;
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        if (is_traced[i]) {
            traced_dims.push_back(dims[i]);
            traced_pos.push_back(i);
        } else {
            kept_dims.push_back(dims[i]);
            kept_pos.push_back(i);
        }
    }
    const std::size_t kept_total =
        std::accumulate(kept_dims.begin(), kept_dims.end(), std::size_t{1}, std::multiplies<>());
    const std::size_t traced_total =
        std::accumulate(traced_dims.begin(), traced_dims.end(), std::size_t{1}, std::multiplies<>());

    ComplexMatrix out(kept_total, kept_total);
    std::vector<std::size_t> kd(kept_dims.size()), kd2(kept_dims.size()), td(traced_dims.size());
    std::vector<std::size_t> row_digits(dims.size()), col_digits(dims.size());
    for (std::size_t kr = 0; kr < kept_total; ++kr) {
        unflatten(kr, kept_dims, kd);
        for (std::size_t kc = 0; kc < kept_total; ++kc) {
            unflatten(kc, kept_dims, kd2);
            Cx sum(0.0, 0.0);
            for (std::size_t t = 0; t < traced_total; ++t) {
                unflatten(t, traced_dims, td);
                for (std::size_t i = 0; i < kept_pos.size(); ++i) {
                    row_digits[kept_pos[i]] = kd[i];
                    col_digits[kept_pos[i]] = kd2[i];
                }
                for (std::size_t i = 0; i < traced_pos.size(); ++i) {
                    row_digits[traced_pos[i]] = td[i];
                    col_digits[traced_pos[i]] = td[i];
                }
                sum += m.at(flatten(row_digits, dims), flatten(col_digits, dims));
            }
            out.at(kr, kc) = sum;
        }
    }
    return out;
}

ComplexMatrix permute_spaces(const ComplexMatrix& m,
                             const std::vector<SpaceLabel>& spaces,
                             const std::vector<std::string>& new_order) {
    const std::vector<std::size_t> dims = space_dims(spaces);
    const std::size_t full = std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                                             std::multiplies<>());
    if (!m.is_square() || m.rows() != full) {
        throw std::invalid_argument("permute_spaces: matrix shape does not match labels");
    }
    if (new_order.size() != spaces.size()) {
        throw std::invalid_argument("permute_spaces: order must list every space exactly once");
    }

    // perm[k] = position in the old order of the k-th factor of the new order.
    std::vector<std::size_t> perm(new_order.size());
    std::vector<bool> used(spaces.size(), false);
    for (std::size_t k = 0; k < new_order.size(); ++k) {
        const std::size_t idx = find_space(spaces, new_order[k]);
        if (used[idx]) {
            throw std::invalid_argument("permute_spaces: space '" + new_order[k] + "' repeated");
        }
        used[idx] = true;
        perm[k] = idx;
    }

    std::vector<std::size_t> new_dims(perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) new_dims[k] = dims[perm[k]];

    ComplexMatrix out(full, full);
    std::vector<std::size_t> nr(perm.size()), nc(perm.size());
    std::vector<std::size_t> old_r(perm.size()), old_c(perm.size());
    for (std::size_t r = 0; r < full; ++r) {
        unflatten(r, new_dims, nr);
        for (std::size_t k = 0; k < perm.size(); ++k) old_r[perm[k]] = nr[k];
        const std::size_t orow = flatten(old_r, dims);
        for (std::size_t c = 0; c < full; ++c) {
            unflatten(c, new_dims, nc);
            for (std::size_t k = 0; k < perm.size(); ++k) old_c[perm[k]] = nc[k];
            out.at(r, c) = m.at(orow, flatten(old_c, dims));
        }
    }
    return out;
}

namespace {

double max_offdiag(const ComplexMatrix& a) {
    double worst = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = r + 1; c < a.cols(); ++c) {
            worst = std::max(worst, std::abs(a.at(r, c)));
        }
    }
    return worst;
}

}  // namespace

EigenResult hermitian_eigen(const ComplexMatrix& m, double tol) {
    if (!m.is_square()) throw std::invalid_argument("hermitian_eigen: matrix not square");
    if (!is_hermitian(m, tol)) throw std::invalid_argument("hermitian_eigen: matrix not Hermitian");

    const std::size_t n = m.rows();
    // Work on the exactly-Hermitian part so rotations stay unitary.
    ComplexMatrix a(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            a.at(r, c) = 0.5 * (m.at(r, c) + std::conj(m.at(c, r)));
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        if (max_offdiag(a) < kJacobiOffDiagThreshold) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Cx apq = a.at(p, q);
                const double beta = std::abs(apq);
                if (beta < kJacobiOffDiagThreshold) continue;

                // Unitary rotation R with R_pp = cos θ, R_pq = sin θ e^{iφ},
                // R_qp = -sin θ e^{-iφ}, R_qq = cos θ zeroing A'_pq, where
                // a_pq = |a_pq| e^{iφ} and tan 2θ = 2|a_pq| / (a_qq - a_pp).
                const Cx phase = apq / beta;  // e^{iφ}
                const double alpha = a.at(p, p).real();
                const double gamma = a.at(q, q).real();
                const double tau = (gamma - alpha) / (2.0 * beta);
                const double sign = tau >= 0.0 ? 1.0 : -1.0;
                const double t = sign / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Column update: (A R) touches columns p, q.
                for (std::size_t k = 0; k < n; ++k) {
                    const Cx akp = a.at(k, p);
                    const Cx akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * std::conj(phase) * akq;
                    a.at(k, q) = s * phase * akp + c * akq;
                }
                // Row update: (R† A) touches rows p, q.
                for (std::size_t k = 0; k < n; ++k) {
                    const Cx apk = a.at(p, k);
                    const Cx aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * phase * aqk;
                    a.at(q, k) = s * std::conj(phase) * apk + c * aqk;
                }
                a.at(p, q) = 0.0;
                a.at(q, p) = 0.0;
                a.at(p, p) = Cx(a.at(p, p).real(), 0.0);
                a.at(q, q) = Cx(a.at(q, q).real(), 0.0);

                for (std::size_t k = 0; k < n; ++k) {
                    const Cx vkp = v.at(k, p);
                    const Cx vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - s * std::conj(phase) * vkq;
                    v.at(k, q) = s * phase * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a.at(i, i).real() > a.at(j, j).real();
    });

    EigenResult result;
    result.values.resize(n);
    result.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        result.values[k] = a.at(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) {
            result.vectors.at(r, k) = v.at(r, order[k]);
        }
    }
    return result;
}

bool is_psd(const ComplexMatrix& m, double tol) {
    if (!is_hermitian(m, tol)) return false;
    const EigenResult eig = hermitian_eigen(m, tol);
    return eig.values.empty() || eig.values.back() >= -tol;
}

}  // namespace causalq
